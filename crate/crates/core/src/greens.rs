//! Vector, scalar and paraxial free-space Green's functions along a line.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensTriple {
    pub g_vec: Complex64,
    pub g_sca: Complex64,
    pub g_par: Complex64,
}

impl GreensTriple {
    pub fn magnitudes(&self) -> [f64; 3] {
        [self.g_vec.norm(), self.g_sca.norm(), self.g_par.norm()]
    }

    /// Largest relative gap `|a - b| / max(a, b)` between any two magnitudes.
    pub fn max_pairwise_deviation(&self) -> f64 {
        let m = self.magnitudes();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((m[i] - m[j]).abs() / m[i].max(m[j]));
            }
        }
        worst
    }
}

/// Green's functions at lateral offset `s_x` and broadside distance `d`.
pub fn greens_amplitudes(s_x: f64, d: f64, k: f64) -> Result<GreensTriple> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(
            "greens_amplitudes",
            format!("distance {d} must be positive"),
        ));
    }
    if !(s_x.is_finite() && k.is_finite()) {
        return Err(Error::domain(
            "greens_amplitudes",
            "offset and wavenumber must be finite",
        ));
    }
    let r2 = s_x * s_x + d * d;
    let r = r2.sqrt();
    let wave = Complex64::from_polar(1.0, k * r);
    Ok(GreensTriple {
        g_vec: wave * (d * d / (4.0 * PI * r2 * r)),
        g_sca: wave / (4.0 * PI * r),
        g_par: Complex64::from_polar(1.0 / (4.0 * PI * d), k * (d + s_x * s_x / (2.0 * d))),
    })
}

/// Phase error of the paraxial approximation, `k(√(s²+d²) - d - s²/(2d))`,
/// written to avoid cancellation.
pub fn paraxial_phase_error(s_x: f64, d: f64, k: f64) -> f64 {
    let r = (s_x * s_x + d * d).sqrt();
    // √(s²+d²) - d = s²/(r + d)
    let exact = s_x * s_x / (r + d);
    k * (exact - s_x * s_x / (2.0 * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn broadside_values_coincide() {
        let g = greens_amplitudes(0.0, 10.0, 628.0).unwrap();
        let expected = 1.0 / (40.0 * PI);
        for m in g.magnitudes() {
            assert!((m - expected).abs() <= 4.0 * f64::EPSILON * expected);
        }
        assert!((expected - 7.957_747e-3).abs() < 1e-9);
    }

    #[test]
    fn vector_to_scalar_ratio() {
        let g = greens_amplitudes(1.28, 10.0, 628.0).unwrap();
        let ratio = g.g_vec.norm() / g.g_sca.norm();
        assert!((ratio - 100.0 / (1.28f64.powi(2) + 100.0)).abs() < 1e-14);
        assert!((ratio - 0.983_880).abs() < 1e-6);
    }

    #[test]
    fn paraxial_phase_error_is_small() {
        let k = 2.0 * PI / 0.01;
        let e = paraxial_phase_error(1.28, 10.0, k);
        // Leading term of the expansion: -k s⁴ / (8 d³).
        let lead = -k * 1.28f64.powi(4) / 8000.0;
        assert!((e - lead).abs() < 0.01 * lead.abs());
        assert!(e.abs() < PI / 4.0);
    }

    #[test]
    fn rejects_nonpositive_distance() {
        assert!(greens_amplitudes(0.0, 0.0, 1.0).is_err());
        assert!(greens_amplitudes(0.0, -1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn vector_never_exceeds_scalar(s in -50.0f64..50.0, d in 0.1f64..100.0) {
            let g = greens_amplitudes(s, d, 100.0).unwrap();
            let ratio = g.g_vec.norm() / g.g_sca.norm();
            prop_assert!(ratio > 0.0 && ratio <= 1.0 + 1e-15);
            if s.abs() > 1e-3 * d {
                prop_assert!(ratio < 1.0);
            }
            prop_assert!(g.magnitudes().iter().all(|&m| m > 0.0));
        }
    }
}
