//! Angular power profiles and the statistics derived from them.
//!
//! Cluster profiles are mixtures of von Mises–Fisher densities on the full
//! circle. The isotropic profile is the uniform density `1/π` on the forward
//! half-circle `[0, π)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Side, SideGrid, WavenumberGrid};
use crate::numerics::{
    bessel_i0_complex, bessel_i_scaled, bessel_j0, integrate_fixed, integrate_panels,
    GaussLegendre, Integral, QuadratureSpec, DEFAULT_NODES_PER_PANEL,
};

const ALPHA_MAX: f64 = 1e6;
const WEIGHT_TOL: f64 = 1e-12;

/// One von Mises–Fisher component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub weight: f64,
    /// Mean angle in radians.
    pub mean_angle: f64,
    /// Concentration `α`.
    pub alpha: f64,
}

impl Cluster {
    pub fn from_concentration(weight: f64, mean_angle: f64, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::domain(
                "Cluster",
                format!("concentration {alpha} must be >= 0"),
            ));
        }
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(Error::domain(
                "Cluster",
                format!("weight {weight} must lie in (0, 1]"),
            ));
        }
        if !mean_angle.is_finite() {
            return Err(Error::domain("Cluster", "mean angle must be finite"));
        }
        Ok(Self {
            weight,
            mean_angle,
            alpha,
        })
    }

    /// Cluster whose concentration solves the circular-variance fixed point.
    pub fn from_variance(weight: f64, mean_angle: f64, nu2: f64) -> Result<Self> {
        Self::from_concentration(weight, mean_angle, concentration_from_variance(nu2)?)
    }

    pub fn circular_variance(&self) -> f64 {
        variance_from_concentration(self.alpha)
    }

    /// vMF density `e^{α cos(θ-θ̄)} / (2π I0(α))`, evaluated with scaled Bessel.
    pub fn density(&self, theta: f64) -> f64 {
        let i0e = bessel_i_scaled(0, self.alpha).expect("alpha validated on construction");
        (self.alpha * ((theta - self.mean_angle).cos() - 1.0)).exp() / (2.0 * PI * i0e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScatteringProfile {
    Isotropic,
    Clusters(Vec<Cluster>),
}

impl ScatteringProfile {
    /// Mixture profile; weights must sum to one.
    pub fn clusters(clusters: Vec<Cluster>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::Config(
                "a cluster profile needs at least one cluster".into(),
            ));
        }
        let total: f64 = clusters.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Config(format!(
                "cluster weights sum to {total}, expected 1"
            )));
        }
        Ok(Self::Clusters(clusters))
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self, Self::Isotropic)
    }

    fn max_alpha(&self) -> f64 {
        match self {
            Self::Isotropic => 0.0,
            Self::Clusters(c) => c.iter().map(|c| c.alpha).fold(0.0, f64::max),
        }
    }

    /// `Ã²(θ)`.
    pub fn psf_value(&self, theta: f64) -> f64 {
        match self {
            Self::Isotropic => {
                if (0.0..PI).contains(&theta) {
                    1.0 / PI
                } else {
                    0.0
                }
            }
            Self::Clusters(c) => c.iter().map(|c| c.weight * c.density(theta)).sum(),
        }
    }

    /// Angular density folded onto the forward half-circle, as it enters the
    /// one-sided power spectral density.
    pub fn forward_psf(&self, theta: f64) -> f64 {
        match self {
            Self::Isotropic => 1.0 / PI,
            Self::Clusters(_) => 2.0 * self.psf_value(theta),
        }
    }
}

/// `1 - (I1(α)/I0(α))²`.
pub fn variance_from_concentration(alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 1.0;
    }
    let i0 = bessel_i_scaled(0, alpha).expect("alpha >= 0");
    let i1 = bessel_i_scaled(1, alpha).expect("alpha >= 0");
    let r = i1 / i0;
    (1.0 - r) * (1.0 + r)
}

/// Inverts [`variance_from_concentration`] by bisection on `[0, 1e6]`.
pub fn concentration_from_variance(nu2: f64) -> Result<f64> {
    if !(nu2 > 0.0 && nu2 <= 1.0) {
        return Err(Error::domain(
            "concentration_from_variance",
            format!("circular variance {nu2} must lie in (0, 1]"),
        ));
    }
    if nu2 == 1.0 {
        return Ok(0.0);
    }
    if nu2 < variance_from_concentration(ALPHA_MAX) {
        return Err(Error::domain(
            "concentration_from_variance",
            format!("circular variance {nu2} needs a concentration above {ALPHA_MAX}"),
        ));
    }
    let (mut lo, mut hi) = (0.0_f64, ALPHA_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if variance_from_concentration(mid) > nu2 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-index variances `σ²` of both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralStats {
    pub sigma2_s: Vec<f64>,
    pub sigma2_r: Vec<f64>,
}

impl SpectralStats {
    pub fn new(
        source: &ScatteringProfile,
        receiver: &ScatteringProfile,
        grid: &WavenumberGrid,
    ) -> Self {
        Self {
            sigma2_s: variance_spectrum(source, grid, Side::Source),
            sigma2_r: variance_spectrum(receiver, grid, Side::Receiver),
        }
    }

    pub fn side(&self, side: Side) -> &[f64] {
        match side {
            Side::Source => &self.sigma2_s,
            Side::Receiver => &self.sigma2_r,
        }
    }
}

/// Integral of `Ã²` over every angular cell of one side.
pub fn variance_spectrum(
    profile: &ScatteringProfile,
    grid: &WavenumberGrid,
    side: Side,
) -> Vec<f64> {
    side_variance(profile, grid.side(side))
}

pub fn side_variance(profile: &ScatteringProfile, side: &SideGrid) -> Vec<f64> {
    match profile {
        // Exact: the density is constant on [0, π].
        ScatteringProfile::Isotropic => (0..side.len())
            .map(|i| {
                let (a, b) = side.angle_cell(i);
                (b - a) / PI
            })
            .collect(),
        ScatteringProfile::Clusters(_) => {
            let panels = 4 * (profile.max_alpha() / 50.0).ceil().max(1.0) as usize;
            let rule = GaussLegendre::new(DEFAULT_NODES_PER_PANEL);
            (0..side.len())
                .map(|i| {
                    let (a, b) = side.angle_cell(i);
                    if b <= a {
                        return 0.0;
                    }
                    integrate_fixed(
                        |t| Complex64::new(profile.psf_value(t), 0.0),
                        a,
                        b,
                        panels,
                        &rule,
                    )
                    .expect("vMF density is finite")
                    .re
                })
                .collect()
        }
    }
}

/// Closed-form ACF of one vMF cluster; `α = 0` gives `J0(k r)`.
pub fn acf_closed_form(alpha: f64, mean_angle: f64, k: f64, r_x: f64) -> Result<Complex64> {
    if !(alpha >= 0.0) {
        return Err(Error::domain(
            "acf_closed_form",
            format!("concentration {alpha} must be >= 0"),
        ));
    }
    let kr = k * r_x;
    if alpha == 0.0 {
        return Ok(Complex64::new(bessel_j0(kr)?, 0.0));
    }
    let z2 = Complex64::new(alpha * alpha - kr * kr, 2.0 * alpha * kr * mean_angle.cos());
    let num = bessel_i0_complex(z2.sqrt())?;
    let den = bessel_i0_complex(Complex64::new(alpha, 0.0))?;
    Ok(num.ratio(&den))
}

/// Closed-form ACF of a whole profile.
pub fn acf_profile(profile: &ScatteringProfile, k: f64, r_x: f64) -> Result<Complex64> {
    match profile {
        ScatteringProfile::Isotropic => Ok(Complex64::new(bessel_j0(k * r_x)?, 0.0)),
        ScatteringProfile::Clusters(c) => c.iter().try_fold(Complex64::new(0.0, 0.0), |acc, c| {
            Ok(acc + c.weight * acf_closed_form(c.alpha, c.mean_angle, k, r_x)?)
        }),
    }
}

/// Panel quadrature of `∫ Ã²(θ) e^{j k r cos θ} dθ`.
///
/// Clusters are integrated over the full circle, the isotropic profile over
/// `[0, π]`.
pub fn acf_quadrature(profile: &ScatteringProfile, k: f64, r_x: f64) -> Result<Integral> {
    let kr = k * r_x;
    let (a, b) = match profile {
        ScatteringProfile::Isotropic => (0.0, PI),
        ScatteringProfile::Clusters(_) => (-PI, PI),
    };
    let swing = (b - a) / PI;
    let panels = 4
        + (swing * kr.abs() / PI).ceil() as usize
        + (4.0 * swing * profile.max_alpha().sqrt()).ceil() as usize;
    let spec = QuadratureSpec::new(panels, DEFAULT_NODES_PER_PANEL, 1e-12)?;
    integrate_panels(
        |t| profile.psf_value(t) * Complex64::from_polar(1.0, kr * t.cos()),
        a,
        b,
        &spec,
    )
}

fn check_propagating(function: &'static str, k: f64, k_x: f64) -> Result<f64> {
    if !(k > 0.0) || !(k_x.abs() < k) {
        return Err(Error::domain(
            function,
            format!("|k_x| = {} must be below k = {k}", k_x.abs()),
        ));
    }
    Ok((k * k - k_x * k_x).sqrt())
}

/// Closed-form PSD of one vMF cluster, with its leading factor 2.
pub fn psd_closed_form(alpha: f64, mean_angle: f64, k: f64, k_x: f64) -> Result<f64> {
    let gamma = check_propagating("psd_closed_form", k, k_x)?;
    if !(alpha >= 0.0) {
        return Err(Error::domain(
            "psd_closed_form",
            format!("concentration {alpha} must be >= 0"),
        ));
    }
    let c = k_x / k;
    let s = (1.0 - c * c).sqrt();
    let i0e = bessel_i_scaled(0, alpha)?;
    let expo = alpha * (mean_angle.cos() * c + mean_angle.sin() * s - 1.0);
    Ok(2.0 / gamma * expo.exp() / i0e)
}

/// Closed-form PSD of a whole profile.
pub fn psd_profile(profile: &ScatteringProfile, k: f64, k_x: f64) -> Result<f64> {
    match profile {
        ScatteringProfile::Isotropic => Ok(2.0 / check_propagating("psd_profile", k, k_x)?),
        ScatteringProfile::Clusters(c) => c.iter().try_fold(0.0, |acc, c| {
            Ok(acc + c.weight * psd_closed_form(c.alpha, c.mean_angle, k, k_x)?)
        }),
    }
}

/// PSD through the substitution `cos θ = k_x/k`: `2π Ã²(θ) / γ(k_x)` with the
/// forward-folded density.
pub fn psd_from_psf(profile: &ScatteringProfile, k: f64, k_x: f64) -> Result<f64> {
    let gamma = check_propagating("psd_from_psf", k, k_x)?;
    let theta = (k_x / k).acos();
    Ok(2.0 * PI * profile.forward_psf(theta) / gamma)
}
