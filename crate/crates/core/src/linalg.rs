//! Complex matrix products through real ones.
//!
//! nalgebra multiplies `f64` matrices with a blocked kernel but falls back to
//! a generic loop for complex entries; splitting into real and imaginary
//! parts is several times faster at the sizes used here.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::CMatrix;

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|v| v.re), m.map(|v| v.im))
}

fn join(re: &DMatrix<f64>, im: &DMatrix<f64>) -> CMatrix {
    re.zip_map(im, Complex64::new)
}

/// `a · b`.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    join(&re, &im)
}

/// `h · hᴴ`, exactly Hermitian.
pub fn gram(h: &CMatrix) -> CMatrix {
    let (hr, hi) = split(h);
    let re = &hr * hr.transpose() + &hi * hi.transpose();
    let im = &hi * hr.transpose() - &hr * hi.transpose();
    let mut g = join(&re, &im);
    for i in 0..g.nrows() {
        g[(i, i)].im = 0.0;
        for j in 0..i {
            let v = 0.5 * (g[(i, j)] + g[(j, i)].conj());
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        crate::channel::draw_coupling(rows, cols, seed)
    }

    proptest! {
        #[test]
        fn agrees_with_generic_product(r in 1usize..12, k in 1usize..12, c in 1usize..12, seed in any::<u64>()) {
            let a = matrix(r, k, seed);
            let b = matrix(k, c, seed ^ 1);
            let gap = (matmul(&a, &b) - &a * &b).norm();
            prop_assert!(gap < 1e-12 * (1.0 + a.norm() * b.norm()));
            let g = gram(&a);
            prop_assert!((&g - &a * a.adjoint()).norm() < 1e-12 * (1.0 + a.norm_squared()));
            prop_assert_eq!(g.clone(), g.adjoint());
        }
    }
}
