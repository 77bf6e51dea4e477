//! Special functions and quadrature primitives.

mod bessel;
mod quadrature;

pub use bessel::{
    bessel_i0_complex, bessel_i_scaled, bessel_j0, bessel_j1, bessel_y0, bessel_y1, hankel1_0,
    ScaledComplex, SERIES_LIMIT,
};
pub use quadrature::{
    integrate_fixed, integrate_panels, GaussLegendre, Integral, QuadratureSpec,
    DEFAULT_NODES_PER_PANEL,
};
