//! Channel seen through Fourier basis functions on both apertures.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{angular_core, draw_coupling, ETA};
use crate::error::{Error, Result};
use crate::geometry::{SystemGeometry, WavenumberGrid};
use crate::linalg::matmul;
use crate::numerics::{GaussLegendre, QuadratureSpec, DEFAULT_NODES_PER_PANEL};
use crate::scattering::SpectralStats;
use crate::CMatrix;

/// Normalized sinc, `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdmConfig {
    /// Basis functions per side.
    pub n_basis: usize,
    pub quad: QuadratureSpec,
}

/// `ceil(κd/2π) = ceil(d/λ)` plus `N + 8` panels: one per phase cycle of `e^{jκd sin θ}`,
/// one per sinc lobe, plus slack.
pub fn default_panel_budget(geom: &SystemGeometry, n_basis: usize) -> usize {
    (geom.d / geom.lambda).ceil() as usize + n_basis + 8
}

impl WdmConfig {
    /// Default panel budget and an absolute tolerance of `1e-9` times the
    /// leading prefactor.
    pub fn new(geom: &SystemGeometry, grid: &WavenumberGrid, n_basis: usize) -> Result<Self> {
        let quad = QuadratureSpec::new(
            default_panel_budget(geom, n_basis),
            DEFAULT_NODES_PER_PANEL,
            1e-9 * prefactor(geom),
        )?;
        Self::with_quadrature(grid, n_basis, quad)
    }

    pub fn with_quadrature(
        grid: &WavenumberGrid,
        n_basis: usize,
        quad: QuadratureSpec,
    ) -> Result<Self> {
        let limit = grid.n_s().min(grid.n_r());
        if n_basis == 0 || n_basis > limit {
            return Err(Error::Config(format!(
                "WDM basis size {n_basis} must lie in 1..={limit}"
            )));
        }
        let quad = QuadratureSpec::new(quad.panel_count, quad.nodes_per_panel, quad.abs_tol)?;
        Ok(Self { n_basis, quad })
    }
}

fn prefactor(geom: &SystemGeometry) -> f64 {
    geom.k() * ETA * (geom.l_s * geom.l_r).sqrt() / (4.0 * PI)
}

/// LoS channel between the basis functions and its quadrature diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct WdmLos {
    pub matrix: CMatrix,
    pub panels: usize,
    /// Largest entry change when the panel count is doubled.
    pub max_change: f64,
    /// Entries whose change exceeded the tolerance.
    pub flagged: Vec<(usize, usize)>,
}

impl WdmLos {
    pub fn converged(&self) -> bool {
        self.flagged.is_empty()
    }
}

fn los_matrix(
    geom: &SystemGeometry,
    n_basis: usize,
    panels: usize,
    rule: &GaussLegendre,
) -> CMatrix {
    let nodes = rule.composite(0.0, PI, panels);
    let shift = (n_basis as f64 - 1.0) / 2.0;
    let kd = geom.k() * geom.d;
    let m_r = geom.l_r / geom.lambda;
    let m_s = geom.l_s / geom.lambda;
    let q = nodes.len();
    let left = CMatrix::from_fn(n_basis, q, |n, i| {
        let (t, w) = nodes[i];
        let phase = Complex64::from_polar(w, kd * t.sin());
        phase * sinc(m_r * t.cos() - (n as f64 - shift))
    });
    let right = DMatrix::from_fn(q, n_basis, |i, m| {
        let t = nodes[i].0;
        Complex64::new(sinc(m_s * t.cos() - (m as f64 - shift)), 0.0)
    });
    matmul(&left, &right) * Complex64::new(prefactor(geom), 0.0)
}

/// Double-sinc integral over `θ ∈ (0, π)` after `κ_x = κ cos θ`, which
/// cancels the `1/γ` endpoint singularity.
pub fn wdm_los(geom: &SystemGeometry, cfg: &WdmConfig) -> Result<WdmLos> {
    geom.validate()?;
    let rule = GaussLegendre::new(cfg.quad.nodes_per_panel);
    let panels = cfg.quad.panel_count;
    let matrix = los_matrix(geom, cfg.n_basis, panels, &rule);
    let refined = los_matrix(geom, cfg.n_basis, 2 * panels, &rule);
    if matrix
        .iter()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite { node: f64::NAN });
    }
    let mut flagged = Vec::new();
    let mut max_change = 0.0f64;
    for n in 0..cfg.n_basis {
        for m in 0..cfg.n_basis {
            let change = (refined[(n, m)] - matrix[(n, m)]).norm();
            max_change = max_change.max(change);
            if change >= cfg.quad.abs_tol {
                flagged.push((n, m));
            }
        }
    }
    Ok(WdmLos {
        matrix,
        panels,
        max_change,
        flagged,
    })
}

/// `√(L_r L_s) · diag(√N_r σ_r) W diag(√N_s σ_s)` with `W` drawn exactly as
/// in the spatial realization of the same seed.
pub fn wdm_nlos(
    geom: &SystemGeometry,
    grid: &WavenumberGrid,
    stats: &SpectralStats,
    seed: u64,
) -> Result<CMatrix> {
    if stats.sigma2_s.len() != grid.n_s() || stats.sigma2_r.len() != grid.n_r() {
        return Err(Error::Input(
            "variance spectra do not match the grid".into(),
        ));
    }
    let w = draw_coupling(grid.n_r(), grid.n_s(), seed);
    let scale = Complex64::new((geom.l_r * geom.l_s).sqrt(), 0.0);
    Ok(angular_core(geom, stats, &w) * scale)
}

/// Diagonal correlations `diag(L σ²)` of the basis-domain channel.
#[derive(Debug, Clone, PartialEq)]
pub struct WdmCorrelations {
    pub r_s: DMatrix<f64>,
    pub r_r: DMatrix<f64>,
}

impl WdmCorrelations {
    /// Full correlation `R̄_s ⊗ R̄_r` of `vec(H)`.
    pub fn kronecker(&self) -> DMatrix<f64> {
        self.r_s.kronecker(&self.r_r)
    }
}

pub fn wdm_correlations(geom: &SystemGeometry, stats: &SpectralStats) -> WdmCorrelations {
    let diag = |l: f64, s: &[f64]| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            s.len(),
            s.iter().map(|v| l * v),
        ))
    };
    WdmCorrelations {
        r_s: diag(geom.l_s, &stats.sigma2_s),
        r_r: diag(geom.l_r, &stats.sigma2_r),
    }
}
