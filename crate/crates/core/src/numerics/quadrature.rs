//! Composite Gauss–Legendre quadrature on equal-width panels.
//!
//! Oscillatory integrands are handled by the caller choosing a panel count
//! proportional to the total phase swing; this module only checks the result
//! against a run with twice as many panels.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_NODES_PER_PANEL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub panel_count: usize,
    pub nodes_per_panel: usize,
    pub abs_tol: f64,
}

impl QuadratureSpec {
    pub fn new(panel_count: usize, nodes_per_panel: usize, abs_tol: f64) -> Result<Self> {
        if panel_count < 1 {
            return Err(Error::Config("panel_count must be at least 1".into()));
        }
        if nodes_per_panel < 2 {
            return Err(Error::Config("nodes_per_panel must be at least 2".into()));
        }
        if !(abs_tol >= 0.0) {
            return Err(Error::Config(format!("abs_tol {abs_tol} must be >= 0")));
        }
        Ok(Self {
            panel_count,
            nodes_per_panel,
            abs_tol,
        })
    }

    /// `panels` panels of the default 16-point rule with tolerance `1e-10`.
    pub fn with_panels(panels: usize) -> Self {
        Self {
            panel_count: panels.max(1),
            nodes_per_panel: DEFAULT_NODES_PER_PANEL,
            abs_tol: 1e-10,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `order`-point rule by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All `(abscissa, weight)` pairs of the composite rule on `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.order());
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                out.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
        out
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`integrate_panels`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    /// Estimate at the requested panel count.
    pub value: Complex64,
    /// Estimate with twice as many panels.
    pub refined: Complex64,
    /// `|refined - value|`.
    pub change: f64,
    /// Whether `change < abs_tol`.
    pub converged: bool,
    pub panels: usize,
}

/// Composite rule on `[a, b]` with a fixed panel count.
pub fn integrate_fixed<F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &GaussLegendre,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in rule.composite(a, b, panels) {
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { node: x });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// Integrates `f` over `(a, b)` and checks the estimate against a run with
/// doubled panel count.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    if !(a < b) {
        return Err(Error::domain(
            "integrate_panels",
            format!("interval ({a}, {b}) must satisfy a < b"),
        ));
    }
    let spec = QuadratureSpec::new(spec.panel_count, spec.nodes_per_panel, spec.abs_tol)?;
    let rule = GaussLegendre::new(spec.nodes_per_panel);
    let value = integrate_fixed(&f, a, b, spec.panel_count, &rule)?;
    let refined = integrate_fixed(&f, a, b, 2 * spec.panel_count, &rule)?;
    let change = (refined - value).norm();
    Ok(Integral {
        value,
        refined,
        change,
        converged: change < spec.abs_tol,
        panels: spec.panel_count,
    })
}
