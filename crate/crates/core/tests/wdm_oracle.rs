use hololine::channel::ETA;
use hololine::numerics::{hankel1_0, GaussLegendre, QuadratureSpec};
use hololine::wdm::{default_panel_budget, wdm_los, WdmConfig};
use hololine::SystemGeometry;
use num_complex::Complex64;

fn reference() -> SystemGeometry {
    SystemGeometry::symmetric(1.28, 10.0, 0.01, 0.005).unwrap()
}

/// Spatial double integral of the Hankel kernel between two constant basis
/// functions `1/√L`.
fn brute_force_h00(geom: &SystemGeometry, panels: usize) -> Complex64 {
    let k = geom.k();
    let rule = GaussLegendre::new(16);
    let src = rule.composite(-geom.l_s / 2.0, geom.l_s / 2.0, panels);
    let rcv = rule.composite(-geom.l_r / 2.0, geom.l_r / 2.0, panels);
    let mut total = Complex64::new(0.0, 0.0);
    for &(r, wr) in &rcv {
        let mut inner = Complex64::new(0.0, 0.0);
        for &(s, ws) in &src {
            let dist = (geom.d * geom.d + (r - s) * (r - s)).sqrt();
            inner += ws * hankel1_0(k * dist).unwrap();
        }
        total += wr * inner;
    }
    total * (k * ETA / 4.0) / (geom.l_s * geom.l_r).sqrt()
}

#[test]
fn single_basis_entry_matches_spatial_integral() {
    let geom = reference();
    let cfg = WdmConfig::new(&geom, &geom.wavenumber_grid(), 1).unwrap();
    let h = wdm_los(&geom, &cfg).unwrap();
    assert!(h.converged());
    let oracle = brute_force_h00(&geom, 48);
    let value = h.matrix[(0, 0)];
    let rel = (value - oracle).norm() / oracle.norm();
    assert!(rel < 1e-4, "wdm {value} vs spatial {oracle}: {rel:e}");
}

#[test]
fn default_budget_is_stable_under_doubling() {
    let geom = reference();
    let grid = geom.wavenumber_grid();
    let cfg = WdmConfig::new(&geom, &grid, 25).unwrap();
    assert_eq!(cfg.quad.panel_count, 1000 + 25 + 8);
    let h = wdm_los(&geom, &cfg).unwrap();
    let doubled = QuadratureSpec::new(2 * cfg.quad.panel_count, 16, cfg.quad.abs_tol).unwrap();
    let h2 = wdm_los(
        &geom,
        &WdmConfig::with_quadrature(&grid, 25, doubled).unwrap(),
    )
    .unwrap();
    for n in 0..25 {
        for m in 0..25 {
            let a = h.matrix[(n, m)];
            let b = h2.matrix[(n, m)];
            assert!((a - b).norm() <= 1e-4 * a.norm(), "entry ({n}, {m})");
        }
    }
    assert_eq!(default_panel_budget(&geom, 25), cfg.quad.panel_count);
}

#[test]
fn unequal_apertures() {
    let geom = SystemGeometry::new(0.64, 1.28, 10.0, 0.01, 0.005, 0.005).unwrap();
    let cfg = WdmConfig::new(&geom, &geom.wavenumber_grid(), 5).unwrap();
    let h = wdm_los(&geom, &cfg).unwrap();
    assert!(h.converged());
    assert!(h.matrix.iter().all(|v| v.norm() > 0.0 && v.re.is_finite()));
}
