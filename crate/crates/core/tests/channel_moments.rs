use hololine::channel::{correlation_matrices, NlosSynthesizer};
use hololine::metrics::pairwise_sum;
use hololine::rng::derive_seed;
use hololine::wdm::wdm_nlos;
use hololine::{CMatrix, Cluster, ScatteringProfile, SpectralStats, SystemGeometry};

fn reference() -> SystemGeometry {
    SystemGeometry::symmetric(1.28, 10.0, 0.01, 0.005).unwrap()
}

#[test]
fn frobenius_power_matches_expectation() {
    let geom = reference();
    let grid = geom.wavenumber_grid();
    let stats = SpectralStats::new(
        &ScatteringProfile::Isotropic,
        &ScatteringProfile::Isotropic,
        &grid,
    );
    let synth = NlosSynthesizer::new(&geom, &grid, &stats).unwrap();
    let trials = 200;
    let norms: Vec<f64> = (0..trials)
        .map(|t| synth.realize(derive_seed(1, t)).entries.norm_squared())
        .collect();
    let mean = pairwise_sum(&norms) / trials as f64;
    let var = norms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let se = (var / trials as f64).sqrt();
    let expected = (geom.n_s() * geom.n_r()) as f64
        * stats.sigma2_s.iter().sum::<f64>()
        * stats.sigma2_r.iter().sum::<f64>();
    assert!((expected - 65536.0).abs() < 1e-8);
    assert!(
        (mean - expected).abs() < 3.0 * se,
        "mean {mean} expected {expected} se {se}"
    );
}

#[test]
fn wdm_second_moment_is_diagonal_product() {
    let geom = SystemGeometry::symmetric(0.08, 1.0, 0.01, 0.005).unwrap();
    let grid = geom.wavenumber_grid();
    let profile =
        ScatteringProfile::clusters(vec![Cluster::from_variance(1.0, 1.2, 0.1).unwrap()]).unwrap();
    let stats = SpectralStats::new(&profile, &ScatteringProfile::Isotropic, &grid);
    let trials = 500;
    let draws: Vec<CMatrix> = (0..trials)
        .map(|t| wdm_nlos(&geom, &grid, &stats, derive_seed(2, t)).unwrap())
        .collect();
    let scale = geom.l_r * geom.l_s * (geom.n_r() * geom.n_s()) as f64;
    for n in 0..grid.n_r() {
        for m in 0..grid.n_s() {
            let p: Vec<f64> = draws.iter().map(|h| h[(n, m)].norm_sqr()).collect();
            let mean = p.iter().sum::<f64>() / trials as f64;
            let var = p.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
            let se = (var / trials as f64).sqrt();
            let expected = scale * stats.sigma2_r[n] * stats.sigma2_s[m];
            assert!(
                (mean - expected).abs() <= 3.5 * se + 1e-300,
                "({n}, {m}): {mean} vs {expected}"
            );
        }
    }
}

#[test]
fn mean_gram_of_small_link() {
    let geom = SystemGeometry::symmetric(0.16, 1.0, 0.01, 0.005).unwrap();
    let grid = geom.wavenumber_grid();
    let profile =
        ScatteringProfile::clusters(vec![Cluster::from_variance(1.0, 1.0, 0.05).unwrap()]).unwrap();
    let stats = SpectralStats::new(&ScatteringProfile::Isotropic, &profile, &grid);
    let synth = NlosSynthesizer::new(&geom, &grid, &stats).unwrap();
    let corr = correlation_matrices(&geom, &grid, &stats).unwrap();
    let trials = 2000;
    let mut acc = CMatrix::zeros(geom.n_r(), geom.n_r());
    for t in 0..trials {
        acc += synth.realize(derive_seed(3, t)).gram();
    }
    acc /= num_complex::Complex64::new(trials as f64, 0.0);
    let target = corr.r_r.map(|v| v * corr.r_s.trace().re);
    let rel = (&acc - &target).norm() / target.norm();
    assert!(rel < 0.05, "relative Frobenius error {rel}");
}
