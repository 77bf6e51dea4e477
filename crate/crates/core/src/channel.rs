//! Spatially sampled channel matrices.

use std::f64::consts::PI;
use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{Side, SideGrid, SystemGeometry, WavenumberGrid};
use crate::linalg::{gram, matmul};
use crate::numerics::{bessel_j0, hankel1_0};
use crate::rng::rng_from_seed;
use crate::scattering::SpectralStats;
use crate::CMatrix;

/// Free-space wave impedance in ohms.
pub const ETA: f64 = 120.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    RayTrace,
    EmLos,
    Nlos,
    Composite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: CMatrix,
    pub model: ChannelModel,
    pub seed: Option<u64>,
}

impl ChannelMatrix {
    pub fn gram(&self) -> CMatrix {
        gram(&self.entries)
    }
}

fn distances(geom: &SystemGeometry) -> DMatrix<f64> {
    let (s, r) = geom.sample_points();
    DMatrix::from_fn(r.len(), s.len(), |u, v| {
        let dx = r[u] - s[v];
        (geom.d * geom.d + dx * dx).sqrt()
    })
}

/// `λ/(4π r) e^{jκr}` between every receive and source sample.
pub fn los_raytracing(geom: &SystemGeometry) -> ChannelMatrix {
    let k = geom.k();
    let scale = geom.lambda / (4.0 * PI);
    let entries = distances(geom).map(|r| Complex64::from_polar(scale / r, k * r));
    ChannelMatrix {
        entries,
        model: ChannelModel::RayTrace,
        seed: None,
    }
}

/// `(κη/4) H0⁽¹⁾(κr)`.
pub fn los_em(geom: &SystemGeometry) -> Result<ChannelMatrix> {
    let k = geom.k();
    let scale = k * ETA / 4.0;
    let r = distances(geom);
    let mut entries = CMatrix::zeros(r.nrows(), r.ncols());
    for (e, &r) in entries.iter_mut().zip(r.iter()) {
        *e = scale * hankel1_0(k * r)?;
    }
    Ok(ChannelMatrix {
        entries,
        model: ChannelModel::EmLos,
        seed: None,
    })
}

/// Columns of sampled Fourier harmonics, `A_s` (`N_s × n_s`) and `A_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierDictionary {
    pub a_s: CMatrix,
    pub a_r: CMatrix,
}

impl FourierDictionary {
    pub fn new(geom: &SystemGeometry, grid: &WavenumberGrid) -> Result<Self> {
        Ok(Self {
            a_s: harmonics(geom, &grid.source, Side::Source)?,
            a_r: harmonics(geom, &grid.receiver, Side::Receiver)?,
        })
    }

    pub fn side(&self, side: Side) -> &CMatrix {
        match side {
            Side::Source => &self.a_s,
            Side::Receiver => &self.a_r,
        }
    }
}

pub fn fourier_dictionary(
    geom: &SystemGeometry,
    grid: &WavenumberGrid,
) -> Result<FourierDictionary> {
    FourierDictionary::new(geom, grid)
}

fn harmonics(geom: &SystemGeometry, side_grid: &SideGrid, side: Side) -> Result<CMatrix> {
    let n = geom.samples(side);
    let length = geom.length(side);
    let spacing = geom.spacing(side);
    if n < side_grid.len() {
        return Err(Error::Config(format!(
            "{side:?} aperture has {n} samples but {} wavenumber indices; use a spacing of at most {}",
            side_grid.len(),
            geom.lambda / 2.0
        )));
    }
    if (n as f64 * spacing - length).abs() > 1e-9 * length {
        return Err(Error::Config(format!(
            "{side:?} spacing {spacing} does not divide the aperture length {length}"
        )));
    }
    let x = geom.sample_positions(side);
    let norm = 1.0 / (n as f64).sqrt();
    Ok(CMatrix::from_fn(n, side_grid.len(), |v, i| {
        let p = side_grid.indices()[i] as f64;
        Complex64::from_polar(norm, 2.0 * PI * p * x[v] / length)
    }))
}

/// `n_r × n_s` matrix of independent standard complex Gaussians.
///
/// Entries are filled row by row, real part first, each part with variance
/// one half.
pub fn draw_coupling(n_r: usize, n_s: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut values = Vec::with_capacity(n_r * n_s);
    for _ in 0..n_r * n_s {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        values.push(Complex64::new(half * re, half * im));
    }
    CMatrix::from_row_slice(n_r, n_s, &values)
}

fn check_stats(grid: &WavenumberGrid, stats: &SpectralStats) -> Result<()> {
    if stats.sigma2_s.len() != grid.n_s() || stats.sigma2_r.len() != grid.n_r() {
        return Err(Error::Input(format!(
            "variance spectra of length ({}, {}) do not match the grid ({}, {})",
            stats.sigma2_s.len(),
            stats.sigma2_r.len(),
            grid.n_s(),
            grid.n_r()
        )));
    }
    if stats
        .sigma2_s
        .iter()
        .chain(&stats.sigma2_r)
        .any(|&v| !(v >= 0.0))
    {
        return Err(Error::Input("variances must be nonnegative".into()));
    }
    Ok(())
}

/// `√N σ` per index of one side.
pub fn scaled_deviations(sigma2: &[f64], samples: usize) -> Vec<f64> {
    let n = samples as f64;
    sigma2.iter().map(|&s| (n * s).sqrt()).collect()
}

/// `diag(√N_r σ_r) · W · diag(√N_s σ_s)`.
pub fn angular_core(geom: &SystemGeometry, stats: &SpectralStats, w: &CMatrix) -> CMatrix {
    let left = scaled_deviations(&stats.sigma2_r, geom.n_r());
    let right = scaled_deviations(&stats.sigma2_s, geom.n_s());
    CMatrix::from_fn(w.nrows(), w.ncols(), |i, j| {
        w[(i, j)] * (left[i] * right[j])
    })
}

/// Precomputed outer factors of the plane-wave synthesis, so that a
/// realization costs one draw and two products.
#[derive(Debug, Clone)]
pub struct NlosSynthesizer {
    left: CMatrix,
    right: CMatrix,
}

impl NlosSynthesizer {
    pub fn new(
        geom: &SystemGeometry,
        grid: &WavenumberGrid,
        stats: &SpectralStats,
    ) -> Result<Self> {
        Self::with_dictionary(geom, grid, stats, &FourierDictionary::new(geom, grid)?)
    }

    pub fn with_dictionary(
        geom: &SystemGeometry,
        grid: &WavenumberGrid,
        stats: &SpectralStats,
        dict: &FourierDictionary,
    ) -> Result<Self> {
        check_stats(grid, stats)?;
        let sr = scaled_deviations(&stats.sigma2_r, geom.n_r());
        let ss = scaled_deviations(&stats.sigma2_s, geom.n_s());
        let dr = DVector::from_iterator(
            sr.len(),
            sr.iter()
                .zip(grid.receiver.gamma())
                .map(|(&s, &g)| Complex64::from_polar(s, g * geom.r_z)),
        );
        let ds = DVector::from_iterator(
            ss.len(),
            ss.iter()
                .zip(grid.source.gamma())
                .map(|(&s, &g)| Complex64::from_polar(s, -g * geom.s_z)),
        );
        let mut left = dict.a_r.clone();
        for (j, mut col) in left.column_iter_mut().enumerate() {
            col *= dr[j];
        }
        let mut right = dict.a_s.adjoint();
        for (i, mut row) in right.row_iter_mut().enumerate() {
            row *= ds[i];
        }
        Ok(Self { left, right })
    }

    pub fn realize(&self, seed: u64) -> ChannelMatrix {
        let w = draw_coupling(self.left.ncols(), self.right.nrows(), seed);
        ChannelMatrix {
            entries: matmul(&matmul(&self.left, &w), &self.right),
            model: ChannelModel::Nlos,
            seed: Some(seed),
        }
    }
}

/// `A_r diag(σ_r e^{jγ_r r_z}) W diag(e^{-jγ_s s_z} σ_s) A_sᴴ` with the
/// `√N` scaling folded into the deviations.
pub fn nlos_realization(
    geom: &SystemGeometry,
    grid: &WavenumberGrid,
    stats: &SpectralStats,
    seed: u64,
) -> Result<ChannelMatrix> {
    Ok(NlosSynthesizer::new(geom, grid, stats)?.realize(seed))
}

/// Spatial correlation matrices of both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub r_s: CMatrix,
    pub r_r: CMatrix,
}

fn sandwich(a: &CMatrix, diag: &[f64]) -> CMatrix {
    let mut scaled = a.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(diag[j], 0.0);
    }
    let mut r = matmul(&scaled, &a.adjoint());
    // Enforce exact Hermitian symmetry against rounding in the product.
    for i in 0..r.nrows() {
        r[(i, i)].im = 0.0;
        for j in 0..i {
            let v = 0.5 * (r[(i, j)] + r[(j, i)].conj());
            r[(i, j)] = v;
            r[(j, i)] = v.conj();
        }
    }
    r
}

/// `R = A diag(N σ²) Aᴴ` per side.
pub fn correlation_matrices(
    geom: &SystemGeometry,
    grid: &WavenumberGrid,
    stats: &SpectralStats,
) -> Result<CorrelationSet> {
    check_stats(grid, stats)?;
    let dict = FourierDictionary::new(geom, grid)?;
    let ns = geom.n_s() as f64;
    let nr = geom.n_r() as f64;
    let ds: Vec<f64> = stats.sigma2_s.iter().map(|s| ns * s).collect();
    let dr: Vec<f64> = stats.sigma2_r.iter().map(|s| nr * s).collect();
    Ok(CorrelationSet {
        r_s: sandwich(&dict.a_s, &ds),
        r_r: sandwich(&dict.a_r, &dr),
    })
}

/// Sampled Jakes correlation `[J0(k (x_u - x_u'))]` on one aperture.
pub fn jakes_correlation(geom: &SystemGeometry, side: Side) -> Result<CMatrix> {
    let x = geom.sample_positions(side);
    let k = geom.k();
    let mut r = CMatrix::zeros(x.len(), x.len());
    for i in 0..x.len() {
        for j in 0..x.len() {
            r[(i, j)] = Complex64::new(bessel_j0(k * (x[i] - x[j]))?, 0.0);
        }
    }
    Ok(r)
}

/// Principal square root of a Hermitian PSD matrix; negative eigenvalues
/// from rounding are clamped to zero.
pub fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let mut v = eig.eigenvectors.clone();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= Complex64::new(eig.eigenvalues[j].max(0.0).sqrt(), 0.0);
    }
    matmul(&v, &eig.eigenvectors.adjoint())
}

fn same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Input(format!(
            "shape mismatch: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// `H_los + g·H_nlos`.
pub fn compose(
    h_los: &ChannelMatrix,
    h_nlos: &ChannelMatrix,
    nlos_gain: f64,
) -> Result<ChannelMatrix> {
    same_shape(&h_los.entries, &h_nlos.entries)?;
    let g = Complex64::new(nlos_gain, 0.0);
    let entries = h_los.entries.zip_map(&h_nlos.entries, |a, b| a + g * b);
    Ok(ChannelMatrix {
        entries,
        model: ChannelModel::Composite,
        seed: h_nlos.seed,
    })
}

/// `H_los H_losᴴ + g² tr(R_s) R_r`.
pub fn mean_gram(h_los: &CMatrix, corr: &CorrelationSet, nlos_gain: f64) -> Result<CMatrix> {
    let los = gram(h_los);
    same_shape(&los, &corr.r_r)?;
    if h_los.ncols() != corr.r_s.nrows() {
        return Err(Error::Input(
            "source correlation does not match the LoS matrix".into(),
        ));
    }
    let scale = nlos_gain * nlos_gain * corr.r_s.trace().re;
    Ok(los + corr.r_r.map(|v| v * scale))
}

/// One CSV row per matrix row; each entry as adjacent real and imaginary
/// columns.
pub fn write_complex_csv<W: Write>(m: &CMatrix, out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let mut record = Vec::with_capacity(2 * m.ncols());
    for i in 0..m.nrows() {
        record.clear();
        for j in 0..m.ncols() {
            record.push(m[(i, j)].re.to_string());
            record.push(m[(i, j)].im.to_string());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_complex_csv<R: Read>(input: R) -> Result<CMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() % 2 != 0 {
            return Err(Error::Input(
                "complex CSV rows need an even number of columns".into(),
            ));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Input(format!("bad number {s:?}: {e}")))
        };
        let row = record
            .iter()
            .collect::<Vec<_>>()
            .chunks(2)
            .map(|c| Ok(Complex64::new(parse(c[0])?, parse(c[1])?)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Input("ragged complex CSV".into()));
            }
        }
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    Ok(CMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel_j0;
    use crate::scattering::ScatteringProfile;
    use proptest::prelude::*;

    fn small() -> SystemGeometry {
        SystemGeometry::symmetric(0.08, 1.0, 0.01, 0.005).unwrap()
    }

    fn isotropic_stats(geom: &SystemGeometry) -> (WavenumberGrid, SpectralStats) {
        let grid = geom.wavenumber_grid();
        let stats = SpectralStats::new(
            &ScatteringProfile::Isotropic,
            &ScatteringProfile::Isotropic,
            &grid,
        );
        (grid, stats)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn raytracing_entries() {
        let geom = SystemGeometry::symmetric(1.28, 10.0, 0.01, 0.005).unwrap();
        let h = los_raytracing(&geom).entries;
        let aligned = h[(100, 100)];
        assert!((aligned.norm() - 0.01 / (4.0 * PI * 10.0)).abs() < 1e-15);
        let phase = (geom.k() * 10.0).rem_euclid(2.0 * PI);
        let diff = (aligned.arg().rem_euclid(2.0 * PI) - phase).abs();
        assert!(diff < 1e-9 || (2.0 * PI - diff) < 1e-9);
        for v in 100..255 {
            assert!(h[(100, v + 1)].norm() < h[(100, v)].norm());
        }
    }

    #[test]
    fn em_entries() {
        let geom = SystemGeometry::symmetric(1.28, 10.0, 0.01, 0.005).unwrap();
        let h = los_em(&geom).unwrap().entries;
        let k = geom.k();
        let asym = k * ETA / 4.0 * (2.0 / (PI * k * 10.0)).sqrt();
        assert!((h[(3, 3)].norm() / asym - 1.0).abs() < 1e-3);
        assert!((asym - 596.0).abs() < 1.0);
        let r = (100.0f64 + 0.5f64.powi(2)).sqrt();
        let e = h[(0, 100)];
        let dphi = (e.arg() - k * r + PI / 4.0).rem_euclid(2.0 * PI);
        assert!(dphi.min(2.0 * PI - dphi) < 1e-4);
    }

    #[test]
    fn dictionary_is_semi_unitary() {
        for delta in [0.005, 0.0025] {
            let geom = SystemGeometry::symmetric(0.08, 1.0, 0.01, delta).unwrap();
            let dict = fourier_dictionary(&geom, &geom.wavenumber_grid()).unwrap();
            let n = dict.a_s.ncols();
            let gram = dict.a_s.adjoint() * &dict.a_s;
            assert!(max_abs(&(gram - CMatrix::identity(n, n))) < 1e-12);
            let mag = 1.0 / (geom.n_s() as f64).sqrt();
            assert!(dict.a_s.iter().all(|v| (v.norm() - mag).abs() < 1e-15));
        }
        let coarse = SystemGeometry::symmetric(0.08, 1.0, 0.01, 0.01).unwrap();
        assert!(fourier_dictionary(&coarse, &coarse.wavenumber_grid()).is_err());
        let reference = SystemGeometry::symmetric(1.28, 10.0, 0.01, 0.005).unwrap();
        let dict = fourier_dictionary(&reference, &reference.wavenumber_grid()).unwrap();
        assert_eq!(dict.a_s.shape(), (256, 256));
    }

    #[test]
    fn zero_spectrum_gives_zero_channel() {
        let geom = small();
        let (grid, mut stats) = isotropic_stats(&geom);
        stats.sigma2_s.iter_mut().for_each(|v| *v = 0.0);
        let h = nlos_realization(&geom, &grid, &stats, 3).unwrap();
        assert!(h.entries.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn realizations_are_seeded() {
        let geom = small();
        let (grid, stats) = isotropic_stats(&geom);
        let a = nlos_realization(&geom, &grid, &stats, 11).unwrap();
        let b = nlos_realization(&geom, &grid, &stats, 11).unwrap();
        let c = nlos_realization(&geom, &grid, &stats, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.entries, c.entries);
        assert_eq!(a.seed, Some(11));
    }

    #[test]
    fn phases_do_not_change_the_gram_spectrum() {
        let mut geom = small();
        let (grid, stats) = isotropic_stats(&geom);
        let base = nlos_realization(&geom, &grid, &stats, 5).unwrap().gram();
        geom.s_z = 0.37;
        geom.r_z = 4.2;
        let moved = nlos_realization(&geom, &grid, &stats, 5).unwrap().gram();
        let ea = base.symmetric_eigenvalues();
        let eb = moved.symmetric_eigenvalues();
        let mut ea: Vec<f64> = ea.iter().copied().collect();
        let mut eb: Vec<f64> = eb.iter().copied().collect();
        ea.sort_by(f64::total_cmp);
        eb.sort_by(f64::total_cmp);
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x - y).abs() < 1e-9 * ea.last().unwrap());
        }
    }

    #[test]
    fn correlation_traces() {
        let geom = small();
        let (grid, stats) = isotropic_stats(&geom);
        let corr = correlation_matrices(&geom, &grid, &stats).unwrap();
        assert!((corr.r_r.trace().re - geom.n_r() as f64).abs() < 1e-10);
        assert!(max_abs(&(&corr.r_s - corr.r_s.adjoint())) < 1e-12);
        // Diagonal of an isotropic correlation is the zero-lag ACF, J0(0) = 1.
        assert!((corr.r_r[(3, 3)].re - 1.0).abs() < 1e-12);
        let lag = corr.r_r[(3, 4)].re;
        assert!((lag - bessel_j0(PI).unwrap()).abs() < 0.1);
    }

    #[test]
    fn composition_and_mean_gram() {
        let geom = small();
        let (grid, stats) = isotropic_stats(&geom);
        let los = los_raytracing(&geom);
        let zero = ChannelMatrix {
            entries: CMatrix::zeros(geom.n_r(), geom.n_s()),
            model: ChannelModel::Nlos,
            seed: None,
        };
        assert_eq!(compose(&los, &zero, 1.0).unwrap().entries, los.entries);
        let nlos = nlos_realization(&geom, &grid, &stats, 1).unwrap();
        let zero_los = ChannelMatrix {
            entries: CMatrix::zeros(geom.n_r(), geom.n_s()),
            model: ChannelModel::RayTrace,
            seed: None,
        };
        let h = compose(&zero_los, &nlos, 0.5).unwrap();
        assert_eq!(h.entries, nlos.entries.map(|v| v * 0.5));
        let corr = correlation_matrices(&geom, &grid, &stats).unwrap();
        let no_nlos = CorrelationSet {
            r_s: corr.r_s.map(|_| Complex64::new(0.0, 0.0)),
            r_r: corr.r_r.clone(),
        };
        assert_eq!(mean_gram(&los.entries, &no_nlos, 1.0).unwrap(), los.gram());
        let only_nlos = mean_gram(&zero_los.entries, &corr, 2.0).unwrap();
        let expect = corr.r_r.map(|v| v * (4.0 * corr.r_s.trace().re));
        assert!(max_abs(&(only_nlos - expect)) < 1e-9);
        let wrong = ChannelMatrix {
            entries: CMatrix::zeros(3, 3),
            model: ChannelModel::Nlos,
            seed: None,
        };
        assert!(compose(&los, &wrong, 1.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let m = CMatrix::from_fn(3, 2, |i, j| {
            Complex64::new(i as f64 * 0.1, -(j as f64) / 3.0)
        });
        let mut buf = Vec::new();
        write_complex_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next().unwrap().split(',').count(), 4);
        assert_eq!(read_complex_csv(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn jakes_matrix_and_square_root() {
        let geom = small();
        let r = jakes_correlation(&geom, Side::Receiver).unwrap();
        assert_eq!(r[(2, 2)], Complex64::new(1.0, 0.0));
        assert!((r[(0, 1)].re - bessel_j0(PI).unwrap()).abs() < 1e-15);
        let root = hermitian_sqrt(&r);
        assert!(max_abs(&(&root * &root - &r)) < 1e-10);
    }

    #[test]
    fn los_is_reciprocal() {
        let geom = small();
        let h = los_em(&geom).unwrap().entries;
        assert_eq!(h, h.transpose());
    }

    proptest! {
        #[test]
        fn compose_is_entrywise_addition(seed in any::<u64>(), gain in -3.0f64..3.0) {
            let a = draw_coupling(4, 5, seed);
            let b = draw_coupling(4, 5, seed.wrapping_add(1));
            let ha = ChannelMatrix { entries: a.clone(), model: ChannelModel::EmLos, seed: None };
            let hb = ChannelMatrix { entries: b.clone(), model: ChannelModel::Nlos, seed: None };
            let h = compose(&ha, &hb, gain).unwrap();
            for i in 0..4 {
                for j in 0..5 {
                    prop_assert_eq!(h.entries[(i, j)], a[(i, j)] + Complex64::new(gain, 0.0) * b[(i, j)]);
                }
            }
            prop_assert_eq!(h.model, ChannelModel::Composite);
        }

        #[test]
        fn semi_unitary_sandwich(diag in proptest::collection::vec(0.0f64..5.0, 16), div in 1usize..3) {
            let geom = SystemGeometry::symmetric(0.08, 1.0, 0.01, 0.005 / div as f64).unwrap();
            let a = fourier_dictionary(&geom, &geom.wavenumber_grid()).unwrap().a_s;
            let r = sandwich(&a, &diag);
            let mut ev: Vec<f64> = r.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(|x, y| y.total_cmp(x));
            let mut d = diag.clone();
            d.resize(geom.n_s(), 0.0);
            d.sort_by(|x, y| y.total_cmp(x));
            for (x, y) in ev.iter().zip(&d) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
