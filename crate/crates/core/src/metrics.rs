//! Eigen-spectra, degrees of freedom and water-filling capacity.

use rayon::prelude::*;

use crate::channel::{angular_core, draw_coupling, hermitian_sqrt, NlosSynthesizer};
use crate::error::{Error, Result};
use crate::geometry::{SystemGeometry, WavenumberGrid};
use crate::linalg::{gram, matmul};
use crate::rng::derive_seed;
use crate::scattering::SpectralStats;
use crate::CMatrix;

/// Eigenvalues below this fraction of the trace count as zero.
pub const RANK_TOL: f64 = 1e-14;

const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Input(format!(
            "matrix of shape {:?} is not square",
            m.shape()
        )));
    }
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let n = m.nrows();
    for i in 0..n {
        for j in 0..=i {
            let gap = (m[(i, j)] - m[(j, i)].conj()).norm();
            if !(gap <= HERMITIAN_TOL * scale) {
                return Err(Error::Input(format!(
                    "matrix is not Hermitian at ({i}, {j}): asymmetry {gap:e}"
                )));
            }
        }
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input(
            "eigenvalue solver returned non-finite values".into(),
        ));
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Eigenvalues sorted descending and divided by their sum. The input is
/// taken to be PSD, so negative rounding residue is set to zero.
pub fn eigen_spectrum_normalized(m: &CMatrix) -> Result<Vec<f64>> {
    let ev: Vec<f64> = hermitian_eigenvalues(m)?
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    let total: f64 = ev.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Input("matrix has nonpositive trace".into()));
    }
    Ok(ev.into_iter().map(|v| v / total).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    Los,
    Iso,
    NonIso,
    Composite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DofReport {
    pub kind: DofKind,
    pub value: usize,
    pub epsilon: Option<f64>,
}

/// `⌊L_s L_r / (λ d)⌋`.
pub fn dof_los(geom: &SystemGeometry) -> usize {
    let ratio = geom.l_s * geom.l_r / (geom.lambda * geom.d);
    // Absorb rounding when the ratio is an exact integer.
    (ratio * (1.0 + 1e-12)).floor() as usize
}

/// `min(n_s, n_r)`: every index carries equal weight under isotropic scattering.
pub fn dof_isotropic(grid: &WavenumberGrid) -> usize {
    grid.n_s().min(grid.n_r())
}

/// Smallest number of largest weights whose share reaches `1 - ε`.
pub fn dof_spectrum(weights: &[f64], epsilon: f64) -> Result<usize> {
    if weights.is_empty() {
        return Err(Error::domain("dof_spectrum", "empty weight sequence"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(
            "dof_spectrum",
            format!("epsilon {epsilon} must lie in (0, 1)"),
        ));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::domain(
            "dof_spectrum",
            "weights must be finite and nonnegative",
        ));
    }
    let mut sorted = weights.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let total = pairwise_sum(&sorted);
    if total <= 0.0 {
        return Err(Error::domain("dof_spectrum", "weights sum to zero"));
    }
    let target = (1.0 - epsilon) * total;
    let mut acc = 0.0;
    for (i, w) in sorted.iter().enumerate() {
        acc += w;
        if acc >= target {
            return Ok(i + 1);
        }
    }
    Ok(sorted.len())
}

/// Two-sided DoF: the smaller of the per-side counts.
pub fn dof_two_sided(stats: &SpectralStats, epsilon: f64) -> Result<usize> {
    Ok(dof_spectrum(&stats.sigma2_s, epsilon)?.min(dof_spectrum(&stats.sigma2_r, epsilon)?))
}

/// ε-DoF of the trace-normalized spectrum of a mean Gram matrix.
pub fn dof_composite(mean_gram: &CMatrix, epsilon: f64) -> Result<usize> {
    dof_spectrum(&eigen_spectrum_normalized(mean_gram)?, epsilon)
}

/// Result of [`waterfill`]; `allocation` follows the input order.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFilling {
    pub allocation: Vec<f64>,
    pub capacity: f64,
    pub water_level: f64,
    pub active: usize,
}

/// Capacity-optimal power split over parallel Gaussian channels with gains
/// `rho`, by the sorted-threshold rule. Nonpositive gains get no power.
pub fn waterfill(rho: &[f64], power: f64, noise_var: f64) -> Result<WaterFilling> {
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::domain(
            "waterfill",
            format!("power {power} must be positive"),
        ));
    }
    if !(noise_var > 0.0 && noise_var.is_finite()) {
        return Err(Error::domain(
            "waterfill",
            format!("noise variance {noise_var} must be positive"),
        ));
    }
    let mut order: Vec<usize> = (0..rho.len())
        .filter(|&i| rho[i] > 0.0 && rho[i].is_finite())
        .collect();
    let mut allocation = vec![0.0; rho.len()];
    if order.is_empty() {
        return Ok(WaterFilling {
            allocation,
            capacity: 0.0,
            water_level: 0.0,
            active: 0,
        });
    }
    order.sort_by(|&a, &b| rho[b].total_cmp(&rho[a]));
    let floors: Vec<f64> = order.iter().map(|&i| noise_var / rho[i]).collect();
    let mut prefix = 0.0;
    let mut best = (1, power + floors[0]);
    for k in 1..=floors.len() {
        prefix += floors[k - 1];
        let mu = (power + prefix) / k as f64;
        if mu > floors[k - 1] {
            best = (k, mu);
        } else {
            break;
        }
    }
    let (active, mu) = best;
    let mut capacity = 0.0;
    for (j, &i) in order.iter().take(active).enumerate() {
        allocation[i] = mu - floors[j];
        capacity += (mu / floors[j]).log2();
    }
    Ok(WaterFilling {
        allocation,
        capacity,
        water_level: mu,
        active,
    })
}

/// Watts from decibel-watts.
pub fn dbw_to_watts(dbw: f64) -> f64 {
    10f64.powf(dbw / 10.0)
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// the values.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// A random channel whose Gram eigenvalues can be drawn from a seed.
pub trait ChannelEnsemble: Sync {
    /// Eigenvalues of `H Hᴴ` for the realization with this seed.
    fn gram_eigenvalues(&self, seed: u64) -> Result<Vec<f64>>;
}

/// Purely scattered channel. The Fourier dictionaries are semi-unitary and
/// the plane-wave phases unitary, so the nonzero spectrum of `H Hᴴ` equals
/// that of the `n_r × n_s` angular core.
#[derive(Debug, Clone)]
pub struct NlosEnsemble {
    geom: SystemGeometry,
    stats: SpectralStats,
    n_r: usize,
    n_s: usize,
}

impl NlosEnsemble {
    pub fn new(
        geom: &SystemGeometry,
        grid: &WavenumberGrid,
        stats: &SpectralStats,
    ) -> Result<Self> {
        // Building the synthesizer checks sampling density and shapes.
        NlosSynthesizer::new(geom, grid, stats)?;
        Ok(Self {
            geom: *geom,
            stats: stats.clone(),
            n_r: grid.n_r(),
            n_s: grid.n_s(),
        })
    }
}

impl ChannelEnsemble for NlosEnsemble {
    fn gram_eigenvalues(&self, seed: u64) -> Result<Vec<f64>> {
        let w = draw_coupling(self.n_r, self.n_s, seed);
        let core = angular_core(&self.geom, &self.stats, &w);
        hermitian_eigenvalues(&gram(&core))
    }
}

/// `H_los + g·H_nlos` with fresh scattering per seed.
#[derive(Debug, Clone)]
pub struct CompositeEnsemble {
    los: CMatrix,
    synth: NlosSynthesizer,
    gain: f64,
}

impl CompositeEnsemble {
    pub fn new(los: CMatrix, synth: NlosSynthesizer, nlos_gain: f64) -> Self {
        Self {
            los,
            synth,
            gain: nlos_gain,
        }
    }
}

impl ChannelEnsemble for CompositeEnsemble {
    fn gram_eigenvalues(&self, seed: u64) -> Result<Vec<f64>> {
        let nlos = self.synth.realize(seed).entries;
        if nlos.shape() != self.los.shape() {
            return Err(Error::Input("LoS and NLoS shapes differ".into()));
        }
        let h = &self.los + nlos * num_complex::Complex64::new(self.gain, 0.0);
        hermitian_eigenvalues(&gram(&h))
    }
}

/// Kronecker-correlated Rayleigh channel `R_r^{1/2} W R_s^{1/2}` with an
/// `N_r × N_s` Gaussian `W`.
#[derive(Debug, Clone)]
pub struct CorrelatedEnsemble {
    sqrt_r: CMatrix,
    sqrt_s: CMatrix,
}

impl CorrelatedEnsemble {
    pub fn new(r_r: &CMatrix, r_s: &CMatrix) -> Result<Self> {
        if !r_r.is_square() || !r_s.is_square() {
            return Err(Error::Input("correlation matrices must be square".into()));
        }
        Ok(Self {
            sqrt_r: hermitian_sqrt(r_r),
            sqrt_s: hermitian_sqrt(r_s),
        })
    }

    /// Uncorrelated entries of unit variance.
    pub fn iid(n_r: usize, n_s: usize) -> Self {
        Self {
            sqrt_r: CMatrix::identity(n_r, n_r),
            sqrt_s: CMatrix::identity(n_s, n_s),
        }
    }
}

impl ChannelEnsemble for CorrelatedEnsemble {
    fn gram_eigenvalues(&self, seed: u64) -> Result<Vec<f64>> {
        let w = draw_coupling(self.sqrt_r.ncols(), self.sqrt_s.nrows(), seed);
        let h = matmul(&matmul(&self.sqrt_r, &w), &self.sqrt_s);
        hermitian_eigenvalues(&gram(&h))
    }
}

/// Water-filled capacity on the significant eigenvalues of one realization.
pub fn realization_capacity(eigenvalues: &[f64], power: f64, noise_var: f64) -> Result<f64> {
    let trace: f64 = eigenvalues.iter().filter(|v| **v > 0.0).sum();
    let kept: Vec<f64> = eigenvalues
        .iter()
        .copied()
        .filter(|&v| v > RANK_TOL * trace)
        .collect();
    Ok(waterfill(&kept, power, noise_var)?.capacity)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    /// Mean capacity in bit/s/Hz.
    pub mean_bits: f64,
    pub std_error: f64,
    /// Trials that entered the mean.
    pub trials: usize,
    /// Trials dropped after a numerical failure.
    pub failed: usize,
    pub power_w: f64,
    pub noise_var: f64,
    pub seed: u64,
}

/// Per-trial capacities at each power, one row per power in trial order.
/// Trials that fail numerically are `None`.
pub fn trial_capacities<E: ChannelEnsemble>(
    ensemble: &E,
    powers: &[f64],
    noise_var: f64,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<Vec<Option<f64>>>> {
    for &p in powers {
        if !(p > 0.0) {
            return Err(Error::domain(
                "ergodic_capacity",
                format!("power {p} must be positive"),
            ));
        }
    }
    if !(noise_var > 0.0) {
        return Err(Error::domain(
            "ergodic_capacity",
            format!("noise variance {noise_var} must be positive"),
        ));
    }
    let per_trial: Vec<Option<Vec<f64>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ev = ensemble
                .gram_eigenvalues(derive_seed(master_seed, t as u64))
                .ok()?;
            powers
                .iter()
                .map(|&p| {
                    realization_capacity(&ev, p, noise_var)
                        .ok()
                        .filter(|c| c.is_finite())
                })
                .collect()
        })
        .collect();
    Ok((0..powers.len())
        .map(|k| {
            per_trial
                .iter()
                .map(|row| row.as_ref().map(|r| r[k]))
                .collect()
        })
        .collect())
}

fn summarize(
    values: &[Option<f64>],
    power: f64,
    noise_var: f64,
    seed: u64,
) -> Result<CapacityReport> {
    let ok: Vec<f64> = values.iter().flatten().copied().collect();
    let failed = values.len() - ok.len();
    if failed * 100 > values.len() {
        return Err(Error::TrialFailures {
            failed,
            trials: values.len(),
        });
    }
    let n = ok.len();
    let (mean, std_error) = if n == 0 {
        (0.0, 0.0)
    } else {
        let mean = pairwise_sum(&ok) / n as f64;
        let dev: Vec<f64> = ok.iter().map(|c| (c - mean).powi(2)).collect();
        let var = if n > 1 {
            pairwise_sum(&dev) / (n - 1) as f64
        } else {
            0.0
        };
        (mean, (var / n as f64).sqrt())
    };
    Ok(CapacityReport {
        mean_bits: mean,
        std_error,
        trials: n,
        failed,
        power_w: power,
        noise_var,
        seed,
    })
}

/// Ergodic capacity at several powers; each trial's eigenvalues serve every
/// power.
pub fn ergodic_capacity_sweep<E: ChannelEnsemble>(
    ensemble: &E,
    powers: &[f64],
    noise_var: f64,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<CapacityReport>> {
    let rows = trial_capacities(ensemble, powers, noise_var, trials, master_seed)?;
    rows.iter()
        .zip(powers)
        .map(|(row, &p)| summarize(row, p, noise_var, master_seed))
        .collect()
}

/// Mean water-filled capacity over `trials` seeded realizations.
pub fn ergodic_capacity<E: ChannelEnsemble>(
    ensemble: &E,
    power: f64,
    noise_var: f64,
    trials: usize,
    master_seed: u64,
) -> Result<CapacityReport> {
    Ok(ergodic_capacity_sweep(ensemble, &[power], noise_var, trials, master_seed)?.remove(0))
}
