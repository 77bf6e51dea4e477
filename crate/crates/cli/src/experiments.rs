//! One function per subcommand; each returns the CSV table and a few
//! summary lines for the terminal.

use anyhow::{Context, Result};
use clap::ValueEnum;
use hololine::channel::{
    correlation_matrices, jakes_correlation, los_em, los_raytracing, mean_gram, NlosSynthesizer,
};
use hololine::greens::{greens_amplitudes, paraxial_phase_error};
use hololine::linalg::gram;
use hololine::metrics::{
    dbw_to_watts, dof_composite, dof_los, dof_spectrum, dof_two_sided, eigen_spectrum_normalized,
    ergodic_capacity_sweep, hermitian_eigenvalues, realization_capacity, CapacityReport,
    ChannelEnsemble, CompositeEnsemble, CorrelatedEnsemble, NlosEnsemble,
};
use hololine::numerics::{QuadratureSpec, DEFAULT_NODES_PER_PANEL};
use hololine::scattering::{acf_profile, psd_profile, variance_spectrum};
use hololine::wdm::{wdm_los, WdmConfig};
use hololine::{CMatrix, ScatteringProfile, Side, SpectralStats, SystemGeometry};

use crate::config::{ExperimentConfig, ScenarioConfig};
use crate::output::{db, num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    LosSpectrum,
    CorrSpectrum,
    VarianceSpectrum,
    Acf,
    Psd,
    CapacityVsPower,
    CapacityVsSpacing,
    CompositeSpectrum,
    WdmLos,
    GreensCompare,
}

impl Experiment {
    /// Output file stem, identical to the subcommand name.
    pub fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
}

pub fn run(exp: Experiment, cfg: &ExperimentConfig) -> Result<Report> {
    let geom = cfg.system_geometry()?;
    match exp {
        Experiment::LosSpectrum => los_spectrum(cfg, &geom),
        Experiment::CorrSpectrum => corr_spectrum(cfg, &geom),
        Experiment::VarianceSpectrum => variance_table(cfg, &geom),
        Experiment::Acf => acf_table(cfg, &geom),
        Experiment::Psd => psd_table(cfg, &geom),
        Experiment::CapacityVsPower => capacity_vs_power(cfg, &geom),
        Experiment::CapacityVsSpacing => capacity_vs_spacing(cfg),
        Experiment::CompositeSpectrum => composite_spectrum(cfg, &geom),
        Experiment::WdmLos => wdm_table(cfg, &geom),
        Experiment::GreensCompare => greens_table(cfg, &geom),
    }
}

fn stats(sc: &ScenarioConfig, geom: &SystemGeometry) -> SpectralStats {
    SpectralStats::new(
        &sc.source_profile(),
        &sc.receiver_profile(),
        &geom.wavenumber_grid(),
    )
}

fn side_profiles(sc: &ScenarioConfig) -> [(&'static str, ScatteringProfile); 2] {
    [
        ("source", sc.source_profile()),
        ("receiver", sc.receiver_profile()),
    ]
}

fn wdm_config(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<WdmConfig> {
    let grid = geom.wavenumber_grid();
    let base = WdmConfig::new(geom, &grid, cfg.wdm.n_basis)?;
    Ok(match cfg.wdm.panels {
        Some(p) => {
            let quad = QuadratureSpec::new(p, DEFAULT_NODES_PER_PANEL, base.quad.abs_tol)?;
            WdmConfig::with_quadrature(&grid, cfg.wdm.n_basis, quad)?
        }
        None => base,
    })
}

/// Spectra of unequal length side by side; missing entries stay empty.
fn spectra_table(columns: &[(String, Vec<f64>)]) -> Table {
    let mut table = Table::new(
        std::iter::once("index".to_string()).chain(columns.iter().map(|(n, _)| format!("{n}_db"))),
    );
    let rows = columns.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    for i in 0..rows {
        let mut row = vec![(i + 1).to_string()];
        row.extend(
            columns
                .iter()
                .map(|(_, v)| v.get(i).map_or_else(String::new, |x| db(*x))),
        );
        table.push(row);
    }
    table
}

fn los_spectrum(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let eps = cfg.metrics.epsilon;
    let rt = eigen_spectrum_normalized(&los_raytracing(geom).gram())?;
    let em = eigen_spectrum_normalized(&los_em(geom)?.gram())?;
    let wdm = wdm_los(geom, &wdm_config(cfg, geom)?)?;
    let wd = eigen_spectrum_normalized(&gram(&wdm.matrix))?;
    let mut notes = vec![format!("knee dof_los = {}", dof_los(geom))];
    for (name, s) in [("raytrace", &rt), ("em", &em), ("wdm", &wd)] {
        notes.push(format!(
            "{name}: dof at epsilon {eps} = {}",
            dof_spectrum(s, eps)?
        ));
    }
    if !wdm.converged() {
        notes.push(format!(
            "warning: {} WDM entries changed by more than the tolerance when panels doubled (max {:e})",
            wdm.flagged.len(),
            wdm.max_change
        ));
    }
    let table = spectra_table(&[
        ("raytrace".into(), rt),
        ("em".into(), em),
        (format!("wdm{}", cfg.wdm.n_basis), wd),
    ]);
    Ok(Report { table, notes })
}

fn corr_spectrum(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let grid = geom.wavenumber_grid();
    let mut columns = Vec::new();
    let mut notes = Vec::new();
    for sc in &cfg.scenarios {
        let st = stats(sc, geom);
        let corr = correlation_matrices(geom, &grid, &st)?;
        columns.push((sc.name.clone(), eigen_spectrum_normalized(&corr.r_r)?));
        notes.push(format!(
            "{}: dof at epsilon {} = {}",
            sc.name,
            cfg.metrics.epsilon,
            dof_two_sided(&st, cfg.metrics.epsilon)?
        ));
    }
    columns.push((
        "jakes".into(),
        eigen_spectrum_normalized(&jakes_correlation(geom, Side::Receiver)?)?,
    ));
    Ok(Report {
        table: spectra_table(&columns),
        notes,
    })
}

fn variance_table(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let grid = geom.wavenumber_grid();
    let mut table = Table::new(["scenario", "side", "q", "sigma2"]);
    let mut notes = Vec::new();
    for sc in &cfg.scenarios {
        for (side_name, side) in [("source", Side::Source), ("receiver", Side::Receiver)] {
            let profile = if side == Side::Source {
                sc.source_profile()
            } else {
                sc.receiver_profile()
            };
            let sg = grid.side(side);
            let values = variance_spectrum(&profile, &grid, side);
            let mut peak = 0;
            for (i, (&q, &v)) in sg.indices().iter().zip(&values).enumerate() {
                table.push(vec![
                    sc.name.clone(),
                    side_name.into(),
                    q.to_string(),
                    num(v),
                ]);
                if v > values[peak] {
                    peak = i;
                }
            }
            notes.push(format!(
                "{} {side_name}: peak at q = {}",
                sc.name,
                sg.indices()[peak]
            ));
        }
    }
    Ok(Report { table, notes })
}

fn acf_table(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let k = geom.k();
    let n = cfg.sweep.acf_points;
    let reach = cfg.sweep.acf_reach_wavelengths * geom.lambda;
    let mut table = Table::new(["scenario", "side", "r_x", "k_r_x", "acf_re", "acf_im"]);
    for sc in &cfg.scenarios {
        for (side, profile) in side_profiles(sc) {
            for i in 0..n {
                let r = reach * i as f64 / (n - 1) as f64;
                let v = acf_profile(&profile, k, r)?;
                table.push(vec![
                    sc.name.clone(),
                    side.into(),
                    num(r),
                    num(k * r),
                    num(v.re),
                    num(v.im),
                ]);
            }
        }
    }
    Ok(Report {
        table,
        notes: Vec::new(),
    })
}

/// Cell midpoints of `(-1, 1)`, which avoid the `1/γ` poles at `±k`.
fn psd_table(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let k = geom.k();
    let n = cfg.sweep.psd_points;
    let mut table = Table::new(["scenario", "side", "k_x_over_k", "psd"]);
    for sc in &cfg.scenarios {
        for (side, profile) in side_profiles(sc) {
            for i in 0..n {
                let u = -1.0 + (2 * i + 1) as f64 / n as f64;
                table.push(vec![
                    sc.name.clone(),
                    side.into(),
                    num(u),
                    num(psd_profile(&profile, k, u * k)?),
                ]);
            }
        }
    }
    Ok(Report {
        table,
        notes: Vec::new(),
    })
}

fn capacity_rows<E: ChannelEnsemble>(
    table: &mut Table,
    prefix: &[String],
    ensemble: &E,
    powers_dbw: &[f64],
    cfg: &ExperimentConfig,
) -> Result<Vec<CapacityReport>> {
    let powers: Vec<f64> = powers_dbw.iter().map(|p| dbw_to_watts(*p)).collect();
    let m = &cfg.metrics;
    let reports = ergodic_capacity_sweep(
        ensemble,
        &powers,
        dbw_to_watts(m.noise_dbw),
        m.trials,
        m.master_seed,
    )?;
    for (p, r) in powers_dbw.iter().zip(&reports) {
        let mut row = prefix.to_vec();
        row.extend([
            num(*p),
            num(r.mean_bits),
            num(r.std_error),
            r.trials.to_string(),
            r.failed.to_string(),
        ]);
        table.push(row);
    }
    Ok(reports)
}

fn jakes_ensemble(geom: &SystemGeometry) -> Result<CorrelatedEnsemble> {
    Ok(CorrelatedEnsemble::new(
        &jakes_correlation(geom, Side::Receiver)?,
        &jakes_correlation(geom, Side::Source)?,
    )?)
}

fn capacity_vs_power(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let grid = geom.wavenumber_grid();
    let powers = &cfg.metrics.power_dbw;
    let mut table = Table::new([
        "model",
        "power_dbw",
        "mean_bits",
        "std_error",
        "trials",
        "failed",
    ]);
    let mut notes = Vec::new();
    let mut note = |name: &str, reports: &[CapacityReport]| {
        let last = reports.last().expect("nonempty power grid");
        notes.push(format!(
            "{name}: {:.2} bit/s/Hz at {} dBW",
            last.mean_bits,
            powers[powers.len() - 1]
        ));
    };
    for sc in &cfg.scenarios {
        let ens = NlosEnsemble::new(geom, &grid, &stats(sc, geom))?;
        let r = capacity_rows(
            &mut table,
            std::slice::from_ref(&sc.name),
            &ens,
            powers,
            cfg,
        )
        .with_context(|| format!("scenario {}", sc.name))?;
        note(&sc.name, &r);
    }
    if cfg.metrics.include_jakes {
        let r = capacity_rows(
            &mut table,
            &["jakes".into()],
            &jakes_ensemble(geom)?,
            powers,
            cfg,
        )?;
        note("jakes", &r);
    }
    if cfg.metrics.include_iid {
        let ens = CorrelatedEnsemble::iid(geom.n_r(), geom.n_s());
        let r = capacity_rows(&mut table, &["iid".into()], &ens, powers, cfg)?;
        note("iid", &r);
    }
    if cfg.metrics.include_composite {
        let los = los_em(geom)?.entries;
        // The LoS channel is deterministic: one realization, no spread.
        let ev = hermitian_eigenvalues(&gram(&los))?;
        let noise = dbw_to_watts(cfg.metrics.noise_dbw);
        for &p in powers {
            let c = realization_capacity(&ev, dbw_to_watts(p), noise)?;
            table.push(vec![
                "los".into(),
                num(p),
                num(c),
                num(0.0),
                "1".into(),
                "0".into(),
            ]);
        }
        for sc in &cfg.scenarios {
            let synth = NlosSynthesizer::new(geom, &grid, &stats(sc, geom))?;
            let ens = CompositeEnsemble::new(los.clone(), synth, cfg.metrics.nlos_gain);
            let name = format!("composite/{}", sc.name);
            let r = capacity_rows(&mut table, std::slice::from_ref(&name), &ens, powers, cfg)?;
            note(&name, &r);
        }
    }
    Ok(Report { table, notes })
}

fn capacity_vs_spacing(cfg: &ExperimentConfig) -> Result<Report> {
    let power = [cfg.sweep.spacing_power_dbw];
    let mut table = Table::new([
        "spacing_over_lambda",
        "divisor",
        "model",
        "power_dbw",
        "mean_bits",
        "std_error",
        "trials",
        "failed",
    ]);
    let mut notes = Vec::new();
    for &m in &cfg.sweep.spacing_divisors {
        let geom = cfg.geometry_with_spacing(m)?;
        let grid = geom.wavenumber_grid();
        let prefix = |model: &str| vec![num(1.0 / m as f64), m.to_string(), model.to_string()];
        for sc in &cfg.scenarios {
            let ens = NlosEnsemble::new(&geom, &grid, &stats(sc, &geom))?;
            capacity_rows(&mut table, &prefix(&sc.name), &ens, &power, cfg)?;
        }
        capacity_rows(
            &mut table,
            &prefix("jakes"),
            &jakes_ensemble(&geom)?,
            &power,
            cfg,
        )?;
        let iid = CorrelatedEnsemble::iid(geom.n_r(), geom.n_s());
        capacity_rows(&mut table, &prefix("iid"), &iid, &power, cfg)?;
        notes.push(format!(
            "spacing lambda/{m}: {} samples per side",
            geom.n_r()
        ));
    }
    Ok(Report { table, notes })
}

fn composite_spectrum(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let grid = geom.wavenumber_grid();
    let los: CMatrix = los_em(geom)?.entries;
    let mut columns = vec![("los".to_string(), eigen_spectrum_normalized(&gram(&los))?)];
    let mut notes = Vec::new();
    for sc in &cfg.scenarios {
        let corr = correlation_matrices(geom, &grid, &stats(sc, geom))?;
        let mg = mean_gram(&los, &corr, cfg.metrics.nlos_gain)?;
        notes.push(format!(
            "{}: composite dof at epsilon {} = {}",
            sc.name,
            cfg.metrics.epsilon,
            dof_composite(&mg, cfg.metrics.epsilon)?
        ));
        columns.push((sc.name.clone(), eigen_spectrum_normalized(&mg)?));
    }
    Ok(Report {
        table: spectra_table(&columns),
        notes,
    })
}

fn wdm_table(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let h = wdm_los(geom, &wdm_config(cfg, geom)?)?;
    let mut table = Table::new(["n", "m", "re", "im", "abs"]);
    for n in 0..h.matrix.nrows() {
        for m in 0..h.matrix.ncols() {
            let v = h.matrix[(n, m)];
            table.push(vec![
                n.to_string(),
                m.to_string(),
                num(v.re),
                num(v.im),
                num(v.norm()),
            ]);
        }
    }
    let notes = vec![
        format!(
            "{} panels, max change under doubling {:e}",
            h.panels, h.max_change
        ),
        format!("converged: {}", h.converged()),
    ];
    Ok(Report { table, notes })
}

fn greens_table(cfg: &ExperimentConfig, geom: &SystemGeometry) -> Result<Report> {
    let (d, k) = (geom.d, geom.k());
    let n = cfg.sweep.greens_points;
    let reach = cfg.sweep.greens_reach_wavelengths * geom.lambda;
    let mut table = Table::new([
        "s_x",
        "vec_abs",
        "sca_abs",
        "par_abs",
        "max_deviation",
        "paraxial_phase_error",
    ]);
    for i in 0..n {
        let s = -reach + 2.0 * reach * i as f64 / (n - 1) as f64;
        let g = greens_amplitudes(s, d, k)?;
        let [a, b, c] = g.magnitudes();
        table.push(vec![
            num(s),
            num(a),
            num(b),
            num(c),
            num(g.max_pairwise_deviation()),
            num(paraxial_phase_error(s, d, k)),
        ]);
    }
    Ok(Report {
        table,
        notes: Vec::new(),
    })
}
