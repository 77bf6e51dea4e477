//! Experiment configuration: TOML in, validated model objects out.

use std::fmt;
use std::path::{Path, PathBuf};

use hololine::{Cluster, ScatteringProfile, SystemGeometry};
use serde::{Deserialize, Serialize};
use toml::de::{DeTable, DeValue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    #[serde(rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
    #[serde(default)]
    pub wdm: WdmSection,
    #[serde(default)]
    pub metrics: MetricsConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub l_s: f64,
    pub l_r: f64,
    pub d: f64,
    pub lambda: f64,
    pub delta_s: f64,
    pub delta_r: f64,
}

/// A named scattering setting. `receiver` defaults to the source profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub source: ProfileConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver: Option<ProfileConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileConfig {
    Isotropic,
    Clusters { clusters: Vec<ClusterConfig> },
}

/// One vMF cluster; give exactly one of `circ_variance` and `concentration`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterConfig {
    pub mean_deg: f64,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circ_variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concentration: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WdmSection {
    #[serde(default = "default_n_basis")]
    pub n_basis: usize,
    /// Overrides the default oscillation budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panels: Option<usize>,
}

fn default_n_basis() -> usize {
    25
}

impl Default for WdmSection {
    fn default() -> Self {
        Self {
            n_basis: default_n_basis(),
            panels: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsConfig {
    pub epsilon: f64,
    pub power_dbw: Vec<f64>,
    pub noise_dbw: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub nlos_gain: f64,
    /// Extra curves in `capacity-vs-power`.
    pub include_jakes: bool,
    pub include_iid: bool,
    pub include_composite: bool,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.003,
            power_dbw: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            noise_dbw: 0.0,
            trials: 500,
            master_seed: 1,
            nlos_gain: 1.0,
            include_jakes: false,
            include_iid: false,
            include_composite: false,
        }
    }
}

/// Sampling grids of the sweep-style experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub acf_reach_wavelengths: f64,
    pub acf_points: usize,
    pub psd_points: usize,
    pub greens_reach_wavelengths: f64,
    pub greens_points: usize,
    /// Spacings `λ/m` visited by `capacity-vs-spacing`.
    pub spacing_divisors: Vec<u32>,
    pub spacing_power_dbw: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            acf_reach_wavelengths: 5.0,
            acf_points: 501,
            psd_points: 400,
            greens_reach_wavelengths: 1024.0,
            greens_points: 2049,
            spacing_divisors: vec![2, 4, 6, 8],
            spacing_power_dbw: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

/// A configuration problem, pinned to a source line when one is known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Path to an offending value, e.g. `scenario[1].source.clusters[0].weight`.
#[derive(Debug, Clone)]
enum Seg {
    Key(&'static str),
    Index(usize),
}

struct Problem {
    path: Vec<Seg>,
    message: String,
}

fn key(k: &'static str) -> Seg {
    Seg::Key(k)
}

fn render(path: &[Seg]) -> String {
    let mut out = String::new();
    for seg in path {
        match seg {
            Seg::Key(k) => {
                if !out.is_empty() {
                    out.push('.');
                }
                out.push_str(k);
            }
            Seg::Index(i) => out.push_str(&format!("[{i}]")),
        }
    }
    out
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())]
        .bytes()
        .filter(|b| *b == b'\n')
        .count()
        + 1
}

/// Line of the deepest value along `path` that exists in the document.
fn locate(source: &str, path: &[Seg]) -> Option<usize> {
    let root = DeTable::parse(source).ok()?;
    let span = root.span();
    let mut value = DeValue::Table(root.into_inner());
    let mut offset = span.start;
    for seg in path {
        let next = match seg {
            Seg::Key(k) => value.get(*k),
            Seg::Index(i) => value.get(*i),
        };
        match next {
            Some(v) => {
                offset = v.span().start;
                let inner = v.get_ref().clone();
                value = inner;
            }
            None => break,
        }
    }
    Some(line_of(source, offset))
}

impl ExperimentConfig {
    pub fn from_toml_str(source: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(source).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of(source, s.start)),
            message: e.message().trim().to_string(),
        })?;
        if let Some(p) = cfg.problems().into_iter().next() {
            return Err(ConfigError {
                line: locate(source, &p.path),
                message: format!("{}: {}", render(&p.path), p.message),
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_toml_str(&source)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("configuration serializes")
    }

    /// Every check that parsing alone does not enforce.
    fn problems(&self) -> Vec<Problem> {
        let mut out = Vec::new();
        let mut push = |path: Vec<Seg>, message: String| out.push(Problem { path, message });

        if let Err(e) = self.system_geometry() {
            let g = &self.geometry;
            let field = [
                ("lambda", g.lambda),
                ("d", g.d),
                ("l_s", g.l_s),
                ("l_r", g.l_r),
                ("delta_s", g.delta_s),
                ("delta_r", g.delta_r),
            ]
            .into_iter()
            .find(|(_, v)| !(v.is_finite() && *v > 0.0))
            .map_or("geometry", |(f, _)| f);
            let mut path = vec![key("geometry")];
            if field != "geometry" {
                path.push(key(field));
            }
            push(path, e.to_string());
        }

        if self.scenarios.is_empty() {
            push(vec![], "at least one [[scenario]] is required".into());
        }
        for (i, sc) in self.scenarios.iter().enumerate() {
            let base = vec![key("scenario"), Seg::Index(i)];
            if sc.name.trim().is_empty() {
                push(
                    [base.clone(), vec![key("name")]].concat(),
                    "name must not be empty".into(),
                );
            }
            if self.scenarios[..i].iter().any(|o| o.name == sc.name) {
                push(
                    [base.clone(), vec![key("name")]].concat(),
                    format!("duplicate scenario name {:?}", sc.name),
                );
            }
            let sides = [
                ("source", Some(&sc.source)),
                ("receiver", sc.receiver.as_ref()),
            ];
            for (side, profile) in sides {
                let Some(profile) = profile else { continue };
                let at = [base.clone(), vec![key(side)]].concat();
                if let Err((sub, message)) = profile_problem(profile) {
                    push([at, sub].concat(), message);
                }
            }
        }

        let m = &self.metrics;
        let mp = |f: &'static str| vec![key("metrics"), key(f)];
        if !(m.epsilon > 0.0 && m.epsilon < 1.0) {
            push(mp("epsilon"), format!("{} must lie in (0, 1)", m.epsilon));
        }
        if m.power_dbw.is_empty() {
            push(mp("power_dbw"), "power grid must not be empty".into());
        }
        if let Some(j) = m.power_dbw.iter().position(|p| !p.is_finite()) {
            push(
                [mp("power_dbw"), vec![Seg::Index(j)]].concat(),
                "power must be finite".into(),
            );
        }
        if !m.noise_dbw.is_finite() {
            push(mp("noise_dbw"), "noise power must be finite".into());
        }
        if m.trials == 0 {
            push(mp("trials"), "at least one trial is required".into());
        }
        if !(m.nlos_gain.is_finite() && m.nlos_gain >= 0.0) {
            push(
                mp("nlos_gain"),
                format!("{} must be finite and nonnegative", m.nlos_gain),
            );
        }

        if let Ok(geom) = self.system_geometry() {
            let limit = geom
                .wavenumber_grid()
                .n_s()
                .min(geom.wavenumber_grid().n_r());
            if self.wdm.n_basis == 0 || self.wdm.n_basis > limit {
                push(
                    vec![key("wdm"), key("n_basis")],
                    format!("{} must lie in 1..={limit}", self.wdm.n_basis),
                );
            }
        }
        if self.wdm.panels == Some(0) {
            push(
                vec![key("wdm"), key("panels")],
                "panel count must be positive".into(),
            );
        }

        let s = &self.sweep;
        let sp = |f: &'static str| vec![key("sweep"), key(f)];
        for (f, v) in [
            ("acf_reach_wavelengths", s.acf_reach_wavelengths),
            ("greens_reach_wavelengths", s.greens_reach_wavelengths),
        ] {
            if !(v.is_finite() && v > 0.0) {
                push(sp(f), format!("{v} must be positive"));
            }
        }
        for (f, v) in [
            ("acf_points", s.acf_points),
            ("psd_points", s.psd_points),
            ("greens_points", s.greens_points),
        ] {
            if v < 2 {
                push(sp(f), format!("{v} must be at least 2"));
            }
        }
        if !s.spacing_power_dbw.is_finite() {
            push(sp("spacing_power_dbw"), "power must be finite".into());
        }
        for (j, &m) in s.spacing_divisors.iter().enumerate() {
            if m < 2 {
                push(
                    [sp("spacing_divisors"), vec![Seg::Index(j)]].concat(),
                    format!("divisor {m} gives a spacing coarser than λ/2"),
                );
            } else if let Err(e) = self.geometry_with_spacing(m) {
                push(
                    [sp("spacing_divisors"), vec![Seg::Index(j)]].concat(),
                    e.to_string(),
                );
            }
        }
        out
    }

    pub fn system_geometry(&self) -> hololine::Result<SystemGeometry> {
        let g = &self.geometry;
        SystemGeometry::new(g.l_s, g.l_r, g.d, g.lambda, g.delta_s, g.delta_r)
    }

    /// The configured geometry with both spacings set to `λ/divisor`.
    pub fn geometry_with_spacing(&self, divisor: u32) -> hololine::Result<SystemGeometry> {
        let g = &self.geometry;
        let delta = g.lambda / divisor as f64;
        let geom = SystemGeometry::new(g.l_s, g.l_r, g.d, g.lambda, delta, delta)?;
        // The Fourier dictionary needs a whole number of samples per aperture.
        for (side, l) in [("source", g.l_s), ("receiver", g.l_r)] {
            let n = l / delta;
            if (n - n.round()).abs() > 1e-9 * n {
                return Err(hololine::Error::Config(format!(
                    "{side} length {l} is not a whole number of spacings λ/{divisor}"
                )));
            }
        }
        Ok(geom)
    }
}

fn cluster_problem(c: &ClusterConfig) -> Result<Cluster, (Seg, String)> {
    let mean = c.mean_deg.to_radians();
    match (c.circ_variance, c.concentration) {
        (Some(v), None) => Cluster::from_variance(c.weight, mean, v)
            .map_err(|e| (key("circ_variance"), e.to_string())),
        (None, Some(a)) => Cluster::from_concentration(c.weight, mean, a)
            .map_err(|e| (key("concentration"), e.to_string())),
        _ => Err((
            key("mean_deg"),
            "give exactly one of circ_variance and concentration".into(),
        )),
    }
}

fn profile_problem(p: &ProfileConfig) -> Result<ScatteringProfile, (Vec<Seg>, String)> {
    match p {
        ProfileConfig::Isotropic => Ok(ScatteringProfile::Isotropic),
        ProfileConfig::Clusters { clusters } => {
            let mut built = Vec::with_capacity(clusters.len());
            for (j, c) in clusters.iter().enumerate() {
                let cl = cluster_problem(c)
                    .map_err(|(seg, m)| (vec![key("clusters"), Seg::Index(j), seg], m))?;
                built.push(cl);
            }
            ScatteringProfile::clusters(built).map_err(|e| (vec![key("clusters")], e.to_string()))
        }
    }
}

impl ProfileConfig {
    /// Angles converted to radians; call only on validated configs.
    pub fn build(&self) -> ScatteringProfile {
        profile_problem(self).expect("profile validated on load")
    }
}

impl ScenarioConfig {
    pub fn source_profile(&self) -> ScatteringProfile {
        self.source.build()
    }

    pub fn receiver_profile(&self) -> ScatteringProfile {
        self.receiver.as_ref().unwrap_or(&self.source).build()
    }
}
