//! Shared fixtures and reporting for the acceptance suite.

use hololine::{Cluster, ScatteringProfile, SystemGeometry};

pub const EPSILON: f64 = 0.003;

/// 128λ apertures, λ = 1 cm, 10 m apart, sampled at λ/2.
pub fn reference_geometry() -> SystemGeometry {
    SystemGeometry::symmetric(1.28, 10.0, 0.01, 0.005).expect("valid geometry")
}

pub fn isotropic() -> ScatteringProfile {
    ScatteringProfile::Isotropic
}

/// Two equal-weight clusters at 30° and 60°.
pub fn non_isotropic_1() -> ScatteringProfile {
    ScatteringProfile::clusters(vec![
        Cluster::from_variance(0.5, 30f64.to_radians(), 0.01).expect("valid cluster"),
        Cluster::from_variance(0.5, 60f64.to_radians(), 0.005).expect("valid cluster"),
    ])
    .expect("weights sum to one")
}

/// One cluster at 120°.
pub fn non_isotropic_2() -> ScatteringProfile {
    ScatteringProfile::clusters(vec![Cluster::from_variance(
        1.0,
        120f64.to_radians(),
        0.025,
    )
    .expect("valid cluster")])
    .expect("weights sum to one")
}

pub fn named_profiles() -> Vec<(&'static str, ScatteringProfile)> {
    vec![
        ("isotropic", isotropic()),
        ("non-isotropic 1", non_isotropic_1()),
        ("non-isotropic 2", non_isotropic_2()),
    ]
}

/// `10 log10(a / b)`.
pub fn db_ratio(a: f64, b: f64) -> f64 {
    10.0 * (a / b).log10()
}

/// Collects the checks of one criterion, prints a line per check and a
/// summary line, and panics at the end if any check failed.
pub struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl AsRef<str>) -> bool {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!(
            "[criterion {:>2}] {tag} {name}: {}",
            self.id,
            detail.as_ref()
        );
        if !pass {
            self.failures.push(name.to_string());
        }
        pass
    }

    pub fn finish(self) {
        let tag = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("[criterion {:>2}] {tag} == {} ==", self.id, self.title);
        assert!(
            self.failures.is_empty(),
            "criterion {} ({}) failed: {}",
            self.id,
            self.title,
            self.failures.join(", ")
        );
    }
}
