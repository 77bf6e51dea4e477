//! Experiment runner behind the `hololine` binary.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{ConfigError, ExperimentConfig};
pub use experiments::{run, Experiment, Report};
