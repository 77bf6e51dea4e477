//! Holographic-line MIMO channel simulator.
//!
//! Two parallel line apertures of lengths `L_s` and `L_r` face each other at
//! distance `d`. The crate builds their line-of-sight channel (ray tracing,
//! exact Hankel kernel, and wavenumber-division multiplexed form), draws
//! non-line-of-sight realizations from a Fourier plane-wave series driven by
//! von Mises–Fisher angular power profiles, and evaluates eigen-spectra,
//! degrees of freedom and water-filling capacity.

pub mod channel;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod linalg;
pub mod metrics;
pub mod numerics;
pub mod rng;
pub mod scattering;
pub mod wdm;

pub use error::{Error, Result};
pub use geometry::{Side, SystemGeometry, WavenumberGrid};
pub use scattering::{Cluster, ScatteringProfile, SpectralStats};

/// Dense complex matrix used for channels and correlations.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
