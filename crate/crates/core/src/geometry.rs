//! Physical configuration, sampling grids and wavenumber index sets.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Two parallel line apertures facing each other across a gap `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemGeometry {
    pub l_s: f64,
    pub l_r: f64,
    pub d: f64,
    pub lambda: f64,
    pub delta_s: f64,
    pub delta_r: f64,
    pub s_z: f64,
    pub r_z: f64,
}

/// Source or receiver side of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Receiver,
}

impl SystemGeometry {
    /// Validates lengths and spacings. The planes sit at `s_z = 0` and `r_z = d`.
    pub fn new(
        l_s: f64,
        l_r: f64,
        d: f64,
        lambda: f64,
        delta_s: f64,
        delta_r: f64,
    ) -> Result<Self> {
        let geom = Self {
            l_s,
            l_r,
            d,
            lambda,
            delta_s,
            delta_r,
            s_z: 0.0,
            r_z: d,
        };
        geom.validate()?;
        Ok(geom)
    }

    /// Symmetric link with equal lengths and spacings on both sides.
    pub fn symmetric(length: f64, d: f64, lambda: f64, delta: f64) -> Result<Self> {
        Self::new(length, length, d, lambda, delta, delta)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("L_s", self.l_s),
            ("L_r", self.l_r),
            ("d", self.d),
            ("delta_s", self.delta_s),
            ("delta_r", self.delta_r),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.s_z.is_finite() && self.r_z.is_finite()) {
            return Err(Error::Config("plane coordinates must be finite".into()));
        }
        if self.delta_s > self.l_s {
            return Err(Error::Config(format!(
                "delta_s = {} exceeds L_s = {}",
                self.delta_s, self.l_s
            )));
        }
        if self.delta_r > self.l_r {
            return Err(Error::Config(format!(
                "delta_r = {} exceeds L_r = {}",
                self.delta_r, self.l_r
            )));
        }
        Ok(())
    }

    /// Wavenumber `2π/λ`, shared by both sides.
    pub fn k(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    pub fn n_s(&self) -> usize {
        sample_count(self.l_s, self.delta_s)
    }

    pub fn n_r(&self) -> usize {
        sample_count(self.l_r, self.delta_r)
    }

    pub fn length(&self, side: Side) -> f64 {
        match side {
            Side::Source => self.l_s,
            Side::Receiver => self.l_r,
        }
    }

    pub fn spacing(&self, side: Side) -> f64 {
        match side {
            Side::Source => self.delta_s,
            Side::Receiver => self.delta_r,
        }
    }

    pub fn samples(&self, side: Side) -> usize {
        sample_count(self.length(side), self.spacing(side))
    }

    /// `(k, N_s, N_r)`.
    pub fn derive(&self) -> Result<(f64, usize, usize)> {
        self.validate()?;
        Ok((self.k(), self.n_s(), self.n_r()))
    }

    /// Centered abscissae on one aperture, spaced exactly by its `delta`.
    pub fn sample_positions(&self, side: Side) -> Vec<f64> {
        centered_grid(self.samples(side), self.spacing(side))
    }

    /// Source and receiver abscissae.
    pub fn sample_points(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.sample_positions(Side::Source),
            self.sample_positions(Side::Receiver),
        )
    }

    pub fn wavenumber_grid(&self) -> WavenumberGrid {
        WavenumberGrid {
            source: SideGrid::new(self.l_s, self.lambda),
            receiver: SideGrid::new(self.l_r, self.lambda),
        }
    }
}

fn sample_count(length: f64, spacing: f64) -> usize {
    ((length / spacing).round() as usize).max(1)
}

fn centered_grid(n: usize, spacing: f64) -> Vec<f64> {
    let center = (n as f64 - 1.0) / 2.0;
    (0..n).map(|i| (i as f64 - center) * spacing).collect()
}

/// `L/λ`, snapped to the nearest integer when it is one up to rounding.
fn electrical_length(length: f64, lambda: f64) -> f64 {
    let m = length / lambda;
    let r = m.round();
    if (m - r).abs() <= 1e-9 * m.max(1.0) {
        r
    } else {
        m
    }
}

/// Wavenumber indices and γ coefficients for one aperture.
///
/// Index `p` stands for `k_x = 2πp/L`. The set is the half-open range
/// `{-⌊L/λ⌋, …, ⌊2L/λ⌋ - ⌊L/λ⌋ - 1}` whose angular cells tile `[0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SideGrid {
    length: f64,
    lambda: f64,
    indices: Vec<i64>,
    gamma: Vec<f64>,
}

impl SideGrid {
    pub fn new(length: f64, lambda: f64) -> Self {
        let m = electrical_length(length, lambda);
        let p_min = -(m.floor() as i64);
        let count = (2.0 * m).floor() as i64;
        let indices: Vec<i64> = (p_min..p_min + count).collect();
        let k = 2.0 * PI / lambda;
        let gamma = indices
            .iter()
            .map(|&p| {
                let kx = 2.0 * PI * p as f64 / length;
                (k * k - kx * kx).max(0.0).sqrt()
            })
            .collect();
        Self {
            length,
            lambda,
            indices,
            gamma,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Bounds of the cosine cell `[pλ/L, (p+1)λ/L]` of entry `i`, with the
    /// outermost edges clamped to `±1`.
    pub fn cos_cell(&self, i: usize) -> (f64, f64) {
        let p = self.indices[i] as f64;
        let step = self.lambda / self.length;
        let mut lo = p * step;
        let mut hi = (p + 1.0) * step;
        if i == 0 {
            lo = -1.0;
        }
        if i + 1 == self.indices.len() {
            hi = 1.0;
        }
        assert!(
            (-1.0..=1.0).contains(&lo) && (-1.0..=1.0).contains(&hi),
            "cell edges outside [-1, 1]"
        );
        (lo, hi)
    }

    /// Angular cell `[arccos(hi), arccos(lo)] ⊂ [0, π]` of entry `i`.
    pub fn angle_cell(&self, i: usize) -> (f64, f64) {
        let (lo, hi) = self.cos_cell(i);
        (hi.acos(), lo.acos())
    }
}

/// Index sets for both apertures.
#[derive(Debug, Clone, PartialEq)]
pub struct WavenumberGrid {
    pub source: SideGrid,
    pub receiver: SideGrid,
}

impl WavenumberGrid {
    pub fn side(&self, side: Side) -> &SideGrid {
        match side {
            Side::Source => &self.source,
            Side::Receiver => &self.receiver,
        }
    }

    pub fn n_s(&self) -> usize {
        self.source.len()
    }

    pub fn n_r(&self) -> usize {
        self.receiver.len()
    }
}
