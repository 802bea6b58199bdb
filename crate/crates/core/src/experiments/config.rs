use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DisorderRange, DriveProtocol, ModelParams};

/// Evenly spaced values `min, …, max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    /// A single value may be "swept" with `steps = 1` and `min == max`;
    /// anything else needs at least two steps.
    pub fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidParameter(format!("sweep.{name}: bounds must be finite")));
        }
        let single = self.steps == 1 && self.min == self.max;
        if !single && (self.steps < 2 || self.max < self.min) {
            return Err(Error::InvalidParameter(format!(
                "sweep.{name}: need steps >= 2 and max >= min (got {} steps over [{}, {}])",
                self.steps, self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|j| {
                if j + 1 == self.steps {
                    self.max
                } else {
                    self.min + h * j as f64
                }
            })
            .collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.steps < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.steps - 1) as f64
        }
    }
}

/// Swept parameters. An absent axis is held at its base value
/// (`drive.f` or `model.w`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxes {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Axis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisorderSettings {
    pub strengths: Vec<f64>,
    pub realizations: usize,
    /// Master seed; realization `r` uses stream `r` of this seed.
    pub seed: u64,
    pub range: DisorderRange,
    /// Also run the singular-value size scaling for every realization.
    pub zero_mode_scaling: bool,
}

impl Default for DisorderSettings {
    fn default() -> Self {
        Self {
            strengths: vec![0.0, 0.005, 0.05, 0.1, 0.2, 0.3],
            realizations: 500,
            seed: 1,
            range: DisorderRange::AllPairs,
            zero_mode_scaling: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingSettings {
    /// Open-chain sizes for the singular-value scaling fit.
    pub sizes: Vec<usize>,
}

impl Default for ScalingSettings {
    fn default() -> Self {
        Self {
            sizes: vec![20, 40, 60, 80],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSettings {
    /// Initial momentum grid of the Floquet windings (refined adaptively).
    pub grid: usize,
    /// Grid of the static Brillouin-zone and GBZ integrals.
    pub static_grid: usize,
    /// Decay rate per cell that counts a singular value as a zero mode.
    pub slope_min: f64,
    /// Distance of a Floquet eigenvalue from ±1 accepted as an edge mode.
    pub energy_tol: f64,
    /// Minimum weight in the outer cells for an edge mode.
    pub localization_min: f64,
    /// Width of the bisection bracket at which a boundary is accepted.
    pub bisection_tol: f64,
    /// Momentum samples for the `min_k |det|` boundary check.
    pub det_samples: usize,
    /// Largest `min_k |det|` at which a bisected point counts as a gap closing.
    pub boundary_det_tol: f64,
    /// `|E|` threshold for static open-chain zero modes.
    pub static_zero_tol: f64,
}

impl Default for NumericsSettings {
    fn default() -> Self {
        Self {
            grid: 64,
            static_grid: 512,
            slope_min: crate::invariants::SLOPE_MIN,
            energy_tol: 1e-3,
            localization_min: 0.5,
            bisection_tol: 1e-4,
            det_samples: 512,
            boundary_det_tol: 1e-2,
            static_zero_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub model: ModelParams,
    pub drive: DriveProtocol,
    pub sweep: SweepAxes,
    pub disorder: DisorderSettings,
    pub scaling: ScalingSettings,
    pub numerics: NumericsSettings,
    pub output_dir: PathBuf,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::default(),
            drive: DriveProtocol::default(),
            sweep: SweepAxes::default(),
            disorder: DisorderSettings::default(),
            scaling: ScalingSettings::default(),
            numerics: NumericsSettings::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.drive.validate()?;
        if let Some(a) = &self.sweep.f {
            a.validate("f")?;
        }
        if let Some(a) = &self.sweep.w {
            a.validate("w")?;
        }
        let d = &self.disorder;
        if d.realizations < 1 {
            return Err(Error::InvalidParameter("disorder.realizations must be >= 1".into()));
        }
        if d.strengths.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidParameter(
                "disorder.strengths must be finite and >= 0".into(),
            ));
        }
        if d.strengths
            .iter()
            .enumerate()
            .any(|(i, s)| d.strengths[..i].contains(s))
        {
            return Err(Error::InvalidParameter("disorder.strengths must not repeat".into()));
        }
        let sizes = &self.scaling.sizes;
        if sizes.len() < 3 || sizes.windows(2).any(|p| p[1] <= p[0]) || sizes[0] == 0 {
            return Err(Error::InvalidParameter(
                "scaling.sizes needs at least 3 strictly increasing positive sizes".into(),
            ));
        }
        let n = &self.numerics;
        if n.grid < 3 || n.static_grid < 3 || n.det_samples < 3 {
            return Err(Error::InvalidParameter("numerics grids need at least 3 points".into()));
        }
        if !(n.bisection_tol > 0.0 && n.energy_tol > 0.0 && n.boundary_det_tol > 0.0) {
            return Err(Error::InvalidParameter("numerics tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn f_values(&self) -> Vec<f64> {
        self.sweep.f.map_or_else(|| vec![self.drive.f], |a| a.values())
    }

    pub fn w_values(&self) -> Vec<f64> {
        self.sweep.w.map_or_else(|| vec![self.model.w], |a| a.values())
    }

    /// Model and drive at one `(f, w)` grid point.
    pub fn at(&self, f: f64, w: f64) -> (ModelParams, DriveProtocol) {
        (ModelParams { w, ..self.model }, DriveProtocol { f, ..self.drive })
    }
}
