//! Topological numbers of the static and driven chain.
//!
//! Static windings live on the Brillouin zone or the analytic generalized
//! Brillouin zone circle. Floquet windings come either from determinants of
//! `U(k,T) ∓ I` in momentum space or from singular-vector projectors of the
//! real-space `U(T) ∓ I`.

mod momentum;
mod realspace;
mod singular;
mod static_winding;

use serde::{Deserialize, Serialize};

pub use momentum::{momentum_winding, MAX_GRID, MIN_DET};
pub use realspace::{position_phases, realspace_winding, QUANTIZATION_TOL};
pub use singular::{
    doubled_hamiltonian, singular_spectrum, zero_mode_count, zero_mode_count_with, SingularSpectrum, NUMERICAL_ZERO,
    SLOPE_MIN,
};
pub use static_winding::{winding_bloch_static, winding_gbz_static, GAP_TOL};

/// Selects `U(T) − I` (0-modes) or `U(T) + I` (π/T-modes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    /// The eigenvalue of `U` this sign probes: `+1` for minus, `−1` for plus.
    pub fn target_eigenvalue(self) -> f64 {
        match self {
            Sign::Minus => 1.0,
            Sign::Plus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub value: i64,
    /// Value before rounding.
    pub raw: f64,
    pub grid_points: usize,
    pub max_step_phase: f64,
    /// Distance of the quantity that was rounded from `value`.
    pub defect: f64,
}

impl WindingResult {
    pub(crate) fn from_raw(raw: f64, grid_points: usize, max_step_phase: f64) -> Self {
        let value = raw.round();
        Self {
            value: value as i64,
            raw,
            grid_points,
            max_step_phase,
            defect: (raw - value).abs(),
        }
    }

    pub fn is_quantized(&self, tol: f64) -> bool {
        self.defect < tol
    }
}
