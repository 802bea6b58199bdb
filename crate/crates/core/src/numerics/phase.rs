use std::f64::consts::{PI, TAU};

use super::matrix::C64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseUnwind {
    /// Accumulated phase along the sequence, in radians.
    pub total_phase: f64,
    /// `round(total_phase / 2π)`.
    pub winding: i64,
    /// Largest single-step principal phase increment; callers refine their
    /// grid when this approaches π.
    pub max_step: f64,
}

/// Sums principal phase increments between consecutive values.
///
/// With `closed` the last-to-first increment is included, so the total is a
/// multiple of 2π. A zero entry yields [`Error::GapClosed`] carrying its index.
pub fn phase_unwind(values: &[C64], closed: bool) -> Result<PhaseUnwind> {
    if let Some((idx, _)) = values.iter().enumerate().find(|(_, z)| z.norm() == 0.0) {
        return Err(Error::GapClosed {
            at: idx as f64,
            magnitude: 0.0,
        });
    }
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    let mut step = |a: C64, b: C64| {
        let d = (b / a).arg();
        total += d;
        max_step = max_step.max(d.abs());
    };
    for w in values.windows(2) {
        step(w[0], w[1]);
    }
    if closed && values.len() > 1 {
        step(values[values.len() - 1], values[0]);
    }
    Ok(PhaseUnwind {
        total_phase: total,
        winding: (total / TAU).round() as i64,
        max_step,
    })
}

/// Principal phase increments must stay below this for the winding to be
/// trusted.
pub const MAX_TRUSTED_STEP: f64 = PI;
