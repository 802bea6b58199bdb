use std::f64::consts::{FRAC_PI_2, TAU};

use super::{Sign, WindingResult};
use crate::error::{Error, Result};
use crate::floquet::bloch_evolution;
use crate::lattice::{DriveProtocol, ModelParams};
use crate::numerics::{phase_unwind, C64};

/// `|det(U(k,T) ∓ I)|` below this on a grid point counts as a gap closing.
pub const MIN_DET: f64 = 1e-12;

/// Grid doubling stops here even if phase steps are still large.
pub const MAX_GRID: usize = 1 << 16;

fn shifted_det(k: f64, params: &ModelParams, drive: &DriveProtocol, sign: Sign) -> Result<C64> {
    let u = bloch_evolution(k, params, drive)?.matrix;
    let s = sign.target_eigenvalue();
    let (a, b, c, d) = (u[(0, 0)] - s, u[(0, 1)], u[(1, 0)], u[(1, 1)] - s);
    let det = a * d - b * c;
    if det.norm() < MIN_DET {
        return Err(Error::GapClosed {
            at: k,
            magnitude: det.norm(),
        });
    }
    Ok(det)
}

/// Winding of `det(U(k,T) ∓ I)` around the origin as `k` runs over
/// `[0, 2π)`. The grid starts at `grid` points and doubles until every
/// principal phase step is below π/2 or [`MAX_GRID`] is reached.
pub fn momentum_winding(params: &ModelParams, drive: &DriveProtocol, sign: Sign, grid: usize) -> Result<WindingResult> {
    if grid < 3 {
        return Err(Error::InvalidParameter(format!(
            "winding grid needs at least 3 points, got {grid}"
        )));
    }
    let mut n = grid;
    let mut values = (0..n)
        .map(|j| shifted_det(TAU * j as f64 / n as f64, params, drive, sign))
        .collect::<Result<Vec<_>>>()?;
    loop {
        let unwound = phase_unwind(&values, true)?;
        if unwound.max_step < FRAC_PI_2 || 2 * n > MAX_GRID {
            return Ok(WindingResult::from_raw(unwound.total_phase / TAU, n, unwound.max_step));
        }
        // the old grid is the even subset of the doubled one
        let mut refined = Vec::with_capacity(2 * n);
        for (j, &z) in values.iter().enumerate() {
            refined.push(z);
            refined.push(shifted_det(
                TAU * (2 * j + 1) as f64 / (2 * n) as f64,
                params,
                drive,
                sign,
            )?);
        }
        values = refined;
        n *= 2;
    }
}
