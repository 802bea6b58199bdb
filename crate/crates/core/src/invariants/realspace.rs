use std::f64::consts::{PI, TAU};

use super::{Sign, WindingResult};
use crate::error::{Error, Result};
use crate::floquet::{FloquetOperator, Space};
use crate::lattice::Boundary;
use crate::numerics::{eigvals, svd_full, ComplexMatrix, C64};

/// Real-space windings farther than this from an integer are reported as not
/// quantized.
pub const QUANTIZATION_TOL: f64 = 0.1;

/// Diagonal of the position operator `P`: both sites of cell `l = 1..L`
/// carry `e^{−i2πl/L}`.
pub fn position_phases(cells: usize) -> Vec<C64> {
    (0..2 * cells)
        .map(|site| {
            let l = (site / 2 + 1) as f64;
            C64::from_polar(1.0, -TAU * l / cells as f64)
        })
        .collect()
}

/// `S† P S` for diagonal `P`.
fn project(s: &ComplexMatrix, phases: &[C64]) -> ComplexMatrix {
    let n = s.cols();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..s.rows()).map(|r| s[(r, i)].conj() * phases[r] * s[(r, j)]).sum()
    })
}

/// Real-space winding of a periodic chain from the singular vectors of
/// `U(T) ∓ I = U_A s U_B†`.
///
/// `raw` is `(1/4πi) Σ_j ln λ_j` over the eigenvalues of `P^A (P^B)†` with
/// `P^S = U_S† P U_S`. That normalization lands on half the mode count, so
/// `value = round(2 raw)` and `defect = |2 raw − value|`.
pub fn realspace_winding(u: &FloquetOperator, sign: Sign) -> Result<WindingResult> {
    let cells = match u.space {
        Space::Real {
            cells,
            boundary: Boundary::Periodic,
        } => cells,
        other => {
            return Err(Error::InvalidParameter(format!(
                "real-space winding needs a periodic chain, got {other:?}"
            )))
        }
    };
    let a = u.matrix.shift_diagonal(C64::new(-sign.target_eigenvalue(), 0.0));
    let svd = svd_full(&a)?;
    let phases = position_phases(cells);
    let pa = project(&svd.u, &phases);
    let pb = project(&svd.v, &phases);
    let m = pa.matmul(&pb.adjoint())?;
    let lambdas = eigvals(&m)?;
    let total_phase: f64 = lambdas.iter().map(|z| z.arg()).sum();
    let max_step = lambdas.iter().map(|z| z.arg().abs()).fold(0.0, f64::max);
    let raw = total_phase / (4.0 * PI);
    let mut r = WindingResult::from_raw(2.0 * raw, lambdas.len(), max_step);
    r.raw = raw;
    Ok(r)
}
