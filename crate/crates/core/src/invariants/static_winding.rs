use std::f64::consts::{PI, TAU};

use super::WindingResult;
use crate::error::{Error, Result};
use crate::lattice::{
    bloch_hamiltonian, bloch_hamiltonian_dk, non_bloch_hamiltonian, non_bloch_hamiltonian_dbeta, ChiralOperator,
    ModelParams,
};
use crate::numerics::{inverse, phase_unwind, ComplexMatrix, C64, I};

/// `|det H|` below this on a grid point counts as a gap closing.
pub const GAP_TOL: f64 = 1e-12;

/// Rectangle rule for `(1/4πi) ∮ tr[σ_z H⁻¹ dH]` over a sampled contour.
///
/// `sample(k)` returns `H` and `dH/dk` on the contour at parameter `k`.
fn integrate(grid: usize, sample: impl Fn(f64) -> (ComplexMatrix, ComplexMatrix)) -> Result<WindingResult> {
    if grid < 3 {
        return Err(Error::InvalidParameter(format!(
            "winding grid needs at least 3 points, got {grid}"
        )));
    }
    let sz = ChiralOperator::sigma_z().matrix();
    let dk = TAU / grid as f64;
    let mut sum = C64::new(0.0, 0.0);
    let mut upper = Vec::with_capacity(grid);
    let mut lower = Vec::with_capacity(grid);
    for j in 0..grid {
        let k = dk * j as f64;
        let (h, dh) = sample(k);
        let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
        if det.norm() < GAP_TOL {
            return Err(Error::GapClosed {
                at: k,
                magnitude: det.norm(),
            });
        }
        let integrand = (&(&sz * &inverse(&h)?) * &dh).trace();
        sum += integrand * dk;
        upper.push(h[(0, 1)]);
        lower.push(h[(1, 0)]);
    }
    let raw = (sum / (4.0 * PI * I)).re;
    let max_step = phase_unwind(&upper, true)?
        .max_step
        .max(phase_unwind(&lower, true)?.max_step);
    Ok(WindingResult::from_raw(raw, grid, max_step))
}

/// Chiral winding of the static Bloch Hamiltonian on the Brillouin zone.
pub fn winding_bloch_static(params: &ModelParams, grid: usize) -> Result<WindingResult> {
    integrate(grid, |k| {
        (bloch_hamiltonian(k, params), bloch_hamiltonian_dk(k, params))
    })
}

/// Same integrand on the circle `β = r e^{ik}`, `r = √|t_R/t_L|`, which is the
/// generalized Brillouin zone of this model.
pub fn winding_gbz_static(params: &ModelParams, grid: usize) -> Result<WindingResult> {
    let (tl, tr) = (params.t_left(), params.t_right());
    if tl == 0.0 || tr == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "GBZ radius undefined for t_L = {tl}, t_R = {tr}"
        )));
    }
    let r = (tr / tl).abs().sqrt();
    integrate(grid, |k| {
        let beta = C64::from_polar(r, k);
        let dh = non_bloch_hamiltonian_dbeta(beta, params).scale(I * beta);
        (non_bloch_hamiltonian(beta, params), dh)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;

    fn params(w: f64, gamma: f64, v: f64) -> ModelParams {
        ModelParams::new(w, gamma, v, 1, Boundary::Periodic).unwrap()
    }

    #[test]
    fn atomic_limit_is_trivial() {
        let r = winding_bloch_static(&params(1.0, 0.5, 0.0), 64).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.raw.abs() < 1e-14);
    }

    #[test]
    fn hermitian_ssh() {
        let top = winding_bloch_static(&params(0.5, 0.0, 1.0), 256).unwrap();
        assert_eq!(top.value.abs(), 1);
        assert!(top.defect < 1e-10);
        assert!(top.max_step_phase < PI);
        assert_eq!(winding_bloch_static(&params(2.0, 0.0, 1.0), 256).unwrap().value, 0);
    }

    #[test]
    fn gbz_reduces_to_bz_without_gain() {
        for (w, v) in [(0.5, 1.0), (2.0, 1.0), (0.9, 1.3)] {
            let p = params(w, 0.0, v);
            let a = winding_gbz_static(&p, 200).unwrap();
            let b = winding_bloch_static(&p, 200).unwrap();
            assert_eq!(a.value, b.value);
            assert!((a.raw - b.raw).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_half_integer_between_exceptional_points() {
        // |t_R| < v < |t_L|: only one off-diagonal block winds
        let r = winding_bloch_static(&params(1.0, 1.5, 1.2), 400).unwrap();
        assert!((r.raw.abs() - 0.5).abs() < 1e-9);
        let g = winding_gbz_static(&params(1.0, 1.5, 1.2), 400).unwrap();
        assert_eq!(g.value.abs(), 1);
    }

    #[test]
    fn gap_closing_reported() {
        // t_R + v e^{ik} vanishes at k = π when v = t_R
        let p = params(1.0, 1.0, 0.5);
        match winding_bloch_static(&p, 64) {
            Err(Error::GapClosed { at, .. }) => assert!((at - PI).abs() < 1e-12),
            other => panic!("expected gap closing, got {other:?}"),
        }
    }

    #[test]
    fn gbz_requires_both_hoppings() {
        assert!(matches!(
            winding_gbz_static(&params(1.0, 2.0, 1.0), 64),
            Err(Error::InvalidParameter(_))
        ));
    }
}
