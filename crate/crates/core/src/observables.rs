//! Eigenstate diagnostics: weighted inverse participation ratio, edge-mode
//! selection and cell-resolved weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::QuasienergySpectrum;
use crate::numerics::{vec_norm, C64, I};

/// Largest tolerated deviation of an input state's 2-norm from 1.
pub const NORM_TOL: f64 = 1e-6;

/// Fraction of cells at each end that counts as "edge".
pub const EDGE_FRACTION: f64 = 0.1;

/// Normalized eigenstates of a chain of `cells` unit cells.
#[derive(Debug, Clone)]
pub struct StateSet {
    pub cells: usize,
    pub energies: Vec<C64>,
    pub states: Vec<Vec<C64>>,
}

impl StateSet {
    pub fn new(cells: usize, energies: Vec<C64>, states: Vec<Vec<C64>>) -> Result<Self> {
        if energies.len() != states.len() {
            return Err(Error::DimensionMismatch {
                context: "energies per state",
                expected: states.len(),
                found: energies.len(),
            });
        }
        for (index, s) in states.iter().enumerate() {
            if s.len() != 2 * cells {
                return Err(Error::DimensionMismatch {
                    context: "state length",
                    expected: 2 * cells,
                    found: s.len(),
                });
            }
            let norm = vec_norm(s);
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized { index, norm });
            }
        }
        Ok(Self {
            cells,
            energies,
            states,
        })
    }

    pub fn from_spectrum(spectrum: &QuasienergySpectrum, cells: usize) -> Result<Self> {
        Self::new(cells, spectrum.energies.clone(), spectrum.vectors.columns())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Weight of each unit cell, `p_x = |ψ_{a_x}|² + |ψ_{b_x}|²`, normalized to
/// sum to one.
pub fn localization_profile(state: &[C64], cells: usize) -> Result<Vec<f64>> {
    if state.len() != 2 * cells {
        return Err(Error::DimensionMismatch {
            context: "state length",
            expected: 2 * cells,
            found: state.len(),
        });
    }
    let mut p: Vec<f64> = state.chunks(2).map(|c| c[0].norm_sqr() + c[1].norm_sqr()).collect();
    let total: f64 = p.iter().sum();
    if total == 0.0 {
        return Err(Error::NotNormalized { index: 0, norm: 0.0 });
    }
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}

/// `(1/2L) Σ_n Σ_x p_{n,x}² (x − L/2)` with `x = 1..L` the cell index.
///
/// Negative values mean weight piled up at the left end.
pub fn wipr(states: &StateSet) -> Result<f64> {
    let l = states.cells;
    let center = l as f64 / 2.0;
    let mut sum = 0.0;
    for s in &states.states {
        let p = localization_profile(s, l)?;
        sum += p
            .iter()
            .enumerate()
            .map(|(i, &px)| px * px * ((i + 1) as f64 - center))
            .sum::<f64>();
    }
    Ok(sum / (2 * l) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Zero,
    Pi,
}

impl ModeKind {
    /// Eigenvalue of `U` pinned by the mode: `+1` or `−1`.
    pub fn target(self) -> C64 {
        match self {
            ModeKind::Zero => C64::new(1.0, 0.0),
            ModeKind::Pi => C64::new(-1.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeMode {
    pub index: usize,
    pub energy: C64,
    pub edge: Edge,
    /// Weight in the outer cells of both ends together.
    pub edge_weight: f64,
}

/// Number of cells at each end treated as edge: `max(1, ⌈0.1 L⌉)`.
pub fn edge_cells(cells: usize) -> usize {
    ((EDGE_FRACTION * cells as f64).ceil() as usize).clamp(1, cells)
}

/// States whose Floquet eigenvalue `e^{−iE T}` lies within `energy_tol` of
/// `+1` (zero) or `−1` (pi) and whose weight in the outer cells is at least
/// `localization_min`.
pub fn classify_edge_modes(
    states: &StateSet,
    period: f64,
    mode: ModeKind,
    energy_tol: f64,
    localization_min: f64,
) -> Result<Vec<EdgeMode>> {
    let l = states.cells;
    let m = edge_cells(l);
    let mut out = Vec::new();
    for (index, (s, &energy)) in states.states.iter().zip(&states.energies).enumerate() {
        let lambda = (-I * energy * period).exp();
        if (lambda - mode.target()).norm() >= energy_tol {
            continue;
        }
        let p = localization_profile(s, l)?;
        let left: f64 = p[..m].iter().sum();
        let right: f64 = p[l - m..].iter().sum();
        // on very short chains the two ends cover every cell
        let edge_weight = if 2 * m >= l { 1.0 } else { left + right };
        if edge_weight >= localization_min {
            out.push(EdgeMode {
                index,
                energy,
                edge: if left >= right { Edge::Left } else { Edge::Right },
                edge_weight,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(cells: usize) -> Vec<C64> {
        vec![C64::new((1.0 / (2 * cells) as f64).sqrt(), 0.0); 2 * cells]
    }

    fn delta(cells: usize, site: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 2 * cells];
        v[site] = C64::new(1.0, 0.0);
        v
    }

    fn set(cells: usize, states: Vec<Vec<C64>>) -> StateSet {
        let e = vec![C64::new(0.0, 0.0); states.len()];
        StateSet::new(cells, e, states).unwrap()
    }

    #[test]
    fn profile_examples() {
        let p = localization_profile(&delta(5, 4), 5).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        let u = localization_profile(&uniform(8), 8).unwrap();
        assert!(u.iter().all(|&x| (x - 0.125).abs() < 1e-15));
        assert!(localization_profile(&uniform(3), 4).is_err());
    }

    #[test]
    fn wipr_uniform_and_delta() {
        for l in [4usize, 7, 25] {
            let s = set(l, vec![uniform(l); 2 * l]);
            assert!((wipr(&s).unwrap() - 1.0 / (2 * l) as f64).abs() < 1e-12);
            let d = set(l, vec![delta(l, 1); 2 * l]);
            assert!((wipr(&d).unwrap() - (1.0 - l as f64 / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let mut v = uniform(3);
        v[0] *= 2.0;
        let e = vec![C64::new(0.0, 0.0)];
        assert!(matches!(
            StateSet::new(3, e, vec![v]),
            Err(Error::NotNormalized { index: 0, .. })
        ));
    }

    #[test]
    fn uniform_states_are_not_edge_modes() {
        let s = set(10, vec![uniform(10); 20]);
        let zero = classify_edge_modes(&s, 1.0, ModeKind::Zero, 1e-6, 0.5).unwrap();
        assert!(zero.is_empty());
        // all pass the energy filter: with no localization requirement all come back
        assert_eq!(
            classify_edge_modes(&s, 1.0, ModeKind::Zero, 1e-6, 0.0).unwrap().len(),
            20
        );
        assert!(classify_edge_modes(&s, 1.0, ModeKind::Pi, 1e-6, 0.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn edge_side_reported() {
        let s = set(20, vec![delta(20, 1), delta(20, 38)]);
        let modes = classify_edge_modes(&s, 1.0, ModeKind::Zero, 1e-6, 0.9).unwrap();
        assert_eq!(modes.len(), 2);
        assert_eq!(modes[0].edge, Edge::Left);
        assert_eq!(modes[1].edge, Edge::Right);
        assert_eq!(edge_cells(20), 2);
        assert_eq!(edge_cells(25), 3);
        assert_eq!(edge_cells(3), 1);
    }
}
