//! Non-Hermitian Su–Schrieffer–Heeger chain.
//!
//! Sites are ordered `(a₁, b₁, a₂, b₂, …, a_L, b_L)` everywhere in the crate:
//! site `2l` is sublattice A of cell `l` (zero-based) and `2l + 1` is B.
//! The intra-cell hoppings are `t_L = w + γ/2` (B→A, stored at `(a, b)`) and
//! `t_R = w − γ/2` (A→B, stored at `(b, a)`); the inter-cell bond
//! `a_l ↔ b_{l−1}` is the Hermitian hopping `v`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64, ZERO};

/// Tolerance below which a chiral residual counts as symmetric.
pub const CHIRAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub w: f64,
    pub gamma: f64,
    /// Static inter-cell hopping. Driven evolutions take `v` from the
    /// [`DriveProtocol`] instead.
    pub v: f64,
    pub cells: usize,
    pub boundary: Boundary,
}

/// The reference chain: `w = 1`, `γ = 1.5`, `v = 1`, 25 open cells.
impl Default for ModelParams {
    fn default() -> Self {
        Self {
            w: 1.0,
            gamma: 1.5,
            v: 1.0,
            cells: 25,
            boundary: Boundary::Open,
        }
    }
}

impl ModelParams {
    pub fn new(w: f64, gamma: f64, v: f64, cells: usize, boundary: Boundary) -> Result<Self> {
        let p = Self {
            w,
            gamma,
            v,
            cells,
            boundary,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells < 1 {
            return Err(Error::InvalidParameter("cells must be at least 1".into()));
        }
        if ![self.w, self.gamma, self.v].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("model parameters must be finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn t_left(&self) -> f64 {
        self.w + 0.5 * self.gamma
    }

    #[inline]
    pub fn t_right(&self) -> f64 {
        self.w - 0.5 * self.gamma
    }

    pub fn dim(&self) -> usize {
        2 * self.cells
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells = cells;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_v(mut self, v: f64) -> Self {
        self.v = v;
        self
    }
}

/// Two-step drive: `v = f` for the first `t1` of every period, then `v = q f`
/// for the remaining `t2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveProtocol {
    pub f: f64,
    pub q: f64,
    pub t1: f64,
    pub t2: f64,
}

/// `f = 1`, `q = 2`, `T₁ = T₂ = 0.7`.
impl Default for DriveProtocol {
    fn default() -> Self {
        Self {
            f: 1.0,
            q: 2.0,
            t1: 0.7,
            t2: 0.7,
        }
    }
}

impl DriveProtocol {
    pub fn new(f: f64, q: f64, t1: f64, t2: f64) -> Result<Self> {
        let d = Self { f, q, t1, t2 };
        d.validate()?;
        Ok(d)
    }

    /// Durations may individually be zero (used to split a period), but the
    /// period itself must be positive.
    pub fn validate(&self) -> Result<()> {
        if !(self.t1 >= 0.0 && self.t2 >= 0.0 && self.period() > 0.0) {
            return Err(Error::InvalidParameter(
                "drive durations must be non-negative with a positive period".into(),
            ));
        }
        if !(self.f.is_finite() && self.q.is_finite()) {
            return Err(Error::InvalidParameter("drive amplitudes must be finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn period(&self) -> f64 {
        self.t1 + self.t2
    }

    pub fn first_hopping(&self) -> f64 {
        self.f
    }

    pub fn second_hopping(&self) -> f64 {
        self.q * self.f
    }

    /// Inter-cell hopping in effect at time `t`.
    pub fn segment(&self, t: f64) -> f64 {
        let period = self.period();
        let phase = t - (t / period).floor() * period;
        if phase < self.t1 {
            self.first_hopping()
        } else {
            self.second_hopping()
        }
    }
}

/// Non-Bloch Hamiltonian `h(β)` with `β = e^{ik}` on the Brillouin zone:
/// `[[0, t_L + v/β], [t_R + v β, 0]]`.
pub fn non_bloch_hamiltonian(beta: C64, params: &ModelParams) -> ComplexMatrix {
    let upper = C64::new(params.t_left(), 0.0) + params.v / beta;
    let lower = C64::new(params.t_right(), 0.0) + params.v * beta;
    ComplexMatrix::from_rows(&[vec![ZERO, upper], vec![lower, ZERO]])
}

/// `dh/dβ` of [`non_bloch_hamiltonian`].
pub fn non_bloch_hamiltonian_dbeta(beta: C64, params: &ModelParams) -> ComplexMatrix {
    let upper = -params.v / (beta * beta);
    let lower = C64::new(params.v, 0.0);
    ComplexMatrix::from_rows(&[vec![ZERO, upper], vec![lower, ZERO]])
}

/// Bloch Hamiltonian `d_x σ_x + (d_y + iγ/2) σ_y` with `d_x = w + v cos k`,
/// `d_y = v sin k`.
pub fn bloch_hamiltonian(k: f64, params: &ModelParams) -> ComplexMatrix {
    let dx = params.w + params.v * k.cos();
    let dy = params.v * k.sin();
    let g = 0.5 * params.gamma;
    ComplexMatrix::from_rows(&[vec![ZERO, C64::new(dx + g, -dy)], vec![C64::new(dx - g, dy), ZERO]])
}

/// Analytic `dH/dk`.
pub fn bloch_hamiltonian_dk(k: f64, params: &ModelParams) -> ComplexMatrix {
    let ddx = -params.v * k.sin();
    let ddy = params.v * k.cos();
    ComplexMatrix::from_rows(&[vec![ZERO, C64::new(ddx, -ddy)], vec![C64::new(ddx, ddy), ZERO]])
}

/// Real-space Hamiltonian with inter-cell hopping `v_value` (the `v` field of
/// `params` is ignored so drive segments can reuse the same params).
pub fn realspace_hamiltonian(params: &ModelParams, v_value: f64) -> Result<ComplexMatrix> {
    params.validate()?;
    let l = params.cells;
    let mut h = ComplexMatrix::zeros(2 * l, 2 * l);
    let tl = C64::new(params.t_left(), 0.0);
    let tr = C64::new(params.t_right(), 0.0);
    let v = C64::new(v_value, 0.0);
    for cell in 0..l {
        let (a, b) = (2 * cell, 2 * cell + 1);
        h[(a, b)] += tl;
        h[(b, a)] += tr;
        if cell > 0 {
            let b_prev = 2 * cell - 1;
            h[(a, b_prev)] += v;
            h[(b_prev, a)] += v;
        }
    }
    if params.boundary == Boundary::Periodic {
        let b_last = 2 * l - 1;
        // for L = 1 the wrap bond lands on the intra-cell entries
        h[(0, b_last)] += v;
        h[(b_last, 0)] += v;
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderRange {
    /// Every A site couples to every B site.
    #[default]
    AllPairs,
    /// Only the existing intra- and inter-cell bonds are perturbed.
    NearestNeighbor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub strength: f64,
    pub seed: u64,
    pub realization_index: u64,
    pub range: DisorderRange,
}

impl DisorderSpec {
    /// Random stream for this realization. ChaCha keyed by the master seed and
    /// using the realization index as stream id, so realizations can be drawn
    /// in any order.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.realization_index);
        rng
    }
}

/// Chiral perturbation `d (α_ij a†_i b_j + β_ji b†_j a_i)` with independent
/// `α, β ~ U[-0.5, 0.5]`. Only A–B entries are ever written.
pub fn sample_disorder(spec: &DisorderSpec, cells: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2 * cells, 2 * cells);
    if spec.strength == 0.0 {
        return m;
    }
    let mut rng = spec.rng();
    let d = spec.strength;
    let mut draw = || C64::new(d * rng.random_range(-0.5..=0.5), 0.0);
    for i in 0..cells {
        for j in 0..cells {
            let bonded = i == j || i == j + 1;
            if spec.range == DisorderRange::NearestNeighbor && !bonded {
                continue;
            }
            let (a, b) = (2 * i, 2 * j + 1);
            m[(a, b)] = draw();
            m[(b, a)] = draw();
        }
    }
    m
}

/// Real-space chiral operator: `+1` on A sites, `−1` on B sites.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralOperator {
    signs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralCheck {
    pub symmetric: bool,
    /// Max-norm of `Γ H Γ + H`.
    pub residual: f64,
}

impl ChiralOperator {
    pub fn new(cells: usize) -> Self {
        Self {
            signs: (0..2 * cells).map(|s| if s % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        }
    }

    /// Single-cell `σ_z`.
    pub fn sigma_z() -> Self {
        Self::new(1)
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.signs.iter().map(|&s| C64::new(s, 0.0)).collect();
        ComplexMatrix::from_diag(&d)
    }

    /// `Γ H Γ`.
    pub fn conjugate(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = h.ensure_square()?;
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "chiral conjugation",
                expected: self.dim(),
                found: n,
            });
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| {
            h[(i, j)] * (self.signs[i] * self.signs[j])
        }))
    }
}

pub fn chiral_conjugation_check(h: &ComplexMatrix, gamma: &ChiralOperator) -> Result<ChiralCheck> {
    let conj = gamma.conjugate(h)?;
    let residual = (&conj + h).norm_max();
    Ok(ChiralCheck {
        symmetric: residual < CHIRAL_TOL,
        residual,
    })
}

/// Momenta `2πj/L` compatible with an `L`-cell periodic chain.
pub fn allowed_momenta(cells: usize) -> Vec<f64> {
    (0..cells).map(|j| TAU * j as f64 / cells as f64).collect()
}
