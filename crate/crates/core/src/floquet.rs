//! One-period evolution operators of the two-step drive and the quantities
//! derived from them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::{bloch_hamiltonian, realspace_hamiltonian, Boundary, DriveProtocol, ModelParams};
use crate::numerics::{eig_general, expm, matrix_log_principal, ComplexMatrix, C64, I};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    Bloch { k: f64 },
    Real { cells: usize, boundary: Boundary },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetOperator {
    pub matrix: ComplexMatrix,
    pub period: f64,
    pub space: Space,
}

impl FloquetOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Unit cells spanned by the operator (1 for Bloch operators).
    pub fn cells(&self) -> usize {
        match self.space {
            Space::Bloch { .. } => 1,
            Space::Real { cells, .. } => cells,
        }
    }
}

/// `e^{-i H T₂} e^{-i H T₁}` for the two segment Hamiltonians; the later
/// segment acts on the left.
fn two_step(h1: &ComplexMatrix, h2: &ComplexMatrix, drive: &DriveProtocol) -> Result<ComplexMatrix> {
    let u1 = expm(&h1.scale(-I * drive.t1))?;
    let u2 = expm(&h2.scale(-I * drive.t2))?;
    u2.matmul(&u1)
}

pub fn bloch_evolution(k: f64, params: &ModelParams, drive: &DriveProtocol) -> Result<FloquetOperator> {
    drive.validate()?;
    let h1 = bloch_hamiltonian(k, &params.with_v(drive.first_hopping()));
    let h2 = bloch_hamiltonian(k, &params.with_v(drive.second_hopping()));
    Ok(FloquetOperator {
        matrix: two_step(&h1, &h2, drive)?,
        period: drive.period(),
        space: Space::Bloch { k },
    })
}

/// Real-space Floquet operator. A static disorder matrix, when given, is added
/// to both segment Hamiltonians.
pub fn realspace_evolution(
    params: &ModelParams,
    drive: &DriveProtocol,
    disorder: Option<&ComplexMatrix>,
) -> Result<FloquetOperator> {
    drive.validate()?;
    let mut h1 = realspace_hamiltonian(params, drive.first_hopping())?;
    let mut h2 = realspace_hamiltonian(params, drive.second_hopping())?;
    if let Some(dh) = disorder {
        if dh.rows() != h1.rows() || dh.cols() != h1.cols() {
            return Err(Error::DimensionMismatch {
                context: "disorder matrix",
                expected: h1.rows(),
                found: dh.rows(),
            });
        }
        h1 = &h1 + dh;
        h2 = &h2 + dh;
    }
    Ok(FloquetOperator {
        matrix: two_step(&h1, &h2, drive)?,
        period: drive.period(),
        space: Space::Real {
            cells: params.cells,
            boundary: params.boundary,
        },
    })
}

#[derive(Debug, Clone)]
pub struct QuasienergySpectrum {
    pub period: f64,
    /// Complex quasienergies with `Re E ∈ (−π/T, π/T]`.
    pub energies: Vec<C64>,
    /// Unit-norm right eigenvectors; column `n` belongs to `energies[n]`.
    pub vectors: ComplexMatrix,
}

/// Maps an eigenvalue `λ = e^{−iET}` to `E = (i/T) ln λ` on the first
/// quasienergy zone, assigning the zone edge to `+π/T`.
pub fn quasienergy_of(lambda: C64, period: f64) -> C64 {
    let mut re = -lambda.arg() / period;
    let im = lambda.norm().ln() / period;
    if re <= -PI / period {
        re += 2.0 * PI / period;
    }
    C64::new(re, im)
}

pub fn quasienergies(u: &FloquetOperator) -> Result<QuasienergySpectrum> {
    let e = eig_general(&u.matrix, true)?;
    let energies = e
        .values
        .iter()
        .map(|&lambda| quasienergy_of(lambda, u.period))
        .collect();
    Ok(QuasienergySpectrum {
        period: u.period,
        energies,
        vectors: e.vectors.expect("requested eigenvectors"),
    })
}

/// `H_eff = (i/T) ln U` on the principal branch.
pub fn effective_hamiltonian(u: &FloquetOperator) -> Result<ComplexMatrix> {
    let log = matrix_log_principal(&u.matrix)?;
    Ok(log.scale(I / u.period))
}
