use super::eig::eig_general;
use super::lu;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalues closer than this to the negative real axis make the principal
/// logarithm ambiguous.
pub const BRANCH_CUT_TOL: f64 = 1e-10;

/// Principal matrix logarithm through the eigendecomposition `A = V Λ V⁻¹`.
///
/// Eigenvalue phases are taken in `(-π, π]`. Non-diagonalizable input surfaces
/// as [`Error::Singular`] from the eigenvector inversion.
pub fn matrix_log_principal(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    let e = eig_general(a, true)?;
    for &lambda in &e.values {
        if lambda.norm() == 0.0 {
            return Err(Error::Singular);
        }
        if lambda.re < 0.0 && lambda.im.abs() <= BRANCH_CUT_TOL * lambda.norm().max(1.0) {
            return Err(Error::BranchCut {
                re: lambda.re,
                im: lambda.im,
            });
        }
    }
    let v = e.vectors.expect("requested eigenvectors");
    let v_inv = lu::inverse(&v)?;
    let logs: Vec<C64> = e.values.iter().map(|z| z.ln()).collect();
    let mut vl = v.clone();
    for i in 0..n {
        for (j, &l) in logs.iter().enumerate() {
            vl[(i, j)] *= l;
        }
    }
    Ok(&vl * &v_inv)
}
