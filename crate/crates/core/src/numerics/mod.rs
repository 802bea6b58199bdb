//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is written for matrices up to a few hundred rows and
//! favours accuracy over speed: Jacobi iterations for Hermitian and singular
//! value problems, Hessenberg QR for the general eigenproblem.

mod eig;
mod eigh;
mod expm;
mod logm;
mod lu;
mod matrix;
mod phase;
mod spectra;
mod svd;

pub use eig::{eig_general, eigvals, Eigen};
pub use eigh::{eigh, HermitianEigen};
pub use expm::expm;
pub use logm::{matrix_log_principal, BRANCH_CUT_TOL};
pub use lu::{det, inverse, solve, Lu};
pub use matrix::{dot_conj, normalize, vec_norm, ComplexMatrix, C64, I, ONE, ZERO};
pub use phase::{phase_unwind, PhaseUnwind, MAX_TRUSTED_STEP};
pub use spectra::multiset_distance;
pub use svd::{singular_values, svd, svd_full, SingularTriplet, Svd};
