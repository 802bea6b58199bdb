use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{op} did not converge after {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },

    #[error("matrix is singular to working precision")]
    Singular,

    /// A determinant or Hamiltonian vanished on the sampling grid. This marks
    /// a phase boundary rather than a numerical fault.
    #[error("gap closed at parameter {at} (|value| = {magnitude:e})")]
    GapClosed { at: f64, magnitude: f64 },

    #[error("eigenvalue {re}{im:+}i lies on the logarithm branch cut")]
    BranchCut { re: f64, im: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("I/O error at {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
