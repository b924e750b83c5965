//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix dimensions do not match what an operation requires.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// A matrix required to be symmetric is not.
    #[error("matrix is not symmetric: max asymmetry {0:.3e}")]
    NotSymmetric(f64),

    /// A matrix required to be Hermitian is not.
    #[error("matrix violates hermiticity: max |A[i][j] - conj(A[j][i])| = {0:.3e}")]
    NotHermitian(f64),

    /// A density matrix whose trace deviates from one.
    #[error("density matrix violates unit trace: tr = {0}")]
    TraceNotOne(f64),

    /// A density matrix with an eigenvalue below the negativity tolerance.
    #[error("density matrix violates positivity: min eigenvalue = {0:.3e}")]
    NotPositiveSemidefinite(f64),

    /// A set of vectors required to be orthonormal is not.
    #[error("basis is not orthonormal: max Gram deviation {0:.3e}")]
    NotOrthonormal(f64),

    /// Bad argument value (out-of-range parameter, invalid distribution, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed state file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Internal numerical failure (e.g. eigensolver non-convergence).
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
