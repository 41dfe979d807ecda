//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by construction, factorization and iteration routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two operands (matrix/vector) have incompatible dimensions.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A square matrix was required.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    /// An entry fails the exact symmetry check `a[i][j] == a[j][i]`.
    #[error("matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },

    /// Cholesky-style certification failed: a pivot was not strictly positive.
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// A matrix or vector contains a NaN or infinite entry.
    #[error("input contains a non-finite entry")]
    NonFinite,

    /// LU elimination met a pivot below the singularity threshold.
    #[error("matrix is numerically singular (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    /// A block partition does not split `0..n` into contiguous blocks.
    #[error("invalid block partition: {reason}")]
    InvalidPartition { reason: String },

    /// A diagonal block of a block splitting could not be factorized.
    #[error("diagonal block {index} is singular")]
    SingularBlock { index: usize },

    /// A stepsize that must be positive was not.
    #[error("stepsize must be positive, got {0}")]
    InvalidStepsize(f64),

    /// A scalar parameter lies outside its admissible interval.
    #[error("{what} = {value} is out of range ({range})")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A scheme was paired with a preconditioner it does not support.
    #[error("incompatible preconditioner: {0}")]
    IncompatiblePreconditioner(&'static str),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
