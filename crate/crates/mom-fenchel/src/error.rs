//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building sets, partitioning data,
/// evaluating objectives, or running experiments.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix had the wrong dimension for the operation.
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// Block count violated a structural requirement (odd, divides N, ...).
    #[error("invalid block count K={k} for N={n}: {reason}")]
    InvalidBlockCount { k: usize, n: usize, reason: String },

    /// An operation that needs samples received none.
    #[error("empty data: {context}")]
    EmptyData { context: &'static str },

    /// A scalar or structural parameter was out of range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A covariance matrix failed the symmetry or eigenvalue checks.
    #[error("covariance is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e} below tolerance {tolerance:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tolerance: f64 },

    /// The power iteration for the top eigenvalue stalled.
    #[error("power method did not converge within {iterations} iterations; last estimate {last_estimate:.6e}")]
    PowerMethodDiverged {
        iterations: usize,
        last_estimate: f64,
    },

    /// The symmetric set does not span the ambient space but the operation
    /// needs a genuine norm.
    #[error("degenerate span: the symmetric set spans a strict subspace of dimension < {ambient}")]
    DegenerateSpan { ambient: usize },

    /// A brute-force oracle was asked for a dimension it cannot enumerate.
    #[error("oracle supports dimension <= {max}, got {dim}")]
    UnsupportedDimension { dim: usize, max: usize },

    /// Configuration file contents were inconsistent or incomplete.
    #[error("config error: {0}")]
    Config(String),

    /// Dataset file contents could not be parsed.
    #[error("dataset format error at line {line}: {reason}")]
    DatasetFormat { line: usize, reason: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
