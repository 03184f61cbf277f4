//! Error type shared by all modules, with the CLI exit-code mapping.

use std::path::PathBuf;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input rows do not form a square matrix.
    #[error("matrix is not square: {rows} rows but row {row} has {cols} entries")]
    NonSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    /// Entry buffer does not match the requested dimensions.
    #[error("entry count {found} does not match the {rows}x{cols} shape")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    /// A row sum deviates from 1 beyond the validation tolerance.
    #[error("row {row} sums to {sum} which is more than {tol} away from 1")]
    RowSumViolation { row: usize, sum: f64, tol: f64 },

    /// An entry is negative beyond the validation tolerance.
    #[error("entry ({row},{col}) = {value} is below -{tol}")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: f64,
        tol: f64,
    },

    /// A matrix or vector entry is NaN or infinite.
    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    /// The given state set is not a closed, strongly connected class.
    #[error("state set is not a recurrent class (strongly connected and closed)")]
    NotAClass,

    /// Face enumeration requested for a matrix beyond the exhaustive limit.
    #[error("face enumeration is exhaustive and limited to n <= {max_n}, got n = {n}")]
    TooLarge { n: usize, max_n: usize },

    /// Repeated squaring did not reach the requested projection tolerance.
    #[error(
        "projection squaring did not converge within {max_squarings} squarings \
         (last residual {residual}); the spectral gap is below the resolvable threshold"
    )]
    NoConvergence { max_squarings: usize, residual: f64 },

    /// Linear decoherence-time scan exhausted its step budget.
    #[error("transient norm stayed above epsilon for all t <= {t_max}")]
    Timeout { t_max: usize },

    /// Detected projection rank disagrees with the structural prediction.
    #[error("projection rank {detected} does not match the sum of class periods {expected}")]
    RankMismatch { detected: usize, expected: usize },

    /// A vector that must lie in the persistent subspace is not fixed by P.
    #[error("vector is not fixed by the projection (residual {residual}, tolerance {tol})")]
    NotInRange { residual: f64, tol: f64 },

    /// The given eigenvalue is not a predicted peripheral value.
    #[error("{re}{im:+}i is not a predicted peripheral eigenvalue")]
    NotPeripheral { re: f64, im: f64 },

    /// The cyclic-class indicator construction failed its runtime verification.
    #[error("minimal idempotent construction failed verification (max residual {residual})")]
    IdempotentVerificationFailed { residual: f64 },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    /// CLI exit code for the error family: 2 input, 3 no-convergence, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonSquare { .. }
            | Error::ShapeMismatch { .. }
            | Error::RowSumViolation { .. }
            | Error::NegativeEntry { .. }
            | Error::NonFinite { .. }
            | Error::TooLarge { .. }
            | Error::Io { .. }
            | Error::Parse { .. } => 2,
            Error::NoConvergence { .. } | Error::Timeout { .. } => 3,
            Error::NotAClass
            | Error::RankMismatch { .. }
            | Error::NotInRange { .. }
            | Error::NotPeripheral { .. }
            | Error::IdempotentVerificationFailed { .. } => 4,
        }
    }
}
