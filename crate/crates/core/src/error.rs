//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong shape, non-finite entries, zero vectors, bad
    /// tolerances, or a non-bijective pairing.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation that requires full numerical rank met a (near-)singular
    /// matrix.
    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    /// The two inputs do not carry compatible eigenvalue/Jordan/GK structure.
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    /// A close-chain construction degenerated (projection collapsed or the
    /// descent died early).
    #[error("chain construction failure: {0}")]
    ChainConstruction(String),

    /// Structure detection hit a decision the tolerance cannot support
    /// (e.g. a rank cutoff with no usable singular-value gap).
    #[error("ill-conditioned structure: {0}")]
    IllConditioned(String),

    /// An iterative kernel did not converge.
    #[error("numerical failure after {iterations} iterations: {message}")]
    NumericalFailure { iterations: usize, message: String },

    /// The operation is only provided for small dimensions.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// Too many trials of an experiment failed to produce usable points.
    #[error("experiment failed: {0}")]
    ExperimentFailed(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Unparseable matrix/basis file.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the CLI: 2 invalid input, 3 structure
    /// mismatch, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Parse(_) | Error::Io(_) | Error::UnsupportedSize(_) => 2,
            Error::StructureMismatch(_) | Error::ChainConstruction(_) | Error::IllConditioned(_) => 3,
            Error::RankDeficient(_) | Error::NumericalFailure { .. } | Error::ExperimentFailed(_) => 4,
        }
    }
}
