use thiserror::Error;

use crate::pcm::ValidationReport;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document; `location` pinpoints the offending line or field.
    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid scale assignment: {0}")]
    InvalidScale(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The comparison matrix failed structural validation.
    #[error("invalid pairwise comparison matrix: {0}")]
    InvalidPcm(ValidationReport),

    /// Power iteration ran out of iterations; `last` holds the final iterate.
    #[error("power iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize, last: Vec<f64> },

    #[error("no random index entry for dimension {n}")]
    MissingRandomIndex { n: usize },

    #[error("PCM uses {used} distinct grades above indifference; grid enumeration supports at most {max}")]
    TooManyGrades { used: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
