use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inputs whose shapes do not fit together: lengths, arities, dimensions,
    /// non-bijective permutations and the like.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("arity mismatch for `{name}`: expected {expected}, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },

    /// A hyperbolic satellite with an unknotted companion slot is not a
    /// prime splice.
    #[error("reducible splice: {0}")]
    Reducible(String),

    #[error("tree is not in canonical form")]
    NotCanonical,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("catalogue error: {0}")]
    Catalogue(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}
