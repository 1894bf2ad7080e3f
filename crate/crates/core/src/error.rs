use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed parameters or input documents.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A chain space larger than the configured cap was requested.
    #[error("resource limit exceeded: chain space of dimension {size} at degree {degree} exceeds cap {cap}")]
    Resource { degree: usize, size: u128, cap: u128 },

    #[error("algebra carries no weight grading")]
    NotGraded,

    #[error("algebra is not ACJ-shaped: {0}")]
    NotAcjShaped(String),

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    /// Consistency failure inside an algorithm, e.g. a negative multiplicity
    /// while peeling a character.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
