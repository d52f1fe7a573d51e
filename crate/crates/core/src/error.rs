use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("operands belong to different fields")]
    MixedFields,

    #[error("division by zero")]
    DivisionByZero,

    #[error("function has a pole at {0}; expand its reciprocal instead")]
    PoleAtPlace(String),

    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: {requested} exceeds the limit {limit}")]
    GuardExceeded {
        what: &'static str,
        requested: String,
        limit: String,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn guard(what: &'static str, requested: impl ToString, limit: impl ToString) -> Self {
        Error::GuardExceeded {
            what,
            requested: requested.to_string(),
            limit: limit.to_string(),
        }
    }

    /// True for errors that signal a broken mathematical guarantee rather than bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(self, Error::Verification(_))
    }
}
