use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed quantity violated an identity that must hold; always a bug.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// A congruence or identity being verified does not hold.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("continued fraction expansion exceeded {0} steps without repeating")]
    StepLimit(usize),

    #[error("no suitable representative found with |x|, |y| <= {0}")]
    SearchBound(i64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn consistency(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}
