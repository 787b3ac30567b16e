use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds a hard size guard (exact computations only run at desk scale).
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),

    /// A search finished without a verified answer.
    #[error("not found: {0}")]
    NotFound(String),

    /// An algorithm reached a state its guarantees rule out for valid inputs.
    #[error("diagnostic: {0}")]
    Diagnostic(String),

    /// An internal consistency assertion of an instance constructor failed.
    #[error("construction bug: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn scale(msg: impl Into<String>) -> Error {
    Error::UnsupportedScale(msg.into())
}
