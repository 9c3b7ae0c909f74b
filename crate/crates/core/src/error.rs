use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// F_0 is undefined; callers branch on the zero set before asking for it.
    #[error("no support functional at the zero vector")]
    NoSupportFunctional,
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
    #[error("best approximation could not be certified: {0}")]
    NotCertified(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
