use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation was applied to an object of the wrong kind (e.g. wrong basis family).
    #[error("usage error: {0}")]
    Usage(String),
    /// Off-diagonal kernels evaluated on the diagonal.
    #[error("singular input: kernel evaluated at x = y")]
    SingularInput,
    #[error("sampler error: {0}")]
    Sampler(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
