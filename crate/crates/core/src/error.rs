use thiserror::Error;

/// Errors raised by the algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands that cannot be combined (different variable tables, unknown
    /// variables, non-homogeneous input where homogeneity is required).
    #[error("structural error: {0}")]
    Structural(String),
    /// A caller-supplied parameter is out of range or inconsistent.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An expression could not be parsed.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    /// A computed object failed one of its mathematical consistency checks.
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
