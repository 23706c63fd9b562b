use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: precondition/input problems
/// ([`Error::is_input_error`]) and numerical failures (contour or root
/// finding that did not converge).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {dim} (maximum {max})")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("spectrum is not centrally symmetric")]
    NotSymmetric,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numeric(_))
    }

    /// Short machine-readable tag used in structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Empty(_) => "empty",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::UnsupportedDimension { .. } => "unsupported_dimension",
            Error::NotSymmetric => "not_symmetric",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Degenerate(_) => "degenerate",
            Error::Parse { .. } => "parse",
            Error::Numeric(_) => "numeric",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
