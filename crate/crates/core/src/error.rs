//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the library. Variants map onto CLI exit codes via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left:?} vs {right:?}")]
    OrderMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("not a unit: constant term vanishes ({0})")]
    NotAUnit(String),
    #[error("composition undefined: inner series has nonzero constant term")]
    CompositionUndefined,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("no formal solution: inconsistent equation at order {order}")]
    NoFormalSolution { order: usize },
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("non-flat input: {0}")]
    NonFlat(String),
    #[error("no extension: {0}")]
    NoExtension(String),
    #[error("requires (T)-normalization first: {0}")]
    RequiresTNormalization(String),
    #[error("exact field: {0}")]
    ExactField(String),
    #[error("unfolding condition violated: {0}")]
    Unfolding(String),
    #[error("Birkhoff reduction failed at z-order {order}")]
    ReductionFailed { order: usize },
    #[error("degenerate deformation: {0}")]
    Degenerate(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    /// Process exit code: 2 for parse/i-o failures, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
