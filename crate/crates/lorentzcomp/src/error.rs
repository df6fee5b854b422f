use thiserror::Error;

/// Errors raised by geometric constructions and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid chart point: {0}")]
    InvalidPoint(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("non-realizable configuration: {0}")]
    NonRealizable(String),
    #[error("undefined angle: {0}")]
    UndefinedAngle(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
