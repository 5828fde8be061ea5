use thiserror::Error;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("too many variables ({0}); at most {max} are supported", max = crate::ring::MAX_VARS)]
    TooManyVariables(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid centre: {0}")]
    InvalidCentre(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }

    pub fn pre(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
