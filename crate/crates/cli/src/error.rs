use thiserror::Error;

/// Failures that end a command; `Usage` maps to exit 2, the rest to exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Eval(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Eval(_) | CliError::Io(_) => 3,
        }
    }

    /// Bad inputs are usage errors; anything else came from evaluation.
    pub fn from_core(err: cmkit::Error) -> Self {
        match err {
            cmkit::Error::InvalidIndex { .. } | cmkit::Error::InvalidConfig(_) => CliError::Usage(err.to_string()),
            other => CliError::Eval(other.to_string()),
        }
    }

    pub fn usage(err: cmkit::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
