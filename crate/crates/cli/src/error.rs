use thiserror::Error;

/// Errors surfaced by the command-line front-end, each with an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] bjortho::Error),
}

impl CliError {
    /// `1` for failures of the mathematics (an uncertified solve), `2` for
    /// everything caused by the invocation or its inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(bjortho::Error::NotCertified(_)) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
