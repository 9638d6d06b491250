use std::path::PathBuf;

/// Exit code for a failed verification.
pub const EXIT_FAILURE: u8 = 1;
/// Exit code for bad input or an undetermined group.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("group undetermined: {0}")]
    Undetermined(String),
    #[error(transparent)]
    Core(#[from] selfcup_core::Error),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed module description: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(selfcup_core::Error::Inconsistent(_)) => EXIT_FAILURE,
            _ => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
