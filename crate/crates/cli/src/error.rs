use thiserror::Error;

/// Failure of a command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation or unreadable input (exit 2).
    #[error("{0}")]
    Usage(String),
    /// The input is well formed but the computation rejects it (exit 1).
    #[error(transparent)]
    Domain(#[from] poisson3::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}
