use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Module(#[from] wavescatter::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Usage(e) => e.exit_code().clamp(0, 255) as u8,
            CliError::Module(_) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub type Result<T> = std::result::Result<T, CliError>;
