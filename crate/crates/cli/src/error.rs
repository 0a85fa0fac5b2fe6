use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ffstat::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Rejected configuration naming the offending flag.
    pub fn config(flag: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Config(format!("invalid --{flag}: {msg}"))
    }

    /// 2 for broken internal invariants, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_invariant_violation() => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
