use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] mucs::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 usage or schema, 3 I/O, 4 numeric precondition.
    pub fn exit_code(&self) -> u8 {
        use mucs::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                E::Schema { .. }
                | E::Arity(_)
                | E::Index(_)
                | E::PairSet(_)
                | E::Parameter(_)
                | E::Dimension(_)
                | E::Mode(_) => 2,
                E::Hermiticity(_) | E::Normalization(_) | E::Positivity(_) | E::Purity(_) | E::Truncation(_) => 4,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
