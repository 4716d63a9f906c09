use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("missing artifact {}: run `sectorfolio {command}` first", path.display())]
    MissingArtifact { path: PathBuf, command: &'static str },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Artifact {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Core(#[from] sectorfolio::Error),
}

impl CliError {
    /// Process exit status: 1 usage/config, 2 data, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::MissingArtifact { .. } => 1,
            CliError::Core(e) if e.is_numeric() => 3,
            CliError::Core(sectorfolio::Error::Argument(_)) => 1,
            CliError::Io { .. } | CliError::Artifact { .. } | CliError::Core(_) => 2,
        }
    }
}
