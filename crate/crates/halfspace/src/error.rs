use std::path::PathBuf;

use halfspace_core::Error as CoreError;

pub type Result<T> = std::result::Result<T, CliError>;

/// Everything a command can fail with, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{failed} of {total} verification reports failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 configuration, 3 evaluation domain,
    /// 4 quadrature failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Config(_) | CliError::Io { .. } | CliError::Csv { .. } | CliError::Json { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidSpec(_) | CoreError::Unsupported(_) => 2,
                CoreError::Quadrature { .. } => 4,
                CoreError::Domain(_)
                | CoreError::DeltaLayerPresent
                | CoreError::OnConeSingularity
                | CoreError::MissingTime
                | CoreError::SupportTouchesZero => 3,
            },
        }
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
