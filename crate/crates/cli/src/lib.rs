//! Command-line surface for the SCIRS model: parameter files, analyses,
//! simulations and plot-ready output.

pub mod commands;
pub mod config;
pub mod output;

use scirs::Error as CoreError;

/// Process exit status for a run that completed.
pub const EXIT_OK: i32 = 0;
/// Malformed or invalid input.
pub const EXIT_CONFIG: i32 = 2;
/// Non-finite state or failed internal check.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERIC,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. } | CoreError::InvalidConfig(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
