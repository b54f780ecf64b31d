use std::path::PathBuf;

use multiport_core::Error as ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed command line: unknown command or flag.
    #[error("{0}")]
    Usage(String),

    /// A parameter failed validation for the selected command.
    #[error("{0}")]
    Schema(String),

    #[error("{source} ({path})")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] ModelError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema",
            CliError::Io { .. } => "io",
            CliError::Model(ModelError::Sizing { .. }) => "sizing",
            CliError::Model(ModelError::Config(_)) => "schema",
            CliError::Model(_) => "model",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "usage" => 2,
            "schema" => 3,
            "sizing" => 4,
            "io" => 5,
            _ => 1,
        }
    }

    /// One JSON object on one line.
    pub fn to_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "code": self.exit_code(),
            "message": self.to_string().replace('\n', " "),
        })
        .to_string()
    }
}

pub type CliResult<T> = Result<T, CliError>;
