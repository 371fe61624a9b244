use std::path::Path;

use longwave_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input {path}: {reason}")]
    Input { path: String, reason: String },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for bad configuration or input, 3 for a numerical blow-up, 4 for
    /// file-system failures, 1 for anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Core(CoreError::InvalidParameter { .. } | CoreError::Domain(_)) => 2,
            CliError::Core(CoreError::BlowUp { .. }) => 3,
            CliError::Io { .. } => 4,
            CliError::Core(_) => 1,
        }
    }
}
