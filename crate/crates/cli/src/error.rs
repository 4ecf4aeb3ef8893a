use std::path::PathBuf;

use reflector_core::ReflectorError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("`{command}` needs {expected} target")]
    WrongTarget { command: &'static str, expected: &'static str },
    #[error(transparent)]
    Planner(#[from] ReflectorError),
}

impl CliError {
    /// Stable machine-readable code printed on failure.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Io { .. } => "io",
            Self::Parse { .. } => "scenario-parse",
            Self::Invalid { .. } => "scenario-invalid",
            Self::WrongTarget { .. } => "wrong-target",
            Self::Planner(e) => e.code(),
        }
    }

    /// Process exit status: 3 for planner failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Planner(_) => 3,
            _ => 1,
        }
    }
}
