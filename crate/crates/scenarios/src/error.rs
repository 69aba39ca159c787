use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: rmpump::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T, E = ScenarioError> = std::result::Result<T, E>;

impl ScenarioError {
    /// Stable machine-readable category, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) | Self::Parse(_) => "config",
            Self::Core { source, .. } => match source {
                rmpump::Error::GapClosure { .. } => "gap_closure",
                rmpump::Error::StepTooLarge { .. } => "step_too_large",
                rmpump::Error::ContinuityFailure { .. } => "continuity_failure",
                _ => "core",
            },
            Self::Io { .. } => "io",
            Self::Csv { .. } => "csv",
            Self::Json(_) => "json",
            Self::Pool(_) => "pool",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => 2,
            _ => 1,
        }
    }
}

/// Attaches scenario context to a core error.
pub(crate) trait CoreContext<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T>;
}

impl<T> CoreContext<T> for rmpump::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| ScenarioError::Core { context: what(), source })
    }
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> ScenarioError {
    let path = path.into();
    move |source| ScenarioError::Io { path, source }
}
