//! Scenario harness around `swarm-core`: scenario construction (tunnel,
//! funnel, open field), experiment sweeps, plain-text configuration, and
//! trace/summary/frame emission.

pub mod config;
pub mod io;
pub mod scenario;
pub mod sweep;

use std::path::PathBuf;

/// Harness-level failure. `exit_code` fixes the CLI contract: 1 for
/// configuration problems, 2 for numeric divergence.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] swarm_core::Error),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(swarm_core::Error::NumericDivergence { .. }) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
