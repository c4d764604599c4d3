//! Configuration files, subcommand dispatch and reproducible CSV/JSON export.

mod config;
mod run;
pub mod tables;

use std::fmt;
use std::path::{Path, PathBuf};

pub use config::{
    parse_config, BindingSpec, Command, EnergeticsConfig, ExtrapolateConfig, LevelsConfig, PowerSeriesConfig, RunConfig,
    StateRef,
};
pub use run::{execute, run, RunOutput, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION};

/// Invalid configuration or input table, located by file, field path and line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: PathBuf,
    pub field_path: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub(crate) fn file(file: &Path, message: impl Into<String>) -> Self {
        Self {
            file: file.to_path_buf(),
            field_path: None,
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn at_line(mut self, line: Option<usize>) -> Self {
        self.line = line;
        self
    }

    pub(crate) fn at_field(mut self, path: impl Into<String>) -> Self {
        let p = path.into();
        self.field_path = (!p.is_empty()).then_some(p);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file.display())?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        if let Some(path) = &self.field_path {
            write!(f, ": field `{path}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Model(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}
