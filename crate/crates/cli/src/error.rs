use std::path::PathBuf;

use fourfold::{GeomError, SpecError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 1 for failed verification, 2 for bad input, 3 for numerical or
    /// domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Input(_) | CliError::Io { .. } | CliError::Spec(_) => 2,
            CliError::Geom(_) => 3,
        }
    }
}
