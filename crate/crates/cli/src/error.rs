use std::path::PathBuf;

use lapspread::error::{GraphError, OracleError, ScanError};
use thiserror::Error;

/// Failures that stop a command before any check runs. All map to exit
/// status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Graph { path: PathBuf, source: GraphError },
    #[error("{}: line {line}: {source}", path.display())]
    Corpus {
        path: PathBuf,
        line: usize,
        source: GraphError,
    },
    #[error("{}: {source}", path.display())]
    Certificate {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("unsupported certificate schema version {0}")]
    SchemaVersion(u32),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error("{0}")]
    Usage(String),
}
