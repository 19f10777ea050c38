//! Batch front end for `cohdetect`: state and ensemble files, reports,
//! parameter sweeps and generated artifacts.

use std::path::PathBuf;

use cohdetect::criteria::CriteriaError;
use cohdetect::ggm::GgmError;
use cohdetect::states::StateError;
use cohdetect::tripartite::TripartiteError;
use thiserror::Error;

pub mod analyze;
pub mod files;
pub mod generate;
pub mod scan;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unknown criterion '{0}'")]
    UnknownCriterion(String),
    #[error("bad dims '{0}': {1}")]
    BadDims(String, String),
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Tripartite(#[from] TripartiteError),
    #[error(transparent)]
    Ggm(#[from] GgmError),
}
