//! Scenario runner: parses sweep files, drives the analytic, Fock-space and
//! Monte Carlo engines, and writes CSV tables.

pub mod builtin;
pub mod format;
pub mod kinds;
pub mod runner;
pub mod scenario;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use format::{Cell, Table};
pub use runner::{output_path, prepare, PreparedRun, RunOptions};
pub use scenario::{Engine, Kind, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("unknown parameter `{key}` for kind `{kind}`")]
    UnknownKey { key: String, kind: &'static str },
    #[error("{}`{key}` = `{value}`: expected {expected}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Type {
        key: String,
        value: String,
        expected: String,
        line: Option<usize>,
    },
    #[error("sweep grid for `{0}` is empty")]
    EmptyGrid(String),
    #[error("`{0}` cannot be swept")]
    NotSweepable(String),
    #[error("grid point {point}: {message}")]
    Invalid { point: usize, message: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("`{0}` is neither a scenario file nor a built-in (see `muxsim list`)")]
    NotFound(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Reads `target` as a file if one exists, else as a built-in name.
pub fn load_scenario(target: &str) -> Result<Scenario, CliError> {
    let path = Path::new(target);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        return Ok(Scenario::parse(&text)?);
    }
    match builtin::find(target) {
        Some(b) => Ok(Scenario::parse(b.source)?),
        None => Err(CliError::NotFound(target.to_string())),
    }
}

/// Summary of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub path: PathBuf,
    pub rows: usize,
    pub seed: u64,
}

/// Validates, computes and writes. No file is created unless every point
/// validated and computed.
pub fn run_to_file(
    scenario: &Scenario,
    options: &RunOptions,
    path: &Path,
) -> Result<RunReport, CliError> {
    let prepared = prepare(scenario, options)?;
    let table = prepared.execute()?;
    fs::write(path, table.to_csv()).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(RunReport {
        path: path.to_path_buf(),
        rows: table.rows.len(),
        seed: prepared.seed,
    })
}
