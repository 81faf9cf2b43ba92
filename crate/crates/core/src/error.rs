use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: file contains no data")]
    EmptyInput { path: PathBuf },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("graph is not connected: no path from node {from} to node {to}")]
    Disconnected { from: usize, to: usize },
    #[error("node {target} is unreachable from node {source_node}")]
    Unreachable { source_node: usize, target: usize },
    #[error("empty input set")]
    EmptySet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "sensor graph with n={n} and radius constant {radius_const} not connected after {attempts} \
         attempts; try a larger radius constant"
    )]
    ConnectivityNotAchieved {
        n: usize,
        radius_const: f64,
        attempts: usize,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
