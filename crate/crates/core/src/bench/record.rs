use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Version written in the first column of every record.
pub const SCHEMA_VERSION: u32 = 1;

/// One algorithm run. Serialised as one CSV line, columns in field order.
///
/// Fields that do not apply to an algorithm hold 0 (numbers) or `-`
/// (text). `phi_c` and `phi_e` are empty unless a baseline was paired.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub algorithm: String,
    /// Dataset source, e.g. `gen:uniform_cube n=1000 ...` or `vectors-csv:path`.
    pub dataset: String,
    pub n: usize,
    /// Point dimension; 0 for graphs.
    pub d: usize,
    /// Edge count; 0 for vectors.
    pub edges: usize,
    pub seed: u64,
    /// TOPRANK `k`, or the number of clusters.
    pub k: usize,
    pub epsilon: f64,
    pub alpha_prime: f64,
    pub anchor_constant: f64,
    pub init: String,
    pub max_iters: usize,
    pub n_computed: u64,
    pub distance_evals: u64,
    /// Result index, or `;`-separated ids (medoid per cluster, top-k).
    pub result: String,
    /// Energy of the result, or the clustering objective.
    pub objective: f64,
    /// `distance_evals / n^2`.
    pub nc_over_n2: f64,
    pub phi_c: Option<f64>,
    pub phi_e: Option<f64>,
    pub iterations: u64,
    pub wall_time: f64,
    /// `ok`, or `error: <message>`.
    pub status: String,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Result ids parsed back from the `result` column.
    pub fn result_ids(&self) -> Vec<usize> {
        self.result.split(';').filter_map(|s| s.trim().parse().ok()).collect()
    }

    /// Sets `phi_c` and `phi_e` relative to an exact counterpart run.
    pub fn attach_baseline(&mut self, baseline: &RunRecord) {
        self.phi_c = Some(ratio(self.distance_evals as f64, baseline.distance_evals as f64));
        self.phi_e = Some(ratio(self.objective, baseline.objective));
    }

    /// The parts of a record that a replay must reproduce exactly.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        self.n_computed == other.n_computed
            && self.distance_evals == other.distance_evals
            && self.result == other.result
            && self.objective.to_bits() == other.objective.to_bits()
            && self.iterations == other.iterations
            && self.status == other.status
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// Writes records with a header row.
pub fn write_records<W: Write>(writer: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(header())?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Appends records to a file, writing the header only when the file is new
/// or empty.
pub fn append_records(path: &Path, records: &[RunRecord]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    if fresh && records.is_empty() {
        w.write_record(header())?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

/// Reads records by column name; columns not in the schema are ignored.
pub fn read_records<R: Read>(reader: R) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for rec in r.deserialize() {
        let rec: RunRecord = rec?;
        if rec.schema_version > SCHEMA_VERSION {
            return Err(Error::InvalidDataset(format!(
                "record schema version {} is newer than supported version {SCHEMA_VERSION}",
                rec.schema_version
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn read_records_file(path: &Path) -> Result<Vec<RunRecord>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_records(file)
}

/// Column names in schema order.
pub fn header() -> &'static [&'static str] {
    &[
        "schema_version",
        "algorithm",
        "dataset",
        "n",
        "d",
        "edges",
        "seed",
        "k",
        "epsilon",
        "alpha_prime",
        "anchor_constant",
        "init",
        "max_iters",
        "n_computed",
        "distance_evals",
        "result",
        "objective",
        "nc_over_n2",
        "phi_c",
        "phi_e",
        "iterations",
        "wall_time",
        "status",
    ]
}
