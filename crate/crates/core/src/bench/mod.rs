//! Benchmark harness: single runs, seeded sweeps and CSV records.

mod record;
mod run;
mod sweep;

pub use record::{append_records, header, read_records, read_records_file, write_records, RunRecord, SCHEMA_VERSION};
pub use run::{
    params_from_record, replay, run, run_kmedoids, run_medoid, AlgoParams, Algorithm, Dataset, DatasetSource,
    InitMethod,
};
pub use sweep::{format_summary, loglog_slope, summarise, sweep, SummaryRow, SweepOutcome, SweepSource, SweepSpec};
