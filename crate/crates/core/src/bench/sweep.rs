use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::datagen::GenSpec;
use crate::{Error, Result};

use super::record::RunRecord;
use super::run::{run, AlgoParams, Algorithm, Dataset, DatasetSource};

/// Dataset family swept over.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSource {
    /// `n` and `seed` of the template are replaced per cell.
    Generator(GenSpec),
    /// A fixed dataset; seeds vary only the algorithms.
    Input(DatasetSource),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub source: SweepSource,
    pub algorithms: Vec<Algorithm>,
    /// Dataset sizes, strictly increasing. For a fixed input, empty or its
    /// single size.
    pub n_grid: Vec<usize>,
    pub seeds: usize,
    /// Cell seeds are `base_seed, base_seed + 1, ...`.
    pub base_seed: u64,
    pub params: AlgoParams,
    /// Run cells on the rayon pool.
    pub parallel: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("sweep needs at least one algorithm".into()));
        }
        if self.seeds == 0 {
            return Err(Error::InvalidParameter("sweep needs at least one seed".into()));
        }
        match &self.source {
            SweepSource::Generator(_) if self.n_grid.is_empty() => {
                Err(Error::InvalidParameter("N grid is empty".into()))
            }
            SweepSource::Input(_) if self.n_grid.len() > 1 => Err(Error::InvalidParameter(
                "a fixed input admits at most one N value".into(),
            )),
            _ if self.n_grid.windows(2).any(|w| w[0] >= w[1]) => {
                Err(Error::InvalidParameter("N grid must be strictly increasing".into()))
            }
            _ if self.n_grid.first() == Some(&0) => Err(Error::InvalidParameter("N must be positive".into())),
            _ => Ok(()),
        }
    }
}

/// Mean cost of one algorithm at one size, over successful runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub runs: usize,
    pub failures: usize,
    pub mean_n_computed: f64,
    pub mean_distance_evals: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// In cell order: N, then seed, then algorithm as listed.
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
    /// Fitted log-log slope of mean `n_computed` against N per algorithm;
    /// `None` with fewer than two usable sizes.
    pub slopes: Vec<(Algorithm, Option<f64>)>,
}

fn failed(source: String, algorithm: Algorithm, n: usize, seed: u64, err: &Error) -> RunRecord {
    let mut r = RunRecord {
        schema_version: super::record::SCHEMA_VERSION,
        algorithm: algorithm.name().into(),
        dataset: source,
        n,
        d: 0,
        edges: 0,
        seed,
        k: 0,
        epsilon: 0.0,
        alpha_prime: 0.0,
        anchor_constant: 0.0,
        init: "-".into(),
        max_iters: 0,
        n_computed: 0,
        distance_evals: 0,
        result: String::new(),
        objective: 0.0,
        nc_over_n2: 0.0,
        phi_c: None,
        phi_e: None,
        iterations: 0,
        wall_time: 0.0,
        status: String::new(),
    };
    r.status = format!("error: {err}");
    r
}

fn run_cell(spec: &SweepSpec, n: Option<usize>, seed: u64) -> Vec<RunRecord> {
    let source = match &spec.source {
        SweepSource::Generator(t) => DatasetSource::Generated(GenSpec {
            n: n.unwrap_or(t.n),
            seed,
            ..t.clone()
        }),
        SweepSource::Input(s) => s.clone(),
    };
    let data = Dataset::load(&source).and_then(|d| match n {
        Some(n) if matches!(spec.source, SweepSource::Input(_)) && n != d.len() => Err(Error::InvalidParameter(
            format!("input has {} elements, N grid asks for {n}", d.len()),
        )),
        _ => Ok(d),
    });
    spec.algorithms
        .iter()
        .map(|&a| {
            let outcome = data
                .as_ref()
                .map_err(clone_err)
                .and_then(|d| run(&source, d, a, &spec.params, seed));
            outcome.unwrap_or_else(|e| {
                log::warn!("{a} on {source} failed: {e}");
                failed(source.to_string(), a, n.unwrap_or(0), seed, &e)
            })
        })
        .collect()
}

fn clone_err(e: &Error) -> Error {
    Error::InvalidDataset(e.to_string())
}

/// Runs every (N, seed, algorithm) cell. A failing cell yields a record
/// with an `error:` status and the sweep continues.
pub fn sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    let sizes: Vec<Option<usize>> = if spec.n_grid.is_empty() {
        vec![None]
    } else {
        spec.n_grid.iter().map(|&n| Some(n)).collect()
    };
    let cells: Vec<(Option<usize>, u64)> = sizes
        .iter()
        .flat_map(|&n| (0..spec.seeds as u64).map(move |s| (n, spec.base_seed.wrapping_add(s))))
        .collect();
    let per_cell: Vec<Vec<RunRecord>> = if spec.parallel {
        cells.par_iter().map(|&(n, s)| run_cell(spec, n, s)).collect()
    } else {
        cells.iter().map(|&(n, s)| run_cell(spec, n, s)).collect()
    };
    let records: Vec<RunRecord> = per_cell.into_iter().flatten().collect();
    let summary = summarise(&records);
    let slopes = spec
        .algorithms
        .iter()
        .map(|&a| {
            let pts: Vec<(f64, f64)> = summary
                .iter()
                .filter(|r| r.algorithm == a && r.runs > 0 && r.mean_n_computed > 0.0)
                .map(|r| (r.n as f64, r.mean_n_computed))
                .collect();
            (a, loglog_slope(&pts))
        })
        .collect();
    Ok(SweepOutcome {
        records,
        summary,
        slopes,
    })
}

/// Per (algorithm, N) means of successful records.
pub fn summarise(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(Algorithm, usize), (usize, usize, f64, f64)> = BTreeMap::new();
    for r in records {
        let Ok(a) = r.algorithm.parse::<Algorithm>() else {
            continue;
        };
        let g = groups.entry((a, r.n)).or_default();
        if r.is_ok() {
            g.0 += 1;
            g.2 += r.n_computed as f64;
            g.3 += r.distance_evals as f64;
        } else {
            g.1 += 1;
        }
    }
    groups
        .into_iter()
        .map(|((algorithm, n), (runs, failures, nc, ev))| {
            let div = runs.max(1) as f64;
            SummaryRow {
                algorithm,
                n,
                runs,
                failures,
                mean_n_computed: nc / div,
                mean_distance_evals: ev / div,
            }
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Aligned text table of the summary and slopes.
pub fn format_summary(outcome: &SweepOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>10} {:>5} {:>5} {:>16} {:>18}",
        "algorithm", "N", "runs", "fail", "mean_n_computed", "mean_dist_evals"
    );
    for r in &outcome.summary {
        let _ = writeln!(
            out,
            "{:<10} {:>10} {:>5} {:>5} {:>16.1} {:>18.1}",
            r.algorithm.name(),
            r.n,
            r.runs,
            r.failures,
            r.mean_n_computed,
            r.mean_distance_evals
        );
    }
    for (a, slope) in &outcome.slopes {
        match slope {
            Some(s) => {
                let _ = writeln!(out, "slope {:<10} {s:.3}", a.name());
            }
            None => {
                let _ = writeln!(out, "slope {:<10} n/a", a.name());
            }
        }
    }
    out
}
