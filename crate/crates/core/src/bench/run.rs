use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use crate::datagen::{largest_component, GenKind, GenSpec};
use crate::kmedoids::{init_park, init_uniform, kmeds, trikmeds, KMedoidsResult, TrikmedsConfig, DEFAULT_MAX_ITERS};
use crate::metric::{
    brute_force_medoid, load_graph, load_vectors, Delimiter, EuclideanOracle, GraphOracle, GraphView, Metric,
    VectorDataset, WeightedGraph,
};
use crate::sampling::{rand_estimate, toprank, toprank2, TopRankParams};
use crate::trimed::{trimed, TrimedConfig};
use crate::{Error, Result};

use super::record::{RunRecord, SCHEMA_VERSION};

/// Where a dataset comes from. Displays as the `dataset` column and parses
/// back from it.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Generated(GenSpec),
    VectorFile {
        path: PathBuf,
        delimiter: Delimiter,
    },
    GraphFile {
        path: PathBuf,
        directed: bool,
        /// Keep only the largest (strongly) connected component.
        largest_component: bool,
    },
}

impl fmt::Display for DatasetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetSource::Generated(spec) => write!(f, "gen:{spec}"),
            DatasetSource::VectorFile { path, delimiter } => {
                let tag = match delimiter {
                    Delimiter::Comma => "vectors-csv",
                    Delimiter::Whitespace => "vectors",
                };
                write!(f, "{tag}:{}", path.display())
            }
            DatasetSource::GraphFile {
                path,
                directed,
                largest_component,
            } => {
                let tag = if *directed { "digraph" } else { "graph" };
                let lcc = if *largest_component { "-lcc" } else { "" };
                write!(f, "{tag}{lcc}:{}", path.display())
            }
        }
    }
}

impl FromStr for DatasetSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("dataset {s:?} has no `kind:` prefix")))?;
        let path = PathBuf::from(rest);
        let graph = |directed, largest_component| DatasetSource::GraphFile {
            path: path.clone(),
            directed,
            largest_component,
        };
        Ok(match tag {
            "gen" => DatasetSource::Generated(rest.parse()?),
            "vectors" => DatasetSource::VectorFile {
                path,
                delimiter: Delimiter::Whitespace,
            },
            "vectors-csv" => DatasetSource::VectorFile {
                path,
                delimiter: Delimiter::Comma,
            },
            "graph" => graph(false, false),
            "graph-lcc" => graph(false, true),
            "digraph" => graph(true, false),
            "digraph-lcc" => graph(true, true),
            other => return Err(Error::InvalidParameter(format!("unknown dataset kind {other:?}"))),
        })
    }
}

/// A loaded dataset.
#[derive(Debug, Clone)]
pub enum Dataset {
    Vectors(VectorDataset<f64>),
    Graph(WeightedGraph<f64>),
}

impl Dataset {
    pub fn load(source: &DatasetSource) -> Result<Self> {
        match source {
            DatasetSource::Generated(spec) if spec.kind == GenKind::SensorGraph => {
                Ok(Dataset::Graph(spec.graph::<f64>()?.graph))
            }
            DatasetSource::Generated(spec) => Ok(Dataset::Vectors(spec.vectors()?)),
            DatasetSource::VectorFile { path, delimiter } => Ok(Dataset::Vectors(load_vectors(path, *delimiter)?)),
            DatasetSource::GraphFile {
                path,
                directed,
                largest_component: lcc,
            } => {
                let g = load_graph(path, *directed)?;
                Ok(Dataset::Graph(if *lcc { largest_component(&g).0 } else { g }))
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Vectors(v) => v.n_points(),
            Dataset::Graph(g) => g.n_nodes(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            Dataset::Vectors(v) => v.dim(),
            Dataset::Graph(_) => 0,
        }
    }

    pub fn n_edges(&self) -> usize {
        match self {
            Dataset::Vectors(_) => 0,
            Dataset::Graph(g) => g.edges().len(),
        }
    }

    /// Runs `f` against a fresh counted oracle. Directed graphs are seen
    /// through the symmetrised view.
    pub fn with_metric<R>(&self, f: impl FnOnce(&dyn Metric<f64>) -> Result<R>) -> Result<R> {
        match self {
            Dataset::Vectors(v) => f(&EuclideanOracle::new(v)),
            Dataset::Graph(g) => {
                let view = if g.is_directed() {
                    GraphView::Symmetrized
                } else {
                    GraphView::Directed
                };
                f(&GraphOracle::new(g, view)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Trimed,
    Brute,
    Rand,
    Toprank,
    Toprank2,
    Kmeds,
    Trikmeds,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Trimed,
        Algorithm::Brute,
        Algorithm::Rand,
        Algorithm::Toprank,
        Algorithm::Toprank2,
        Algorithm::Kmeds,
        Algorithm::Trikmeds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Trimed => "trimed",
            Algorithm::Brute => "brute",
            Algorithm::Rand => "rand",
            Algorithm::Toprank => "toprank",
            Algorithm::Toprank2 => "toprank2",
            Algorithm::Kmeds => "kmeds",
            Algorithm::Trikmeds => "trikmeds",
        }
    }

    pub fn is_kmedoids(self) -> bool {
        matches!(self, Algorithm::Kmeds | Algorithm::Trikmeds)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    Uniform,
    Park,
}

impl InitMethod {
    pub fn name(self) -> &'static str {
        match self {
            InitMethod::Uniform => "uniform",
            InitMethod::Park => "park",
        }
    }
}

impl FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(InitMethod::Uniform),
            "park" => Ok(InitMethod::Park),
            _ => Err(Error::InvalidParameter(format!("unknown init method {s:?}"))),
        }
    }
}

/// Parameters for every algorithm; each run reads the ones it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoParams {
    pub trimed_epsilon: f64,
    /// TOPRANK / TOPRANK2 parameters; `anchor_constant` also sizes RAND.
    pub toprank: TopRankParams,
    pub clusters: usize,
    pub trikmeds_epsilon: f64,
    pub init: InitMethod,
    pub max_iters: usize,
}

impl Default for AlgoParams {
    fn default() -> Self {
        Self {
            trimed_epsilon: 0.0,
            toprank: TopRankParams::default(),
            clusters: 10,
            trikmeds_epsilon: 0.0,
            init: InitMethod::Uniform,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

/// The algorithm-independent part of a record.
fn base_record(
    source: &DatasetSource,
    data: &Dataset,
    algorithm: Algorithm,
    params: &AlgoParams,
    seed: u64,
) -> RunRecord {
    let kmed = algorithm.is_kmedoids();
    RunRecord {
        schema_version: SCHEMA_VERSION,
        algorithm: algorithm.name().into(),
        dataset: source.to_string(),
        n: data.len(),
        d: data.dim(),
        edges: data.n_edges(),
        seed,
        k: match algorithm {
            Algorithm::Toprank | Algorithm::Toprank2 => params.toprank.k,
            _ if kmed => params.clusters,
            _ => 1,
        },
        epsilon: match algorithm {
            Algorithm::Trimed => params.trimed_epsilon,
            Algorithm::Trikmeds => params.trikmeds_epsilon,
            _ => 0.0,
        },
        alpha_prime: params.toprank.alpha_prime,
        anchor_constant: params.toprank.anchor_constant,
        init: if kmed { params.init.name().into() } else { "-".into() },
        max_iters: if kmed { params.max_iters } else { 0 },
        n_computed: 0,
        distance_evals: 0,
        result: String::new(),
        objective: 0.0,
        nc_over_n2: 0.0,
        phi_c: None,
        phi_e: None,
        iterations: 0,
        wall_time: 0.0,
        status: "ok".into(),
    }
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
}

/// Runs one algorithm once and returns its record. Errors from the
/// algorithm itself are returned, not recorded.
pub fn run(
    source: &DatasetSource,
    data: &Dataset,
    algorithm: Algorithm,
    params: &AlgoParams,
    seed: u64,
) -> Result<RunRecord> {
    let mut rec = base_record(source, data, algorithm, params, seed);
    let n = data.len();
    let start = Instant::now();
    data.with_metric(|m| {
        match algorithm {
            Algorithm::Trimed | Algorithm::Brute => {
                let r = if algorithm == Algorithm::Trimed {
                    trimed(
                        m,
                        &TrimedConfig {
                            seed,
                            epsilon: params.trimed_epsilon,
                        },
                    )?
                } else {
                    brute_force_medoid(m)?
                };
                rec.n_computed = r.n_computed as u64;
                rec.distance_evals = r.distance_evals;
                rec.result = r.index.to_string();
                rec.objective = r.energy;
            }
            Algorithm::Rand => {
                let l = params.toprank.toprank_anchor_count(n);
                let est = rand_estimate(m, l, seed)?;
                let e = est.estimates();
                let (best, energy) =
                    e.iter()
                        .enumerate()
                        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
                rec.n_computed = est.n_anchors() as u64;
                rec.distance_evals = (est.n_anchors() * n) as u64;
                rec.result = best.to_string();
                rec.objective = energy;
            }
            Algorithm::Toprank | Algorithm::Toprank2 => {
                let r = if algorithm == Algorithm::Toprank {
                    toprank(m, &params.toprank, seed)?
                } else {
                    toprank2(m, &params.toprank, seed)?
                };
                rec.n_computed = r.n_computed as u64;
                rec.distance_evals = r.distance_evals;
                rec.result = join_ids(&r.top);
                rec.objective = r.energies[0];
                rec.iterations = r.rounds as u64;
            }
            Algorithm::Kmeds | Algorithm::Trikmeds => {
                let k = params.clusters;
                // initialisation cost is included (Park computes full rows)
                let before = m.counters().snapshot();
                let init = match params.init {
                    InitMethod::Uniform => init_uniform(n, k, seed)?,
                    InitMethod::Park => init_park(m, k)?,
                };
                let r: KMedoidsResult<f64> = if algorithm == Algorithm::Kmeds {
                    kmeds(m, &init, params.max_iters)?
                } else {
                    trikmeds(
                        m,
                        &init,
                        &TrikmedsConfig {
                            epsilon: params.trikmeds_epsilon,
                            max_iters: params.max_iters,
                        },
                    )?
                };
                let spent = m.counters().snapshot().since(before);
                rec.distance_evals = spent.evals;
                rec.n_computed = spent.rows;
                rec.result = join_ids(&r.medoids);
                rec.objective = r.objective;
                rec.iterations = r.iterations as u64;
            }
        }
        Ok(())
    })?;
    rec.wall_time = start.elapsed().as_secs_f64();
    rec.nc_over_n2 = rec.distance_evals as f64 / (n as f64 * n as f64);
    Ok(rec)
}

/// Runs a single-medoid algorithm.
pub fn run_medoid(
    source: &DatasetSource,
    data: &Dataset,
    algorithm: Algorithm,
    params: &AlgoParams,
    seed: u64,
) -> Result<RunRecord> {
    if algorithm.is_kmedoids() {
        return Err(Error::InvalidParameter(format!(
            "{algorithm} is not a medoid algorithm"
        )));
    }
    run(source, data, algorithm, params, seed)
}

/// Runs a K-medoids algorithm; with `with_baseline`, also runs its exact
/// counterpart (trikmeds with epsilon 0) and fills `phi_c` / `phi_e`.
pub fn run_kmedoids(
    source: &DatasetSource,
    data: &Dataset,
    algorithm: Algorithm,
    params: &AlgoParams,
    seed: u64,
    with_baseline: bool,
) -> Result<RunRecord> {
    if !algorithm.is_kmedoids() {
        return Err(Error::InvalidParameter(format!(
            "{algorithm} is not a K-medoids algorithm"
        )));
    }
    if params.clusters == 0 || params.clusters > data.len() {
        return Err(Error::InvalidParameter(format!(
            "K must be in 1..={}, got {}",
            data.len(),
            params.clusters
        )));
    }
    let mut rec = run(source, data, algorithm, params, seed)?;
    if with_baseline {
        if algorithm == Algorithm::Trikmeds && params.trikmeds_epsilon != 0.0 {
            let exact = AlgoParams {
                trikmeds_epsilon: 0.0,
                ..params.clone()
            };
            let base = run(source, data, Algorithm::Trikmeds, &exact, seed)?;
            rec.attach_baseline(&base);
        } else {
            let base = rec.clone();
            rec.attach_baseline(&base);
        }
    }
    Ok(rec)
}

/// Parameters recovered from a record's columns.
pub fn params_from_record(rec: &RunRecord) -> Result<(Algorithm, AlgoParams)> {
    let algorithm: Algorithm = rec.algorithm.parse()?;
    let mut params = AlgoParams::default();
    params.toprank.alpha_prime = rec.alpha_prime;
    params.toprank.anchor_constant = rec.anchor_constant;
    match algorithm {
        Algorithm::Toprank | Algorithm::Toprank2 => params.toprank.k = rec.k,
        Algorithm::Trimed => params.trimed_epsilon = rec.epsilon,
        Algorithm::Kmeds | Algorithm::Trikmeds => {
            params.clusters = rec.k;
            params.trikmeds_epsilon = rec.epsilon;
            params.init = rec.init.parse()?;
            params.max_iters = rec.max_iters;
        }
        _ => {}
    }
    Ok((algorithm, params))
}

/// Re-runs a record from its dataset, seed and parameters.
pub fn replay(rec: &RunRecord) -> Result<RunRecord> {
    let source: DatasetSource = rec.dataset.parse()?;
    let data = Dataset::load(&source)?;
    let (algorithm, params) = params_from_record(rec)?;
    run(&source, &data, algorithm, &params, rec.seed)
}
