use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use medoids::bench::{
    append_records, format_summary, run_kmedoids, run_medoid, sweep, write_records, AlgoParams, Algorithm, Dataset,
    DatasetSource, InitMethod, RunRecord, SweepSource, SweepSpec,
};
use medoids::datagen::{
    write_edge_list, write_meta, write_vectors, GenKind, GenSpec, SENSOR_RADIUS_DIRECTED, SENSOR_RADIUS_UNDIRECTED,
    SKEW_P_KEEP_DEFAULT, SKEW_P_KEEP_INNER_MASS_1_200,
};
use medoids::kmedoids::DEFAULT_MAX_ITERS;
use medoids::metric::Delimiter;
use medoids::sampling::TopRankParams;

/// Medoid and K-medoids computation with distance-evaluation accounting.
#[derive(Parser, Debug)]
#[command(name = "medoids", version)]
struct Cli {
    /// Seed for data generation and randomised algorithms.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file: the dataset for `gen`, a CSV of records otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset and a `.meta` sidecar.
    Gen(GenArgs),
    /// Compute a medoid (or top-k lowest-energy elements).
    Medoid(MedoidArgs),
    /// Run K-medoids clustering.
    Kmedoids(KmedoidsArgs),
    /// Run algorithms over a grid of sizes and seeds.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum KindArg {
    #[value(alias = "uniform-cube")]
    UniformCube,
    #[value(alias = "ball-uniform")]
    BallUniform,
    #[value(alias = "ball-skewed")]
    BallSkewed,
    #[value(alias = "sensor-graph")]
    SensorGraph,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::UniformCube => GenKind::UniformCube,
            KindArg::BallUniform => GenKind::BallUniform,
            KindArg::BallSkewed => GenKind::BallSkewed,
            KindArg::SensorGraph => GenKind::SensorGraph,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SkewPreset {
    /// Inner density 19 times lower than outer (keep probability 0.1).
    Ratio19,
    /// 1/200 of the mass inside the inner ball (keep probability 0.01).
    InnerMass200,
}

#[derive(Args, Debug, Clone)]
struct GeneratorArgs {
    #[arg(long, value_enum, default_value = "uniform-cube")]
    kind: KindArg,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long = "gen-p-keep", conflicts_with = "skew_preset")]
    p_keep: Option<f64>,
    #[arg(long = "gen-skew-preset", value_enum)]
    skew_preset: Option<SkewPreset>,
    /// Connection radius is this constant over sqrt(n).
    #[arg(long = "gen-radius-const")]
    radius_const: Option<f64>,
    #[arg(long = "gen-directed")]
    directed: bool,
    /// Keep the largest connected component of one draw instead of
    /// redrawing until the sensor graph is connected.
    #[arg(long = "gen-largest-component")]
    largest_component: bool,
}

impl GeneratorArgs {
    fn spec(&self, n: usize, seed: u64) -> GenSpec {
        let mut spec = GenSpec::new(self.kind.into(), n, self.dim, seed);
        spec.p_keep = match (self.p_keep, self.skew_preset) {
            (Some(p), _) => p,
            (None, Some(SkewPreset::InnerMass200)) => SKEW_P_KEEP_INNER_MASS_1_200,
            _ => SKEW_P_KEEP_DEFAULT,
        };
        spec.directed = self.directed;
        spec.largest_component = self.largest_component;
        spec.radius_const = self.radius_const.unwrap_or(if self.directed {
            SENSOR_RADIUS_DIRECTED
        } else {
            SENSOR_RADIUS_UNDIRECTED
        });
        spec
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long)]
    n: usize,
    /// Write vectors comma-separated instead of space-separated.
    #[arg(long)]
    csv: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InputKind {
    Vectors,
    VectorsCsv,
    Graph,
    Digraph,
}

/// Dataset selection shared by `medoid` and `kmedoids`.
#[derive(Args, Debug)]
struct InputArgs {
    /// Input file (vectors or edge list).
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Input format; by default `.csv` files are comma-separated vectors and
    /// anything else whitespace-separated vectors.
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
    /// Restrict a graph input to its largest (strongly) connected component.
    #[arg(long)]
    largest_component: bool,
    /// Generator spec, e.g. "uniform_cube n=1000 dim=2". The seed defaults
    /// to --seed.
    #[arg(long)]
    gen: Option<String>,
}

impl InputArgs {
    fn source(&self, seed: u64) -> anyhow::Result<DatasetSource> {
        if let Some(spec) = &self.gen {
            let text = if spec.contains("seed=") {
                spec.clone()
            } else {
                format!("{spec} seed={seed}")
            };
            return Ok(DatasetSource::Generated(text.parse()?));
        }
        let Some(path) = &self.input else {
            bail!("one of --input or --gen is required");
        };
        Ok(file_source(path, self.input_kind, self.largest_component))
    }
}

fn file_source(path: &Path, kind: Option<InputKind>, largest_component: bool) -> DatasetSource {
    let kind = kind.unwrap_or(if path.extension().is_some_and(|e| e == "csv") {
        InputKind::VectorsCsv
    } else {
        InputKind::Vectors
    });
    let path = path.to_path_buf();
    match kind {
        InputKind::Vectors => DatasetSource::VectorFile {
            path,
            delimiter: Delimiter::Whitespace,
        },
        InputKind::VectorsCsv => DatasetSource::VectorFile {
            path,
            delimiter: Delimiter::Comma,
        },
        InputKind::Graph | InputKind::Digraph => DatasetSource::GraphFile {
            path,
            directed: matches!(kind, InputKind::Digraph),
            largest_component,
        },
    }
}

#[derive(Args, Debug, Clone)]
struct MedoidParams {
    #[arg(long = "trimed-epsilon", default_value_t = 0.0)]
    trimed_epsilon: f64,
    #[arg(long = "toprank-k", default_value_t = 1)]
    toprank_k: usize,
    #[arg(long = "toprank-alpha-prime", default_value_t = 1.0)]
    toprank_alpha_prime: f64,
    /// Anchor-count multiplier for TOPRANK and RAND.
    #[arg(long = "toprank-anchor-constant", default_value_t = 1.0)]
    toprank_anchor_constant: f64,
    #[arg(long = "toprank2-l0")]
    toprank2_l0: Option<usize>,
    #[arg(long = "toprank2-q-incr")]
    toprank2_q_incr: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct ClusterParams {
    #[arg(long = "kmedoids-k", default_value_t = 10)]
    k: usize,
    #[arg(long = "trikmeds-epsilon", default_value_t = 0.0)]
    trikmeds_epsilon: f64,
    #[arg(long = "kmedoids-init", default_value = "uniform", value_parser = ["uniform", "park"])]
    init: String,
    #[arg(long = "kmedoids-max-iters", default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
}

fn algo_params(m: &MedoidParams, c: &ClusterParams) -> anyhow::Result<AlgoParams> {
    Ok(AlgoParams {
        trimed_epsilon: m.trimed_epsilon,
        toprank: TopRankParams {
            k: m.toprank_k,
            alpha_prime: m.toprank_alpha_prime,
            anchor_constant: m.toprank_anchor_constant,
            l0: m.toprank2_l0,
            q_incr: m.toprank2_q_incr,
        },
        clusters: c.k,
        trikmeds_epsilon: c.trikmeds_epsilon,
        init: c.init.parse::<InitMethod>()?,
        max_iters: c.max_iters,
    })
}

fn default_cluster_params() -> ClusterParams {
    ClusterParams {
        k: 10,
        trikmeds_epsilon: 0.0,
        init: "uniform".into(),
        max_iters: DEFAULT_MAX_ITERS,
    }
}

#[derive(Args, Debug)]
struct MedoidArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "trimed", value_parser = ["trimed", "brute", "rand", "toprank", "toprank2"])]
    algorithm: String,
    #[command(flatten)]
    params: MedoidParams,
}

#[derive(Args, Debug)]
struct KmedoidsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "trikmeds", value_parser = ["kmeds", "trikmeds"])]
    algorithm: String,
    #[command(flatten)]
    params: ClusterParams,
    /// Also run trikmeds with epsilon 0 and report phi_c and phi_e.
    #[arg(long)]
    with_baseline: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Sweep a fixed file instead of generated data.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
    /// Restrict a graph input to its largest (strongly) connected component.
    #[arg(long = "largest-component")]
    input_largest_component: bool,
    /// Comma-separated, strictly increasing sizes.
    #[arg(long, value_delimiter = ',')]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', default_value = "trimed")]
    algorithms: Vec<String>,
    /// Run cells one at a time.
    #[arg(long)]
    serial: bool,
    #[command(flatten)]
    medoid: MedoidParams,
    #[command(flatten)]
    cluster: ClusterParams,
}

fn emit(cli: &Cli, records: &[RunRecord]) -> anyhow::Result<()> {
    if !cli.quiet {
        write_records(std::io::stdout().lock(), records)?;
    }
    if let Some(out) = &cli.out {
        append_records(out, records).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> anyhow::Result<()> {
    let Some(out) = &cli.out else {
        bail!("gen needs --out");
    };
    let spec = args.generator.spec(args.n, cli.seed);
    let meta_path = PathBuf::from(format!("{}.meta", out.display()));
    if spec.is_graph() {
        let g = spec.graph::<f64>()?;
        write_edge_list(out, &g.graph)?;
        write_meta(
            &meta_path,
            &spec,
            &[
                ("format", if spec.directed { "digraph" } else { "graph" }.to_string()),
                ("edges", g.graph.edges().len().to_string()),
                ("attempts", g.attempts.to_string()),
                ("seed_used", g.seed_used.to_string()),
            ],
        )?;
    } else {
        let v = spec.vectors::<f64>()?;
        let (delim, fmt) = if args.csv {
            (Delimiter::Comma, "vectors-csv")
        } else {
            (Delimiter::Whitespace, "vectors")
        };
        write_vectors(out, &v, delim)?;
        write_meta(&meta_path, &spec, &[("format", fmt.to_string())])?;
    }
    if !cli.quiet {
        println!("wrote {} ({spec})", out.display());
    }
    Ok(())
}

fn cmd_medoid(cli: &Cli, args: &MedoidArgs) -> anyhow::Result<()> {
    let source = args.input.source(cli.seed)?;
    let data = Dataset::load(&source)?;
    let params = algo_params(&args.params, &default_cluster_params())?;
    let rec = run_medoid(&source, &data, args.algorithm.parse::<Algorithm>()?, &params, cli.seed)?;
    emit(cli, &[rec])
}

fn cmd_kmedoids(cli: &Cli, args: &KmedoidsArgs) -> anyhow::Result<()> {
    let source = args.input.source(cli.seed)?;
    let data = Dataset::load(&source)?;
    let medoid = MedoidParams {
        trimed_epsilon: 0.0,
        toprank_k: 1,
        toprank_alpha_prime: 1.0,
        toprank_anchor_constant: 1.0,
        toprank2_l0: None,
        toprank2_q_incr: None,
    };
    let params = algo_params(&medoid, &args.params)?;
    let algorithm = args.algorithm.parse::<Algorithm>()?;
    let rec = run_kmedoids(&source, &data, algorithm, &params, cli.seed, args.with_baseline)?;
    emit(cli, &[rec])
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> anyhow::Result<()> {
    let source = match &args.input {
        Some(p) => SweepSource::Input(file_source(p, args.input_kind, args.input_largest_component)),
        None => SweepSource::Generator(args.generator.spec(1, cli.seed)),
    };
    let algorithms = args
        .algorithms
        .iter()
        .map(|a| a.parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec {
        source,
        algorithms,
        n_grid: args.n_grid.clone(),
        seeds: args.seeds,
        base_seed: cli.seed,
        params: algo_params(&args.medoid, &args.cluster)?,
        parallel: !args.serial,
    };
    let outcome = sweep(&spec)?;
    if let Some(out) = &cli.out {
        append_records(out, &outcome.records).with_context(|| format!("writing {}", out.display()))?;
    }
    if !cli.quiet {
        let mut stdout = std::io::stdout().lock();
        if cli.out.is_none() {
            write_records(&mut stdout, &outcome.records)?;
            writeln!(stdout)?;
        }
        write!(stdout, "{}", format_summary(&outcome))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(&cli, a),
        Command::Medoid(a) => cmd_medoid(&cli, a),
        Command::Kmedoids(a) => cmd_kmedoids(&cli, a),
        Command::Sweep(a) => cmd_sweep(&cli, a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
