//! Synthetic datasets: uniform cubes, uniform and centre-depleted unit
//! balls, and random geometric ("sensor network") graphs.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed
//! (ChaCha8 stream). Normal deviates come from `rand_distr::StandardNormal`
//! (ziggurat).

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::metric::{validate_connectivity, Delimiter, VectorDataset, WeightedGraph};
use crate::{Error, Result, Scalar};

/// Keep probability inside radius `(1/2)^{1/d}` giving a 1:19 inner:outer
/// density ratio.
pub const SKEW_P_KEEP_DEFAULT: f64 = 0.1;
/// Keep probability putting 1/200 of the mass inside radius `(1/2)^{1/d}`.
pub const SKEW_P_KEEP_INNER_MASS_1_200: f64 = 0.01;
pub const SENSOR_RADIUS_UNDIRECTED: f64 = 1.25;
pub const SENSOR_RADIUS_DIRECTED: f64 = 1.45;
pub const SENSOR_MAX_ATTEMPTS: usize = 20;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn to_dataset<T: Scalar>(dim: usize, values: Vec<f64>) -> VectorDataset<T> {
    VectorDataset::new(dim, values.into_iter().map(T::from_f64_lossy).collect())
        .expect("generated coordinates are finite")
}

fn check_shape(n: usize, dim: usize) -> Result<()> {
    if n == 0 || dim == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and dim >= 1, got n={n}, dim={dim}"
        )));
    }
    Ok(())
}

/// i.i.d. uniform coordinates in `[0, 1)`.
pub fn sample_uniform_cube<T: Scalar>(n: usize, dim: usize, seed: u64) -> Result<VectorDataset<T>> {
    check_shape(n, dim)?;
    let mut rng = rng(seed);
    let values = (0..n * dim).map(|_| rng.random::<f64>()).collect();
    Ok(to_dataset(dim, values))
}

/// Uniform direction on the sphere; a zero-norm draw is redrawn.
fn unit_direction(rng: &mut ChaCha8Rng, dim: usize, out: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
        debug_assert_eq!(out.len(), dim);
    }
}

fn ball_point(rng: &mut ChaCha8Rng, dim: usize, out: &mut [f64]) {
    unit_direction(rng, dim, out);
    let radius = rng.random::<f64>().powf(1.0 / dim as f64);
    out.iter_mut().for_each(|x| *x *= radius);
}

/// Uniform in the unit ball: `X1 / |X1| · U^{1/d}` with `X1` standard normal.
pub fn sample_ball_uniform<T: Scalar>(n: usize, dim: usize, seed: u64) -> Result<VectorDataset<T>> {
    check_shape(n, dim)?;
    let mut rng = rng(seed);
    let mut values = vec![0.0; n * dim];
    for p in values.chunks_exact_mut(dim) {
        ball_point(&mut rng, dim, p);
    }
    Ok(to_dataset(dim, values))
}

/// Unit-ball sample depleted inside radius `(1/2)^{1/d}`: each inner point is
/// kept with probability `p_keep`, otherwise redrawn uniformly from the
/// annulus between that radius and 1.
pub fn sample_ball_skewed<T: Scalar>(n: usize, dim: usize, p_keep: f64, seed: u64) -> Result<VectorDataset<T>> {
    check_shape(n, dim)?;
    if !(p_keep > 0.0 && p_keep <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p_keep must be in (0, 1], got {p_keep}"
        )));
    }
    let inner = 0.5f64.powf(1.0 / dim as f64);
    let mut rng = rng(seed);
    let mut values = vec![0.0; n * dim];
    for p in values.chunks_exact_mut(dim) {
        ball_point(&mut rng, dim, p);
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= inner && rng.random::<f64>() >= p_keep {
            unit_direction(&mut rng, dim, p);
            // r^d uniform on (1/2, 1]
            let u: f64 = rng.random();
            let radius = (0.5 + 0.5 * (1.0 - u)).powf(1.0 / dim as f64);
            p.iter_mut().for_each(|x| *x *= radius);
        }
    }
    Ok(to_dataset(dim, values))
}

/// Random geometric graph together with the points it was built from.
#[derive(Debug, Clone)]
pub struct SensorGraph<T> {
    pub graph: WeightedGraph<T>,
    pub coords: VectorDataset<T>,
    /// Number of draws made (1 when the first draw was connected).
    pub attempts: usize,
    /// Seed of the accepted draw.
    pub seed_used: u64,
}

/// `n` uniform points in the unit square, joined whenever their distance is
/// below `radius_const / sqrt(n)`, weighted by that distance. A directed
/// graph orients each such pair at random. Draws are repeated with seeds
/// `seed, seed + 1, ...` until one is (strongly) connected.
pub fn gen_sensor_graph<T: Scalar>(n: usize, radius_const: f64, directed: bool, seed: u64) -> Result<SensorGraph<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(radius_const > 0.0 && radius_const.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius constant must be positive, got {radius_const}"
        )));
    }
    for attempt in 0..SENSOR_MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let (graph, coords) = draw_sensor_graph::<T>(n, radius_const, directed, s);
        if validate_connectivity(&graph).is_ok() {
            return Ok(SensorGraph {
                graph,
                coords,
                attempts: attempt + 1,
                seed_used: s,
            });
        }
    }
    Err(Error::ConnectivityNotAchieved {
        n,
        radius_const,
        attempts: SENSOR_MAX_ATTEMPTS,
    })
}

/// One draw, no connectivity check.
pub fn draw_sensor_graph<T: Scalar>(
    n: usize,
    radius_const: f64,
    directed: bool,
    seed: u64,
) -> (WeightedGraph<T>, VectorDataset<T>) {
    let mut rng = rng(seed);
    let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
    let radius = radius_const / (n as f64).sqrt();
    let cells = ((1.0 / radius).floor() as usize).clamp(1, 4096);
    let cell_of = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); cells * cells];
    for (i, p) in pts.iter().enumerate() {
        grid[cell_of(p[0]) * cells + cell_of(p[1])].push(i);
    }
    let mut edges = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let (cx, cy) = (cell_of(p[0]), cell_of(p[1]));
        for gx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
            for gy in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
                for &j in &grid[gx * cells + gy] {
                    if j <= i {
                        continue;
                    }
                    let q = pts[j];
                    let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                    if d < radius {
                        edges.push((i, j, d));
                    }
                }
            }
        }
    }
    // grid order depends on cell layout only; sort for a canonical edge list
    edges.sort_by_key(|&(i, j, _)| (i, j));
    let edges = edges
        .into_iter()
        .map(|(i, j, d)| {
            let (u, v) = if directed && rng.random::<bool>() {
                (j, i)
            } else {
                (i, j)
            };
            (u, v, T::from_f64_lossy(d))
        })
        .collect();
    let graph = WeightedGraph::new(n, edges, directed).expect("generated edges are valid");
    let coords = to_dataset(2, pts.into_iter().flatten().collect());
    (graph, coords)
}

/// Restricts a graph to its largest (strongly) connected component,
/// relabelling nodes by ascending original id. Returns the subgraph and the
/// original id of each kept node.
pub fn largest_component<T: Scalar>(graph: &WeightedGraph<T>) -> (WeightedGraph<T>, Vec<usize>) {
    let n = graph.n_nodes();
    let labels = if graph.is_directed() {
        strong_components(n, graph.edges())
    } else {
        weak_components(n, graph.edges())
    };
    let mut sizes = std::collections::HashMap::new();
    for &l in &labels {
        *sizes.entry(l).or_insert(0usize) += 1;
    }
    // largest, then the component containing the smallest node id
    let first_of = |l: usize| labels.iter().position(|&x| x == l).unwrap_or(usize::MAX);
    let best = sizes
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(first_of(*b.0).cmp(&first_of(*a.0))))
        .map(|(&l, _)| l)
        .unwrap_or(0);
    let kept: Vec<usize> = (0..n).filter(|&i| labels[i] == best).collect();
    let mut new_id = vec![usize::MAX; n];
    for (k, &i) in kept.iter().enumerate() {
        new_id[i] = k;
    }
    let edges = graph
        .edges()
        .iter()
        .filter(|&&(u, v, _)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
        .map(|&(u, v, w)| (new_id[u], new_id[v], w))
        .collect();
    let sub = WeightedGraph::new(kept.len(), edges, graph.is_directed()).expect("relabelled edges are valid");
    (sub, kept)
}

fn adjacency<T>(n: usize, edges: &[(usize, usize, T)], reverse: bool) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in edges {
        if reverse {
            adj[v].push(u);
        } else {
            adj[u].push(v);
        }
    }
    adj
}

fn weak_components<T>(n: usize, edges: &[(usize, usize, T)]) -> Vec<usize> {
    let mut adj = adjacency(n, edges, false);
    for &(u, v, _) in edges {
        adj[v].push(u);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Kosaraju, iterative.
fn strong_components<T>(n: usize, edges: &[(usize, usize, T)]) -> Vec<usize> {
    let fwd = adjacency(n, edges, false);
    let rev = adjacency(n, edges, true);
    let mut visited = vec![false; n];
    let mut finish = Vec::with_capacity(n);
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((u, idx)) = stack.pop() {
            if idx < fwd[u].len() {
                stack.push((u, idx + 1));
                let v = fwd[u][idx];
                if !visited[v] {
                    visited[v] = true;
                    stack.push((v, 0));
                }
            } else {
                finish.push(u);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for &s in finish.iter().rev() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    UniformCube,
    BallUniform,
    BallSkewed,
    SensorGraph,
}

impl GenKind {
    pub fn name(self) -> &'static str {
        match self {
            GenKind::UniformCube => "uniform_cube",
            GenKind::BallUniform => "ball_uniform",
            GenKind::BallSkewed => "ball_skewed",
            GenKind::SensorGraph => "sensor_graph",
        }
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "uniform_cube" => Ok(GenKind::UniformCube),
            "ball_uniform" => Ok(GenKind::BallUniform),
            "ball_skewed" => Ok(GenKind::BallSkewed),
            "sensor_graph" => Ok(GenKind::SensorGraph),
            other => Err(Error::InvalidParameter(format!("unknown generator kind {other:?}"))),
        }
    }
}

/// Full parameterisation of a generated dataset.
///
/// Displays as `kind n=.. dim=.. p_keep=.. radius_const=.. directed=..
/// largest_component=.. seed=..`, which [`FromStr`] parses back. Omitted
/// fields take their defaults when parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub dim: usize,
    pub p_keep: f64,
    pub radius_const: f64,
    pub directed: bool,
    /// Sensor graphs only: keep the largest (strongly) connected component
    /// of a single draw instead of redrawing until connected.
    pub largest_component: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, dim: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            dim: if kind == GenKind::SensorGraph { 2 } else { dim },
            p_keep: SKEW_P_KEEP_DEFAULT,
            radius_const: SENSOR_RADIUS_UNDIRECTED,
            directed: false,
            largest_component: false,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_shape(self.n, self.dim)?;
        if !(self.p_keep > 0.0 && self.p_keep <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p_keep must be in (0, 1], got {}",
                self.p_keep
            )));
        }
        if self.radius_const.is_nan() || self.radius_const <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radius constant must be positive, got {}",
                self.radius_const
            )));
        }
        Ok(())
    }

    pub fn is_graph(&self) -> bool {
        self.kind == GenKind::SensorGraph
    }

    /// Generates a point cloud; errors for graph kinds.
    pub fn vectors<T: Scalar>(&self) -> Result<VectorDataset<T>> {
        self.validate()?;
        match self.kind {
            GenKind::UniformCube => sample_uniform_cube(self.n, self.dim, self.seed),
            GenKind::BallUniform => sample_ball_uniform(self.n, self.dim, self.seed),
            GenKind::BallSkewed => sample_ball_skewed(self.n, self.dim, self.p_keep, self.seed),
            GenKind::SensorGraph => Err(Error::InvalidParameter(
                "sensor_graph produces a graph, not vectors".into(),
            )),
        }
    }

    pub fn graph<T: Scalar>(&self) -> Result<SensorGraph<T>> {
        self.validate()?;
        match self.kind {
            GenKind::SensorGraph if self.largest_component => {
                let (g, coords) = draw_sensor_graph::<T>(self.n, self.radius_const, self.directed, self.seed);
                let (graph, kept) = largest_component(&g);
                let values = kept.iter().flat_map(|&i| coords.point(i).to_vec()).collect();
                Ok(SensorGraph {
                    graph,
                    coords: VectorDataset::new(2, values)?,
                    attempts: 1,
                    seed_used: self.seed,
                })
            }
            GenKind::SensorGraph => gen_sensor_graph(self.n, self.radius_const, self.directed, self.seed),
            _ => Err(Error::InvalidParameter(format!(
                "{} produces vectors, not a graph",
                self.kind.name()
            ))),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} dim={} p_keep={} radius_const={} directed={} largest_component={} seed={}",
            self.kind.name(),
            self.n,
            self.dim,
            self.p_keep,
            self.radius_const,
            self.directed,
            self.largest_component,
            self.seed
        )
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let kind: GenKind = tokens
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty generator spec".into()))?
            .parse()?;
        let mut spec = GenSpec::new(kind, 1, 1, 0);
        let bad = |t: &str| Error::InvalidParameter(format!("bad generator field {t:?}"));
        for token in tokens {
            let (key, value) = token.split_once('=').ok_or_else(|| bad(token))?;
            match key {
                "n" => spec.n = value.parse().map_err(|_| bad(token))?,
                "dim" => spec.dim = value.parse().map_err(|_| bad(token))?,
                "p_keep" => spec.p_keep = value.parse().map_err(|_| bad(token))?,
                "radius_const" => spec.radius_const = value.parse().map_err(|_| bad(token))?,
                "directed" => spec.directed = value.parse().map_err(|_| bad(token))?,
                "largest_component" => spec.largest_component = value.parse().map_err(|_| bad(token))?,
                "seed" => spec.seed = value.parse().map_err(|_| bad(token))?,
                _ => return Err(bad(token)),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Writes one point per line, fields separated by `,` or a single space.
pub fn write_vectors<T: Scalar>(path: &Path, data: &VectorDataset<T>, delimiter: Delimiter) -> Result<()> {
    let sep = match delimiter {
        Delimiter::Comma => ",",
        Delimiter::Whitespace => " ",
    };
    let mut out = String::with_capacity(data.values().len() * 20);
    for p in data.points() {
        let fields: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&fields.join(sep));
        out.push('\n');
    }
    write_file(path, &out)
}

/// Writes `u v w` per edge.
pub fn write_edge_list<T: Scalar>(path: &Path, graph: &WeightedGraph<T>) -> Result<()> {
    let mut out = format!("# nodes {} edges {}\n", graph.n_nodes(), graph.edges().len());
    for &(u, v, w) in graph.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    write_file(path, &out)
}

/// Writes `key: value` lines describing how a dataset was generated.
pub fn write_meta(path: &Path, spec: &GenSpec, extra: &[(&str, String)]) -> Result<()> {
    let mut out = format!(
        "spec: {spec}\nkind: {}\nn: {}\ndim: {}\np_keep: {}\nradius_const: {}\ndirected: {}\nlargest_component: {}\nseed: {}\n",
        spec.kind.name(),
        spec.n,
        spec.dim,
        spec.p_keep,
        spec.radius_const,
        spec.directed,
        spec.largest_component,
        spec.seed
    );
    for (k, v) in extra {
        out.push_str(&format!("{k}: {v}\n"));
    }
    write_file(path, &out)
}

/// Reads the `spec:` line back from a metadata file.
pub fn read_meta(path: &Path) -> Result<GenSpec> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .find_map(|l| l.strip_prefix("spec:"))
        .ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "no `spec:` line".into(),
        })?
        .trim()
        .parse()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norms(d: &VectorDataset<f64>) -> Vec<f64> {
        d.points()
            .map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect()
    }

    #[test]
    fn cube_range_and_determinism() {
        let a = sample_uniform_cube::<f64>(500, 3, 1).unwrap();
        assert!(a.values().iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert_eq!(a, sample_uniform_cube(500, 3, 1).unwrap());
        assert_ne!(a, sample_uniform_cube(500, 3, 2).unwrap());
    }

    #[test]
    fn cube_mean_near_half() {
        let d = sample_uniform_cube::<f64>(100_000, 2, 3).unwrap();
        for c in 0..2 {
            let mean = d.points().map(|p| p[c]).sum::<f64>() / 1e5;
            assert!((mean - 0.5).abs() < 0.01, "coordinate {c} mean {mean}");
        }
    }

    #[test]
    fn ball_uniform_volume_fraction() {
        for dim in [2, 3] {
            let d = sample_ball_uniform::<f64>(100_000, dim, 5).unwrap();
            let ns = norms(&d);
            assert!(ns.iter().all(|&r| r <= 1.0 + 1e-12));
            let inner = 0.5f64.powf(1.0 / dim as f64);
            let frac = ns.iter().filter(|&&r| r <= inner).count() as f64 / 1e5;
            assert!((frac - 0.5).abs() < 0.01, "dim {dim} inner fraction {frac}");
        }
    }

    #[test]
    fn ball_uniform_one_dim_symmetric() {
        let d = sample_ball_uniform::<f64>(100_000, 1, 6).unwrap();
        let mean = d.values().iter().sum::<f64>() / 1e5;
        assert!(mean.abs() < 0.01);
        assert!(d.values().iter().all(|x| x.abs() <= 1.0));
    }

    #[test]
    fn skewed_inner_fraction() {
        let d = sample_ball_skewed::<f64>(100_000, 2, SKEW_P_KEEP_DEFAULT, 7).unwrap();
        let ns = norms(&d);
        assert!(ns.iter().all(|&r| r <= 1.0 + 1e-12));
        let inner = 0.5f64.sqrt();
        let frac = ns.iter().filter(|&&r| r <= inner).count() as f64 / 1e5;
        assert!((frac - 0.05).abs() < 0.01, "inner fraction {frac}");
    }

    #[test]
    fn skewed_with_keep_one_is_uniform_ball() {
        let a = sample_ball_skewed::<f64>(1000, 3, 1.0, 4).unwrap();
        let b = sample_ball_uniform::<f64>(1000, 3, 4).unwrap();
        // p_keep = 1 still consumes one uniform per inner point, so compare
        // distributions rather than values.
        let inner = 0.5f64.powf(1.0 / 3.0);
        let fa = norms(&a).iter().filter(|&&r| r <= inner).count() as f64 / 1000.0;
        let fb = norms(&b).iter().filter(|&&r| r <= inner).count() as f64 / 1000.0;
        assert!((fa - 0.5).abs() < 0.06 && (fb - 0.5).abs() < 0.06);
        assert!(sample_ball_skewed::<f64>(10, 2, 0.0, 0).is_err());
    }

    #[test]
    fn sensor_two_nodes() {
        let g = gen_sensor_graph::<f64>(2, 100.0, false, 0).unwrap();
        assert_eq!(g.graph.edges().len(), 1);
        let (u, v, w) = g.graph.edges()[0];
        let pu = g.coords.point(u);
        let pv = g.coords.point(v);
        let d = ((pu[0] - pv[0]).powi(2) + (pu[1] - pv[1]).powi(2)).sqrt();
        assert_eq!(w, d);
        assert_eq!(g.attempts, 1);
    }

    #[test]
    fn sensor_tiny_radius_fails() {
        assert!(matches!(
            gen_sensor_graph::<f64>(50, 1e-6, false, 0),
            Err(Error::ConnectivityNotAchieved { .. })
        ));
    }

    #[test]
    fn sensor_mean_degree() {
        let (g, _) = draw_sensor_graph::<f64>(10_000, 1.25, false, 9);
        let mean_degree = 2.0 * g.edges().len() as f64 / 10_000.0;
        let expected = std::f64::consts::PI * 1.25 * 1.25;
        assert!(
            mean_degree > expected / 2.0 && mean_degree < expected * 2.0,
            "{mean_degree}"
        );
    }

    #[test]
    fn sensor_grid_matches_brute_force() {
        let (g, coords) = draw_sensor_graph::<f64>(300, 1.5, false, 2);
        let r = 1.5 / 300f64.sqrt();
        let mut brute = Vec::new();
        for i in 0..300 {
            for j in i + 1..300 {
                let (p, q) = (coords.point(i), coords.point(j));
                let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                if d < r {
                    brute.push((i, j));
                }
            }
        }
        let got: Vec<_> = g.edges().iter().map(|&(u, v, _)| (u, v)).collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn largest_component_is_strongly_connected() {
        let (g, _) = draw_sensor_graph::<f64>(400, SENSOR_RADIUS_DIRECTED, true, 3);
        let (sub, kept) = largest_component(&g);
        assert_eq!(sub.n_nodes(), kept.len());
        assert!(kept.len() > 200);
        assert!(validate_connectivity(&sub).is_ok());
    }

    #[test]
    fn spec_largest_component_graph() {
        let mut spec = GenSpec::new(GenKind::SensorGraph, 400, 2, 1);
        spec.directed = true;
        spec.radius_const = SENSOR_RADIUS_DIRECTED;
        spec.largest_component = true;
        let g = spec.graph::<f64>().unwrap();
        assert!(validate_connectivity(&g.graph).is_ok());
        assert_eq!(g.coords.n_points(), g.graph.n_nodes());
    }

    #[test]
    fn spec_round_trip() {
        let mut spec = GenSpec::new(GenKind::BallSkewed, 1024, 3, 17);
        spec.p_keep = 0.25;
        let parsed: GenSpec = spec.to_string().parse().unwrap();
        assert_eq!(parsed, spec);
        assert!("nope n=3".parse::<GenSpec>().is_err());
        assert!("uniform_cube n=0".parse::<GenSpec>().is_err());
        assert!("uniform_cube n=3 colour=red".parse::<GenSpec>().is_err());
        let mut g = GenSpec::new(GenKind::SensorGraph, 100, 2, 1);
        g.largest_component = true;
        assert_eq!(g.to_string().parse::<GenSpec>().unwrap(), g);
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let data = sample_uniform_cube::<f64>(20, 3, 1).unwrap();
        for delim in [Delimiter::Comma, Delimiter::Whitespace] {
            let p = dir.path().join("v.txt");
            write_vectors(&p, &data, delim).unwrap();
            assert_eq!(crate::metric::load_vectors::<f64>(&p, delim).unwrap(), data);
        }
        let g = gen_sensor_graph::<f64>(100, 2.0, true, 1).unwrap();
        let p = dir.path().join("g.txt");
        write_edge_list(&p, &g.graph).unwrap();
        assert_eq!(crate::metric::load_graph::<f64>(&p, true).unwrap(), g.graph);
        let mut spec = GenSpec::new(GenKind::SensorGraph, 100, 2, 1);
        spec.directed = true;
        let m = dir.path().join("g.meta");
        write_meta(&m, &spec, &[("attempts", g.attempts.to_string())]).unwrap();
        assert_eq!(read_meta(&m).unwrap(), spec);
    }
}
