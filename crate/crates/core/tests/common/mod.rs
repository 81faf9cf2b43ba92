//! Shared fixtures and independent reference computations.
#![allow(dead_code)]

use medoids::bench::Dataset;
use medoids::datagen::{
    gen_sensor_graph, sample_ball_skewed, sample_ball_uniform, sample_uniform_cube, SKEW_P_KEEP_DEFAULT,
};
use medoids::metric::{VectorDataset, WeightedGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All-pairs shortest paths by Floyd–Warshall; `inf` where unreachable.
pub fn floyd_warshall(g: &WeightedGraph<f64>) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(u, v, w) in g.edges() {
        d[u][v] = d[u][v].min(w);
        if !g.is_directed() {
            d[v][u] = d[v][u].min(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Full distance matrix computed without the library's oracles. Directed
/// graphs are symmetrised by averaging both directions.
pub fn reference_matrix(data: &Dataset) -> Vec<Vec<f64>> {
    match data {
        Dataset::Vectors(v) => {
            let n = v.n_points();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            v.point(i)
                                .iter()
                                .zip(v.point(j))
                                .map(|(a, b)| (a - b) * (a - b))
                                .sum::<f64>()
                                .sqrt()
                        })
                        .collect()
                })
                .collect()
        }
        Dataset::Graph(g) => {
            let d = floyd_warshall(g);
            if !g.is_directed() {
                return d;
            }
            let n = d.len();
            (0..n)
                .map(|i| (0..n).map(|j| (d[i][j] + d[j][i]) / 2.0).collect())
                .collect()
        }
    }
}

pub fn reference_energies(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len() as f64;
    matrix.iter().map(|r| r.iter().sum::<f64>() / n).collect()
}

/// Random connected graph: a random spanning tree (plus a Hamiltonian cycle
/// when directed) and `extra` random edges. Integer weights in `1..=max_w`
/// when `integer` so that ties are common.
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra: usize,
    directed: bool,
    integer: bool,
) -> WeightedGraph<f64> {
    let weight = |rng: &mut ChaCha8Rng| {
        if integer {
            rng.random_range(1..=5) as f64
        } else {
            rng.random_range(0.01..10.0)
        }
    };
    let mut edges = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    if directed {
        for i in 0..n {
            if n > 1 {
                edges.push((perm[i], perm[(i + 1) % n], weight(rng)));
            }
        }
    } else {
        for i in 1..n {
            let parent = perm[rng.random_range(0..i)];
            edges.push((parent, perm[i], weight(rng)));
        }
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        edges.push((u, v, weight(rng)));
    }
    WeightedGraph::new(n, edges, directed).unwrap()
}

/// Mixed instance suite: vector sets from each generator, sets with
/// duplicated points, sensor graphs and random graphs (some directed).
pub fn instance_suite(count: usize, seed: u64) -> Vec<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = [1, 2, 3, 5];
    (0..count)
        .map(|idx| {
            let s = rng.random::<u64>();
            match idx % 6 {
                0 | 1 | 2 | 3 => {
                    let n = rng.random_range(5..=500);
                    let d = dims[rng.random_range(0..dims.len())];
                    let v: VectorDataset<f64> = match idx % 4 {
                        0 => sample_uniform_cube(n, d, s).unwrap(),
                        1 => sample_ball_uniform(n, d, s).unwrap(),
                        2 => sample_ball_skewed(n, d, SKEW_P_KEEP_DEFAULT, s).unwrap(),
                        _ => {
                            // integer lattice points with many duplicates and ties
                            let vals = (0..n * d).map(|_| rng.random_range(0..4) as f64).collect();
                            VectorDataset::new(d, vals).unwrap()
                        }
                    };
                    Dataset::Vectors(v)
                }
                4 => {
                    let n = rng.random_range(5..=200);
                    Dataset::Graph(gen_sensor_graph(n, 2.5, false, s).unwrap().graph)
                }
                _ => {
                    let n = rng.random_range(5..=200);
                    let directed = rng.random::<bool>();
                    let integer = rng.random::<bool>();
                    let extra = rng.random_range(0..2 * n);
                    Dataset::Graph(random_connected_graph(&mut rng, n, extra, directed, integer))
                }
            }
        })
        .collect()
}

pub fn rel_le(a: f64, b: f64, rel: f64) -> bool {
    a <= b + rel * b.abs().max(1e-300)
}
