mod common;

use common::{floyd_warshall, random_connected_graph};
use medoids::metric::{validate_connectivity, GraphOracle, GraphView, Metric, WeightedGraph};
use medoids::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn undirected_rows_match_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..30 {
        let g = random_connected_graph(&mut rng, 2 + trial, trial * 2, false, trial % 2 == 0);
        let fw = floyd_warshall(&g);
        let o = GraphOracle::new(&g, GraphView::Directed).unwrap();
        for i in 0..g.n_nodes() {
            let row = o.graph_row(i).unwrap();
            for (j, (&a, &b)) in row.iter().zip(&fw[i]).enumerate() {
                assert!(close(a, b), "trial {trial} ({i},{j}): {a} vs {b}");
                assert!(close(o.distance(i, j), b));
            }
        }
    }
}

#[test]
fn directed_rows_and_symmetrised_view() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..20 {
        let g = random_connected_graph(&mut rng, 3 + trial, trial * 3, true, false);
        let fw = floyd_warshall(&g);
        let raw = GraphOracle::new(&g, GraphView::Directed).unwrap();
        let sym = GraphOracle::new(&g, GraphView::Symmetrized).unwrap();
        assert!(!raw.is_symmetric());
        assert!(sym.is_symmetric());
        let n = g.n_nodes();
        for i in 0..n {
            let r = raw.graph_row(i).unwrap();
            let s = sym.row(i);
            for j in 0..n {
                assert!(close(r[j], fw[i][j]));
                assert!(close(s[j], (fw[i][j] + fw[j][i]) / 2.0));
                assert!(close(sym.distance(i, j), s[j]));
            }
        }
    }
}

#[test]
fn row_counts_one_row_and_n_evals() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = random_connected_graph(&mut rng, 25, 10, false, true);
    let o = GraphOracle::new(&g, GraphView::Directed).unwrap();
    o.row(3);
    o.distance(1, 2);
    let c = o.counters().snapshot();
    assert_eq!((c.rows, c.evals), (1, 26));
}

#[test]
fn disconnected_inputs_are_rejected() {
    let g = WeightedGraph::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)], false).unwrap();
    assert!(matches!(validate_connectivity(&g), Err(Error::Disconnected { .. })));
    assert!(GraphOracle::new(&g, GraphView::Directed).is_err());
    let o = GraphOracle::unchecked(&g, GraphView::Directed);
    assert!(matches!(o.graph_row(0), Err(Error::Unreachable { .. })));
    // one-way chain is weakly but not strongly connected
    let d = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)], true).unwrap();
    assert!(validate_connectivity(&d).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dijkstra_equals_floyd_warshall(seed in any::<u64>(), n in 1usize..40, extra in 0usize..80, directed in any::<bool>(), integer in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, extra, directed, integer);
        let fw = floyd_warshall(&g);
        let o = GraphOracle::new(&g, GraphView::Directed).unwrap();
        for i in 0..n {
            let row = o.graph_row(i).unwrap();
            for j in 0..n {
                prop_assert!(close(row[j], fw[i][j]));
            }
        }
    }

    #[test]
    fn graph_distances_obey_triangle_inequality(seed in any::<u64>(), n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, n, false, false);
        let o = GraphOracle::new(&g, GraphView::Directed).unwrap();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| o.row(i)).collect();
        for i in 0..n {
            prop_assert_eq!(rows[i][i], 0.0);
            for j in 0..n {
                prop_assert!(close(rows[i][j], rows[j][i]));
                for k in 0..n {
                    prop_assert!(rows[i][j] <= rows[i][k] + rows[k][j] + 1e-9);
                }
            }
        }
    }
}
