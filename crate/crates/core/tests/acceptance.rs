//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::time::Instant;

use common::{floyd_warshall, instance_suite, random_connected_graph, reference_energies, reference_matrix, rel_le};
use medoids::bench::{
    run_kmedoids, sweep, AlgoParams, Algorithm, Dataset, DatasetSource, InitMethod, SweepSource, SweepSpec,
};
use medoids::datagen::{sample_uniform_cube, GenKind, GenSpec, SKEW_P_KEEP_DEFAULT};
use medoids::kmedoids::{init_uniform, kmeds, trikmeds, trikmeds_observed, Phase, TrikmedsConfig};
use medoids::metric::{EuclideanOracle, GraphOracle, GraphView, Metric, VectorDataset};
use medoids::sampling::{toprank, TopRankParams};
use medoids::trimed::{shuffled_order, trimed, trimed_with_order, TrimedConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Mean n_computed of `algorithm` per N over a generated family.
fn mean_n_computed(template: GenSpec, n_grid: Vec<usize>, seeds: usize, algorithm: Algorithm) -> Vec<(usize, f64)> {
    let spec = SweepSpec {
        source: SweepSource::Generator(template),
        algorithms: vec![algorithm],
        n_grid,
        seeds,
        base_seed: 1,
        params: AlgoParams::default(),
        parallel: true,
    };
    let out = sweep(&spec).expect("valid sweep");
    assert!(out.records.iter().all(|r| r.is_ok()), "sweep cell failed");
    out.summary.iter().map(|r| (r.n, r.mean_n_computed)).collect()
}

fn exactness_and_relaxation() -> (Outcome, Outcome) {
    let suite = instance_suite(240, 2024);
    let mut worst = [0.0f64; 3];
    let mut failures = [0usize; 3];
    let (mut graphs, mut vectors) = (0, 0);
    for (idx, data) in suite.iter().enumerate() {
        match data {
            Dataset::Graph(_) => graphs += 1,
            Dataset::Vectors(_) => vectors += 1,
        }
        let energies = reference_energies(&reference_matrix(data));
        let best = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        for (slot, eps) in [0.0, 0.01, 0.1].into_iter().enumerate() {
            let r = data
                .with_metric(|m| {
                    trimed(
                        m,
                        &TrimedConfig {
                            seed: idx as u64,
                            epsilon: eps,
                        },
                    )
                })
                .unwrap();
            let ratio = r.energy / best - 1.0;
            worst[slot] = worst[slot].max(ratio);
            if !rel_le(r.energy, (1.0 + eps) * best, 1e-9) {
                failures[slot] += 1;
            }
        }
    }
    let c1 = outcome(
        failures[0] == 0,
        format!(
            "{} instances ({vectors} vector sets, {graphs} graphs), {} above E*(1+1e-9), worst relative excess {:.1e}",
            suite.len(),
            failures[0],
            worst[0]
        ),
    );
    let c11 = outcome(
        failures[1] == 0 && failures[2] == 0,
        format!(
            "eps=0.01: {} violations, worst E/E*-1 = {:.2e}; eps=0.1: {} violations, worst E/E*-1 = {:.2e}",
            failures[1], worst[1], failures[2], worst[2]
        ),
    );
    (c1, c11)
}

fn sqrt_scaling() -> Outcome {
    let grid = vec![1 << 10, 1 << 12, 1 << 14, 1 << 16];
    let means = mean_n_computed(GenSpec::new(GenKind::UniformCube, 1, 2, 0), grid, 5, Algorithm::Trimed);
    let pts: Vec<(f64, f64)> = means.iter().map(|&(n, m)| (n as f64, m)).collect();
    let slope = medoids::bench::loglog_slope(&pts).unwrap();
    let table: Vec<String> = means.iter().map(|(n, m)| format!("{n}:{m:.0}")).collect();
    outcome(
        (0.40..=0.65).contains(&slope),
        format!("slope {slope:.3} in [0.40, 0.65]; mean n_computed {}", table.join(" ")),
    )
}

fn dimension_trend() -> Outcome {
    let n = 1 << 14;
    let at = |d| {
        mean_n_computed(
            GenSpec::new(GenKind::UniformCube, n, d, 0),
            vec![n],
            5,
            Algorithm::Trimed,
        )[0]
        .1
    };
    let (d2, d6) = (at(2), at(6));
    outcome(d6 > d2, format!("N=2^14: mean n_computed d=6 {d6:.1} > d=2 {d2:.1}"))
}

fn convexity_effect() -> Outcome {
    let n = 1 << 14;
    let uniform = mean_n_computed(
        GenSpec::new(GenKind::BallUniform, n, 2, 0),
        vec![n],
        5,
        Algorithm::Trimed,
    )[0]
    .1;
    let mut skew = GenSpec::new(GenKind::BallSkewed, n, 2, 0);
    skew.p_keep = SKEW_P_KEEP_DEFAULT;
    let skewed = mean_n_computed(skew, vec![n], 5, Algorithm::Trimed)[0].1;
    outcome(
        skewed < uniform,
        format!("N=2^14 d=2: mean n_computed skewed {skewed:.1} < uniform {uniform:.1}"),
    )
}

fn toprank_agreement() -> Outcome {
    let mut agree = 0;
    for seed in 0..20u64 {
        let data: VectorDataset<f64> = sample_uniform_cube(2000, 2, 500 + seed).unwrap();
        let o = EuclideanOracle::new(&data);
        let t = trimed(&o, &TrimedConfig { seed, epsilon: 0.0 }).unwrap();
        let params = TopRankParams {
            k: 1,
            alpha_prime: 1.0,
            ..TopRankParams::default()
        };
        let r = toprank(&o, &params, seed).unwrap();
        if r.top[0] == t.index {
            agree += 1;
        }
    }
    outcome(
        agree >= 19,
        format!("toprank(k=1) matched trimed in {agree}/20 runs (need 19)"),
    )
}

fn cost_ordering() -> Outcome {
    let n = 100_000;
    let template = GenSpec::new(GenKind::UniformCube, n, 2, 0);
    let tri = mean_n_computed(template.clone(), vec![n], 3, Algorithm::Trimed)[0].1;
    let top = mean_n_computed(template, vec![n], 3, Algorithm::Toprank)[0].1;
    outcome(
        tri < 0.2 * top,
        format!(
            "N=1e5: mean n_computed trimed {tri:.0} < 0.2 x toprank {top:.0} (ratio {:.4})",
            tri / top
        ),
    )
}

fn trikmeds_equivalence() -> Outcome {
    let mut runs = 0;
    let mut mismatches = Vec::new();
    for n in [500, 2000] {
        for k in [5, 20] {
            for seed in 0..5u64 {
                let data: VectorDataset<f64> = sample_uniform_cube(n, 2, 1000 + seed).unwrap();
                let o = EuclideanOracle::new(&data);
                let init = init_uniform(n, k, seed).unwrap();
                let a = kmeds(&o, &init, 10_000).unwrap();
                let b = trikmeds(&o, &init, &TrikmedsConfig::default()).unwrap();
                let mut ma = a.medoids.clone();
                let mut mb = b.medoids.clone();
                ma.sort();
                mb.sort();
                let same =
                    ma == mb && (a.objective - b.objective).abs() <= 1e-9 * a.objective && a.iterations == b.iterations;
                runs += 1;
                if !same {
                    mismatches.push(format!("n={n} K={k} seed={seed}"));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{} of {runs} runs identical (medoid set, objective, iterations){}",
            runs - mismatches.len(),
            if mismatches.is_empty() {
                String::new()
            } else {
                format!("; differing: {}", mismatches.join(", "))
            }
        ),
    )
}

fn bound_invariants() -> Outcome {
    let mut checks = 0u64;
    let mut violations = 0u64;
    for seed in 0..50u64 {
        let n = [200, 500, 1000, 2000][seed as usize % 4];
        let d = 1 + seed as usize % 3;
        let eps = if seed % 2 == 0 { 0.0 } else { 0.1 };
        let data: VectorDataset<f64> = if seed % 5 == 0 {
            medoids::datagen::sample_ball_skewed(n, d, SKEW_P_KEEP_DEFAULT, seed).unwrap()
        } else {
            sample_uniform_cube(n, d, seed).unwrap()
        };
        let matrix = reference_matrix(&Dataset::Vectors(data.clone()));
        let energies = reference_energies(&matrix);
        let o = EuclideanOracle::new(&data);

        trimed_with_order(&o, &shuffled_order(n, seed), eps, |_, state| {
            for (l, e) in state.lower().iter().zip(&energies) {
                checks += 1;
                if !rel_le(*l, *e, 1e-9) {
                    violations += 1;
                }
            }
        })
        .unwrap();

        let k = if seed % 3 == 0 { 3 } else { 10 };
        let init = init_uniform(n, k, seed).unwrap();
        trikmeds_observed(
            &o,
            &init,
            &TrikmedsConfig {
                epsilon: eps,
                max_iters: 10_000,
            },
            |phase, s| {
                let order = s.order();
                for (pos, &i) in order.iter().enumerate() {
                    for (c, &m) in s.medoids().iter().enumerate() {
                        checks += 1;
                        if !rel_le(s.medoid_bounds(pos)[c], matrix[i][m], 1e-9) {
                            violations += 1;
                        }
                    }
                    // sum bounds refer to the clusters they were built for,
                    // which the assignment step has just changed
                    if phase != Phase::Assigned {
                        let a = s.assignment_by_position()[pos];
                        let sum: f64 = s.cluster_range(a).map(|q| matrix[i][order[q]]).sum();
                        checks += 1;
                        if !rel_le(s.sum_bounds()[pos], sum, 1e-9) {
                            violations += 1;
                        }
                    }
                }
            },
        )
        .unwrap();
    }
    outcome(
        violations == 0,
        format!("50 seeds, {checks} bound checks, {violations} violations"),
    )
}

fn distance_savings() -> Outcome {
    let n = 20_000;
    let source = DatasetSource::Generated(GenSpec::new(GenKind::UniformCube, n, 2, 7));
    let data = Dataset::load(&source).unwrap();
    let run = |eps: f64| {
        let params = AlgoParams {
            clusters: 10,
            trikmeds_epsilon: eps,
            init: InitMethod::Uniform,
            ..AlgoParams::default()
        };
        run_kmedoids(&source, &data, Algorithm::Trikmeds, &params, 7, true).unwrap()
    };
    let (r0, r1, r2) = (run(0.0), run(0.01), run(0.1));
    let ratio = r0.nc_over_n2;
    let phi_e = r2.phi_e.unwrap();
    let pass =
        ratio < 0.15 && r2.distance_evals < r1.distance_evals && r1.distance_evals < r0.distance_evals && phi_e <= 1.10;
    outcome(
        pass,
        format!(
            "N_c/n^2 = {ratio:.4} (< 0.15); evals eps=0.1 {} < eps=0.01 {} < eps=0 {}; phi_c(0.1) = {:.3}, phi_E(0.1) = {phi_e:.4} (<= 1.10)",
            r2.distance_evals,
            r1.distance_evals,
            r0.distance_evals,
            r2.phi_c.unwrap()
        ),
    )
}

fn graph_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let mut worst = 0.0f64;
    let mut bad = 0;
    for g_idx in 0..50 {
        let n = 2 + g_idx % 59;
        let directed = g_idx % 3 == 0;
        let g = random_connected_graph(&mut rng, n, g_idx * 2, directed, g_idx % 2 == 0);
        let fw = floyd_warshall(&g);
        let o = GraphOracle::new(&g, GraphView::Directed).unwrap();
        for i in 0..n {
            let row = o.graph_row(i).unwrap();
            for j in 0..n {
                let err = (row[j] - fw[i][j]).abs() / fw[i][j].abs().max(1.0);
                worst = worst.max(err);
                if err > 1e-12 {
                    bad += 1;
                }
            }
        }
        assert_eq!(o.counters().snapshot().rows, n as u64);
    }
    outcome(
        bad == 0,
        format!("50 graphs (<= 60 nodes, a third directed), worst relative error {worst:.1e}"),
    )
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (2, "sqrt-N scaling", sqrt_scaling),
        (3, "dimension trend", dimension_trend),
        (4, "strong-convexity effect", convexity_effect),
        (5, "toprank agreement", toprank_agreement),
        (6, "trimed vs toprank cost", cost_ordering),
        (7, "trikmeds-0 equals kmeds", trikmeds_equivalence),
        (8, "bound invariants", bound_invariants),
        (9, "distance savings", distance_savings),
        (10, "graph oracle", graph_oracle),
    ];
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let start = Instant::now();
    let (c1, c11) = exactness_and_relaxation();
    let shared = start.elapsed().as_secs_f64();
    results.push((1, "exactness", c1, shared));
    for (id, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        results.push((id, name, o, t.elapsed().as_secs_f64()));
    }
    results.push((11, "epsilon relaxation", c11, shared));

    let mut failed = 0;
    for (id, name, o, secs) in &results {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {id:>2} {name:<26} {verdict}  {} [{secs:.1}s]", o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
