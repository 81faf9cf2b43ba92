use super::{validate_init, KMedoidsResult};
use crate::metric::Metric;
use crate::{Error, Result, Scalar};

/// Largest set `kmeds` accepts; its distance matrix holds `n^2` scalars.
pub const KMEDS_MAX_N: usize = 16_384;

/// Voronoi iteration over a precomputed distance matrix.
///
/// Each unordered pair is evaluated once (`n(n-1)/2` evaluations). `init`
/// gives the initial medoids, one per cluster.
pub fn kmeds<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    init: &[usize],
    max_iters: usize,
) -> Result<KMedoidsResult<T>> {
    let n = metric.len();
    validate_init(n, init)?;
    if n > KMEDS_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "kmeds stores the full distance matrix and accepts at most {KMEDS_MAX_N} elements, got {n}"
        )));
    }
    let start = metric.counters().snapshot();
    let mut matrix = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = metric.distance(i, j);
            matrix[i * n + j] = d;
            matrix[j * n + i] = d;
        }
    }
    let dist = |i: usize, j: usize| matrix[i * n + j];

    let mut medoids = init.to_vec();
    let mut assignments = vec![0usize; n];
    let assign = |medoids: &[usize], assignments: &mut [usize]| {
        for (i, a) in assignments.iter_mut().enumerate() {
            let mut best = (0, dist(i, medoids[0]));
            for (k, &m) in medoids.iter().enumerate().skip(1) {
                let d = dist(i, m);
                if d < best.1 {
                    best = (k, d);
                }
            }
            *a = best.0;
        }
    };
    assign(&medoids, &mut assignments);

    let mut iterations = 0;
    let mut empty_cluster_events = 0;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); medoids.len()];
    loop {
        if iterations == max_iters {
            break;
        }
        iterations += 1;
        for m in members.iter_mut() {
            m.clear();
        }
        for (i, &a) in assignments.iter().enumerate() {
            members[a].push(i);
        }
        let mut changed = false;
        for (k, cluster) in members.iter().enumerate() {
            if cluster.is_empty() {
                empty_cluster_events += 1;
                continue;
            }
            let in_cluster_sum = |c: usize| cluster.iter().fold(T::zero(), |acc, &j| acc + dist(c, j));
            let incumbent = medoids[k];
            let mut best = if assignments[incumbent] == k {
                (incumbent, in_cluster_sum(incumbent))
            } else {
                (incumbent, T::infinity())
            };
            for &c in cluster {
                if c == incumbent {
                    continue;
                }
                let s = in_cluster_sum(c);
                if s < best.1 {
                    best = (c, s);
                }
            }
            if best.0 != incumbent {
                medoids[k] = best.0;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        assign(&medoids, &mut assignments);
    }

    let objective = assignments
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &a)| acc + dist(i, medoids[a]));
    Ok(KMedoidsResult {
        medoids,
        assignments,
        objective,
        iterations,
        distance_evals: metric.counters().snapshot().since(start).evals,
        empty_cluster_events,
    })
}
