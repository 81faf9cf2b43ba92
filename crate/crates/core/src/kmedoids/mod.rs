//! K-medoids clustering: initialisers, the Voronoi-iteration baseline
//! ([`kmeds`]) and the bound-accelerated [`trikmeds`].
//!
//! Both algorithms share one iteration protocol so that trikmeds with ε = 0
//! reproduces kmeds exactly:
//!
//! 1. assign every element to its nearest medoid (lowest cluster index on
//!    ties);
//! 2. repeat: recompute each cluster's medoid, stop if no medoid changed,
//!    otherwise reassign.
//!
//! A cluster keeps its medoid unless some member has a strictly smaller
//! in-cluster distance sum; among strictly better members the lowest element
//! id wins. Empty clusters keep their previous medoid. In-cluster sums are
//! accumulated in ascending element-id order by both implementations.

mod kmeds;
mod trikmeds;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::Metric;
use crate::{Error, Result, Scalar};

pub use kmeds::{kmeds, KMEDS_MAX_N};
pub use trikmeds::{trikmeds, trikmeds_observed, ClusterState, FluxAccumulators, Phase, TrikmedsConfig};

pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct KMedoidsResult<T> {
    /// Medoid element id per cluster.
    pub medoids: Vec<usize>,
    /// Cluster index per element.
    pub assignments: Vec<usize>,
    /// Sum over elements of the distance to the assigned medoid.
    pub objective: T,
    pub iterations: usize,
    pub distance_evals: u64,
    /// Medoid updates that found their cluster empty.
    pub empty_cluster_events: usize,
}

/// `k` distinct ids drawn uniformly without replacement.
pub fn init_uniform(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("K must be in 1..={n}, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, n, k).into_vec())
}

/// Initialiser selecting the `k` ids minimising
/// `f(i) = Σ_j D(i, j) / S(j)` with `S(j) = Σ_i D(i, j)`. Needs the full
/// distance matrix (n rows). A zero column sum contributes 0 and logs a
/// warning.
pub fn init_park<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, k: usize) -> Result<Vec<usize>> {
    let n = metric.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("K must be in 1..={n}, got {k}")));
    }
    let rows: Vec<Vec<T>> = (0..n).map(|i| metric.row(i)).collect();
    let mut col_sums = vec![T::zero(); n];
    for row in &rows {
        for (s, &d) in col_sums.iter_mut().zip(row) {
            *s = *s + d;
        }
    }
    if n > 1 && col_sums.iter().any(|s| s.is_zero()) {
        log::warn!("park initialisation: zero column sum (duplicate-collapsed set); treating those terms as 0");
    }
    let mut scores: Vec<(T, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let f = row
                .iter()
                .zip(&col_sums)
                .filter(|(_, s)| !s.is_zero())
                .fold(T::zero(), |acc, (&d, &s)| acc + d / s);
            (f, i)
        })
        .collect();
    scores.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scores").then(a.1.cmp(&b.1)));
    Ok(scores.into_iter().take(k).map(|(_, i)| i).collect())
}

pub(crate) fn validate_init(n: usize, init: &[usize]) -> Result<()> {
    let k = init.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("K must be in 1..={n}, got {k}")));
    }
    let mut seen = vec![false; n];
    for &m in init {
        if m >= n {
            return Err(Error::InvalidParameter(format!("initial medoid {m} out of range")));
        }
        if std::mem::replace(&mut seen[m], true) {
            return Err(Error::InvalidParameter(format!("initial medoid {m} repeated")));
        }
    }
    Ok(())
}

/// Sum of `values[p]` over positions sorted by ascending `ids[p]`, where
/// `ids[1..]` is already ascending and `ids[0]` may be out of place.
pub(crate) fn sum_ascending_with_head<T: Scalar>(ids: &[usize], values: &[T]) -> T {
    debug_assert_eq!(ids.len(), values.len());
    if ids.is_empty() {
        return T::zero();
    }
    let insert = 1 + ids[1..].partition_point(|&id| id < ids[0]);
    let mut sum = T::zero();
    for &v in &values[1..insert] {
        sum = sum + v;
    }
    sum = sum + values[0];
    for &v in &values[insert..] {
        sum = sum + v;
    }
    sum
}

/// Σ_i min_k dist(i, medoid k), recomputed from scratch.
pub fn exact_objective<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, medoids: &[usize]) -> T {
    let rows: Vec<Vec<T>> = medoids.iter().map(|&m| metric.row(m)).collect();
    (0..metric.len()).fold(T::zero(), |acc, i| {
        acc + rows.iter().map(|r| r[i]).fold(T::infinity(), T::min)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{EuclideanOracle, VectorDataset};

    #[test]
    fn uniform_init_contract() {
        assert_eq!(init_uniform(1, 1, 0).unwrap(), vec![0]);
        let mut all = init_uniform(7, 7, 3).unwrap();
        all.sort_unstable();
        assert_eq!(all, (0..7).collect::<Vec<_>>());
        assert_eq!(init_uniform(100, 5, 11).unwrap(), init_uniform(100, 5, 11).unwrap());
        assert!(init_uniform(3, 4, 0).is_err());
        assert!(init_uniform(3, 0, 0).is_err());
    }

    #[test]
    fn park_hand_example() {
        let d = VectorDataset::new(1, vec![0.0, 1.0, 10.0]).unwrap();
        let o = EuclideanOracle::new(&d);
        assert_eq!(init_park(&o, 1).unwrap(), vec![1]);
        assert_eq!(init_park(&o, 2).unwrap(), vec![1, 0]);
        let mut all = init_park(&o, 3).unwrap();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2]);
    }

    #[test]
    fn park_degenerate_set() {
        let d = VectorDataset::new(2, vec![1.0; 6]).unwrap();
        let o = EuclideanOracle::new(&d);
        assert_eq!(init_park(&o, 1).unwrap(), vec![0]);
    }

    #[test]
    fn ascending_sum_places_head() {
        let ids = [5, 1, 3, 7];
        let vals = [1.0, 1e16, -1e16, 2.0];
        // ascending order is 1, 3, 5, 7
        assert_eq!(sum_ascending_with_head(&ids, &vals), ((1e16 + -1e16) + 1.0) + 2.0);
        assert_eq!(sum_ascending_with_head::<f64>(&[], &[]), 0.0);
    }

    #[test]
    fn init_validation() {
        assert!(validate_init(3, &[0, 0]).is_err());
        assert!(validate_init(3, &[3]).is_err());
        assert!(validate_init(3, &[]).is_err());
        assert!(validate_init(3, &[2, 0]).is_ok());
    }
}
