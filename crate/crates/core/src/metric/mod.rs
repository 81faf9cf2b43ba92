//! Distance spaces and the counted oracle every algorithm consumes.
//!
//! The unit of cost throughout the crate is the *computed element*: an
//! element whose full distance row has been evaluated. [`Counters`] tracks
//! both rows and individual scalar evaluations.

mod graph;
mod vectors;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result, Scalar};

pub use graph::{load_graph, parse_graph, validate_connectivity, GraphOracle, GraphView, WeightedGraph};
pub use vectors::{load_vectors, parse_vectors, Delimiter, EuclideanOracle, VectorDataset};

/// Evaluation counters shared by an oracle and everything that queries it.
///
/// Increments are atomic so rows may be computed from several workers, but
/// a read is only meaningful at a quiescent point, i.e. between algorithm
/// phases when no worker is mid-row.
#[derive(Debug, Default)]
pub struct Counters {
    evals: AtomicU64,
    rows: AtomicU64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterSnapshot {
    pub evals: u64,
    pub rows: u64,
}

impl CounterSnapshot {
    pub fn since(self, earlier: CounterSnapshot) -> CounterSnapshot {
        CounterSnapshot {
            evals: self.evals - earlier.evals,
            rows: self.rows - earlier.rows,
        }
    }
}

impl Counters {
    pub fn add_evals(&self, n: u64) {
        self.evals.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_row(&self, n_evals: u64) {
        self.rows.fetch_add(1, Ordering::Relaxed);
        self.evals.fetch_add(n_evals, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            evals: self.evals.load(Ordering::Relaxed),
            rows: self.rows.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.evals.store(0, Ordering::Relaxed);
        self.rows.store(0, Ordering::Relaxed);
    }
}

/// A finite metric space of `len()` elements with counted distance queries.
pub trait Metric<T: Scalar>: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One scalar distance evaluation. Counts one evaluation.
    fn distance(&self, i: usize, j: usize) -> T;

    /// Writes the full distance row of `i` into `out` (length `len()`).
    /// Counts one row and `len()` evaluations.
    fn row_into(&self, i: usize, out: &mut [T]);

    fn counters(&self) -> &Counters;

    fn row(&self, i: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.len()];
        self.row_into(i, &mut out);
        out
    }

    /// Whether `distance(i, j) == distance(j, i)` for all pairs.
    fn is_symmetric(&self) -> bool {
        true
    }
}

impl<T: Scalar, M: Metric<T> + ?Sized> Metric<T> for &M {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn distance(&self, i: usize, j: usize) -> T {
        (**self).distance(i, j)
    }
    fn row_into(&self, i: usize, out: &mut [T]) {
        (**self).row_into(i, out)
    }
    fn counters(&self) -> &Counters {
        (**self).counters()
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
}

/// Outcome of a single-medoid search.
#[derive(Debug, Clone, PartialEq)]
pub struct MedoidResult<T> {
    pub index: usize,
    pub energy: T,
    /// Elements whose full distance row was evaluated.
    pub n_computed: usize,
    pub distance_evals: u64,
}

/// Mean of a distance row, accumulated in index order.
pub(crate) fn row_mean<T: Scalar>(row: &[T]) -> T {
    let mut sum = T::zero();
    for &d in row {
        sum = sum + d;
    }
    sum / T::from_usize_lossy(row.len())
}

/// Energy of element `i`: mean distance to every element, itself included.
pub fn energy<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, i: usize) -> T {
    assert!(i < metric.len(), "element {i} out of range");
    let row = metric.row(i);
    row_mean(&row)
}

/// Computes every energy and returns the minimum, lowest index on ties.
pub fn brute_force_medoid<T: Scalar, M: Metric<T> + ?Sized>(metric: &M) -> Result<MedoidResult<T>> {
    let n = metric.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let start = metric.counters().snapshot();
    let mut row = vec![T::zero(); n];
    let mut best = (0, T::infinity());
    for i in 0..n {
        metric.row_into(i, &mut row);
        let e = row_mean(&row);
        if e < best.1 {
            best = (i, e);
        }
    }
    Ok(MedoidResult {
        index: best.0,
        energy: best.1,
        n_computed: n,
        distance_evals: metric.counters().snapshot().since(start).evals,
    })
}

/// All energies, one row per element. Test and report helper; counted like
/// any other row computation.
pub fn all_energies<T: Scalar, M: Metric<T> + ?Sized>(metric: &M) -> Vec<T> {
    let n = metric.len();
    let mut row = vec![T::zero(); n];
    (0..n)
        .map(|i| {
            metric.row_into(i, &mut row);
            row_mean(&row)
        })
        .collect()
}
