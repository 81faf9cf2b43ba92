//! Exact medoid search by triangle-inequality elimination.
//!
//! For any two elements, `|E(i) - dist(i, j)| <= E(j)`. Every computed row
//! therefore yields a lower bound on the energy of every other element, and
//! an element whose bound already reaches the best energy found so far can
//! never be the medoid. Elements are visited in a seeded random order; on
//! well-behaved data only O(√N) of them end up computed.
//!
//! With `epsilon > 0` the elimination test becomes `l(i)(1 + ε) < E_cl`,
//! which returns an element within a factor `1 + ε` of the minimum energy.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::{row_mean, MedoidResult, Metric};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimedConfig {
    pub seed: u64,
    /// Relaxation factor; 0 is exact.
    pub epsilon: f64,
}

impl Default for TrimedConfig {
    fn default() -> Self {
        Self { seed: 0, epsilon: 0.0 }
    }
}

/// Lower bounds on energies plus the best candidate found so far.
///
/// Invariant: `lower[i] <= E(i)` for every `i`, and when a best candidate is
/// set its stored energy is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState<T> {
    lower: Vec<T>,
    best_energy: T,
    best_index: Option<usize>,
}

impl<T: Scalar> BoundState<T> {
    pub fn new(n: usize) -> Self {
        Self {
            lower: vec![T::zero(); n],
            best_energy: T::infinity(),
            best_index: None,
        }
    }

    pub fn from_bounds(lower: Vec<T>) -> Self {
        Self {
            lower,
            best_energy: T::infinity(),
            best_index: None,
        }
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn best(&self) -> Option<(usize, T)> {
        self.best_index.map(|i| (i, self.best_energy))
    }

    pub fn best_energy(&self) -> T {
        self.best_energy
    }

    /// True when the bound test cannot eliminate `i`.
    pub fn must_compute(&self, i: usize, relax: T) -> bool {
        self.lower[i] * relax < self.best_energy
    }

    /// Tightens every bound with the exact energy and row of `i`:
    /// `l(j) <- max(l(j), |E_i - row(j)|)`, and `l(i) <- E_i`.
    pub fn update_bounds(&mut self, i: usize, energy_i: T, row: &[T]) {
        assert_eq!(row.len(), self.lower.len());
        self.lower[i] = energy_i;
        for (l, &d) in self.lower.iter_mut().zip(row) {
            *l = l.max((energy_i - d).abs());
        }
    }

    /// Records `i` as the new best candidate if its energy is strictly lower.
    pub fn offer(&mut self, i: usize, energy_i: T) -> bool {
        if energy_i < self.best_energy {
            self.best_energy = energy_i;
            self.best_index = Some(i);
            true
        } else {
            false
        }
    }
}

/// Seeded Fisher-Yates shuffle of `0..n` (ChaCha8 stream from `seed`).
pub fn shuffled_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    order
}

/// Exact (or ε-relaxed) medoid.
///
/// Among several elements of exactly minimal energy, the one reached first in
/// the shuffled order wins, so the returned index can depend on the seed in
/// tie situations only.
pub fn trimed<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, config: &TrimedConfig) -> Result<MedoidResult<T>> {
    let order = shuffled_order(metric.len(), config.seed);
    trimed_with_order(metric, &order, config.epsilon, |_, _| {})
}

/// Runs the elimination loop over an explicit visiting order. `observer` is
/// called after each computed element with its id and the updated state.
pub fn trimed_with_order<T, M, F>(metric: &M, order: &[usize], epsilon: f64, mut observer: F) -> Result<MedoidResult<T>>
where
    T: Scalar,
    M: Metric<T> + ?Sized,
    F: FnMut(usize, &BoundState<T>),
{
    let n = metric.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    if !metric.is_symmetric() {
        return Err(Error::InvalidParameter(
            "trimed needs a symmetric metric; use the symmetrized graph view".into(),
        ));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    if order.len() != n {
        return Err(Error::InvalidParameter(format!(
            "visiting order has {} entries for {n} elements",
            order.len()
        )));
    }
    let relax = T::one() + T::from_f64_lossy(epsilon);
    let start = metric.counters().snapshot();
    let mut state = BoundState::new(n);
    let mut row = vec![T::zero(); n];
    let mut n_computed = 0;
    for &i in order {
        if !state.must_compute(i, relax) {
            continue;
        }
        metric.row_into(i, &mut row);
        n_computed += 1;
        let e = row_mean(&row);
        state.offer(i, e);
        state.update_bounds(i, e, &row);
        observer(i, &state);
    }
    let (index, energy) = state.best().expect("at least one element computed");
    Ok(MedoidResult {
        index,
        energy,
        n_computed,
        distance_evals: metric.counters().snapshot().since(start).evals,
    })
}
