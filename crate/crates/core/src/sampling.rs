//! Sampling-based energy estimation (RAND) and top-k selection (TOPRANK,
//! TOPRANK2).
//!
//! RAND estimates every energy from the rows of a uniform sample of anchor
//! elements. TOPRANK keeps the elements whose estimate falls below a
//! threshold around the k-th smallest estimate and computes their exact
//! energies. TOPRANK2 grows the anchor set until the candidate set stops
//! shrinking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::{row_mean, Metric};
use crate::{Error, Result, Scalar};

/// Anchor-based energy estimates.
///
/// Only the running row sums and per-anchor maxima are kept, not the rows
/// themselves; each anchor's exact energy is retained so a later exact pass
/// never recomputes an anchor row.
#[derive(Debug, Clone)]
pub struct EnergyEstimates<T> {
    anchors: Vec<usize>,
    anchor_energies: Vec<T>,
    sums: Vec<T>,
    /// min over anchors of the anchor's largest distance
    min_eccentricity: T,
}

impl<T: Scalar> EnergyEstimates<T> {
    fn empty(n: usize) -> Self {
        Self {
            anchors: Vec::new(),
            anchor_energies: Vec::new(),
            sums: vec![T::zero(); n],
            min_eccentricity: T::infinity(),
        }
    }

    fn add_anchor<M: Metric<T> + ?Sized>(&mut self, metric: &M, anchor: usize, row: &mut [T]) {
        metric.row_into(anchor, row);
        let mut max = T::zero();
        for (s, &d) in self.sums.iter_mut().zip(row.iter()) {
            *s = *s + d;
            max = max.max(d);
        }
        self.min_eccentricity = self.min_eccentricity.min(max);
        self.anchors.push(anchor);
        self.anchor_energies.push(row_mean(row));
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    pub fn n_anchors(&self) -> usize {
        self.anchors.len()
    }

    /// Exact energies of the anchors, aligned with [`anchors`](Self::anchors).
    pub fn anchor_energies(&self) -> &[T] {
        &self.anchor_energies
    }

    /// `Ê(j)`: mean distance from the anchors to `j`.
    pub fn estimates(&self) -> Vec<T> {
        let l = T::from_usize_lossy(self.anchors.len());
        self.sums.iter().map(|&s| s / l).collect()
    }

    /// `Δ̂ = 2 · min over anchors of max_j dist(anchor, j)`.
    pub fn delta_hat(&self) -> T {
        (T::one() + T::one()) * self.min_eccentricity
    }
}

/// Estimates energies from an explicit anchor set.
pub fn estimate_from_anchors<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    anchors: &[usize],
) -> Result<EnergyEstimates<T>> {
    let n = metric.len();
    if anchors.is_empty() || anchors.len() > n {
        return Err(Error::InvalidParameter(format!(
            "anchor count must be in 1..={n}, got {}",
            anchors.len()
        )));
    }
    if let Some(&bad) = anchors.iter().find(|&&a| a >= n) {
        return Err(Error::InvalidParameter(format!("anchor {bad} out of range")));
    }
    let mut est = EnergyEstimates::empty(n);
    let mut row = vec![T::zero(); n];
    for &a in anchors {
        est.add_anchor(metric, a, &mut row);
    }
    Ok(est)
}

/// RAND: `l` anchors drawn uniformly without replacement.
pub fn rand_estimate<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, l: usize, seed: u64) -> Result<EnergyEstimates<T>> {
    let n = metric.len();
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "anchor count must be in 1..={n}, got {l}"
        )));
    }
    let mut sampler = AnchorSampler::new(n, seed);
    let mut est = EnergyEstimates::empty(n);
    sampler.extend(metric, &mut est, l);
    Ok(est)
}

/// Draws anchors as successive prefixes of one seeded permutation, so any
/// prefix is a uniform sample without replacement.
struct AnchorSampler {
    order: Vec<usize>,
    next: usize,
}

impl AnchorSampler {
    fn new(n: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self { order, next: 0 }
    }

    fn remaining(&self) -> usize {
        self.order.len() - self.next
    }

    fn extend<T: Scalar, M: Metric<T> + ?Sized>(&mut self, metric: &M, est: &mut EnergyEstimates<T>, count: usize) {
        let count = count.min(self.remaining());
        let mut row = vec![T::zero(); self.order.len()];
        for &a in &self.order[self.next..self.next + count] {
            est.add_anchor(metric, a, &mut row);
        }
        self.next += count;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopRankParams {
    /// Number of top-ranked (lowest-energy) elements sought.
    pub k: usize,
    pub alpha_prime: f64,
    /// Multiplier on `N^{2/3} (ln N)^{1/3}` for the TOPRANK anchor count.
    pub anchor_constant: f64,
    /// Initial TOPRANK2 anchor count; `None` means `ceil(sqrt N)`.
    pub l0: Option<usize>,
    /// Anchors added per TOPRANK2 round; `None` means `ceil(ln N)`.
    pub q_incr: Option<usize>,
}

impl Default for TopRankParams {
    fn default() -> Self {
        Self {
            k: 1,
            alpha_prime: 1.0,
            anchor_constant: 1.0,
            l0: None,
            q_incr: None,
        }
    }
}

impl TopRankParams {
    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidParameter(format!("k must be in 1..={n}, got {}", self.k)));
        }
        if !(self.alpha_prime > 0.0 && self.alpha_prime.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha' must be positive, got {}",
                self.alpha_prime
            )));
        }
        if !(self.anchor_constant > 0.0 && self.anchor_constant.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "anchor constant must be positive, got {}",
                self.anchor_constant
            )));
        }
        if self.l0 == Some(0) || self.q_incr == Some(0) {
            return Err(Error::InvalidParameter("l0 and q_incr must be at least 1".into()));
        }
        Ok(())
    }

    /// `ceil(q · N^{2/3} · (ln N)^{1/3})`, clamped to `[1, N]`.
    pub fn toprank_anchor_count(&self, n: usize) -> usize {
        let nf = n as f64;
        let l = self.anchor_constant * nf.powf(2.0 / 3.0) * nf.ln().cbrt();
        clamp_count(l, n)
    }

    pub fn toprank2_initial_anchors(&self, n: usize) -> usize {
        self.l0.unwrap_or_else(|| clamp_count((n as f64).sqrt(), n)).clamp(1, n)
    }

    pub fn toprank2_increment(&self, n: usize) -> usize {
        self.q_incr.unwrap_or_else(|| clamp_count((n as f64).ln(), n))
    }
}

fn clamp_count(x: f64, n: usize) -> usize {
    if x.is_finite() {
        (x.ceil() as usize).clamp(1, n.max(1))
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopRankResult<T> {
    /// The `k` lowest-energy members of the candidate set, best first.
    pub top: Vec<usize>,
    /// Exact energies aligned with `top`.
    pub energies: Vec<T>,
    /// Final candidate set `Q`, ascending ids.
    pub candidates: Vec<usize>,
    pub n_anchors: usize,
    /// Anchors plus candidates that were not anchors.
    pub n_computed: usize,
    pub distance_evals: u64,
    /// Anchor-growing rounds after the first (TOPRANK2 only).
    pub rounds: usize,
}

/// `Q = { i : Ê(i) <= Ê[k] + 2 α' Δ̂ sqrt(ln n / l) }`, ascending ids.
pub fn candidate_set<T: Scalar>(est: &EnergyEstimates<T>, k: usize, alpha_prime: f64) -> Vec<usize> {
    let estimates = est.estimates();
    let n = estimates.len();
    let mut sorted = estimates.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite estimates"));
    let kth = sorted[k - 1];
    let margin = 2.0 * alpha_prime * est.delta_hat().to_f64_lossy() * ((n as f64).ln() / est.n_anchors() as f64).sqrt();
    let threshold = kth + T::from_f64_lossy(margin);
    (0..n).filter(|&i| estimates[i] <= threshold).collect()
}

/// Exact energies over `candidates`, reusing anchor energies; returns the k
/// best by (energy, id).
fn finish<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    est: &EnergyEstimates<T>,
    candidates: Vec<usize>,
    k: usize,
    start: crate::metric::CounterSnapshot,
    rounds: usize,
) -> TopRankResult<T> {
    let n = metric.len();
    let mut known = vec![None; n];
    for (&a, &e) in est.anchors().iter().zip(est.anchor_energies()) {
        known[a] = Some(e);
    }
    let mut row = vec![T::zero(); n];
    let mut extra = 0;
    let mut scored: Vec<(T, usize)> = candidates
        .iter()
        .map(|&i| {
            let e = known[i].unwrap_or_else(|| {
                extra += 1;
                metric.row_into(i, &mut row);
                row_mean(&row)
            });
            (e, i)
        })
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies").then(a.1.cmp(&b.1)));
    scored.truncate(k);
    TopRankResult {
        top: scored.iter().map(|&(_, i)| i).collect(),
        energies: scored.iter().map(|&(e, _)| e).collect(),
        candidates,
        n_anchors: est.n_anchors(),
        n_computed: est.n_anchors() + extra,
        distance_evals: metric.counters().snapshot().since(start).evals,
        rounds,
    }
}

/// TOPRANK with `ceil(q · N^{2/3} (ln N)^{1/3})` anchors.
pub fn toprank<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    params: &TopRankParams,
    seed: u64,
) -> Result<TopRankResult<T>> {
    let n = metric.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    params.validate(n)?;
    let start = metric.counters().snapshot();
    let est = rand_estimate(metric, params.toprank_anchor_count(n), seed)?;
    let q = candidate_set(&est, params.k, params.alpha_prime);
    Ok(finish(metric, &est, q, params.k, start, 0))
}

/// TOPRANK with an explicit anchor count instead of the default formula.
pub fn toprank_with_anchors<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    params: &TopRankParams,
    l: usize,
    seed: u64,
) -> Result<TopRankResult<T>> {
    let n = metric.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    params.validate(n)?;
    let start = metric.counters().snapshot();
    let est = rand_estimate(metric, l, seed)?;
    let q = candidate_set(&est, params.k, params.alpha_prime);
    Ok(finish(metric, &est, q, params.k, start, 0))
}

/// TOPRANK2: starts from `l0` anchors and adds `q_incr` per round until the
/// candidate set shrinks by less than `ln n` in a round (or anchors run out).
pub fn toprank2<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    params: &TopRankParams,
    seed: u64,
) -> Result<TopRankResult<T>> {
    let n = metric.len();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    params.validate(n)?;
    let start = metric.counters().snapshot();
    let mut sampler = AnchorSampler::new(n, seed);
    let mut est = EnergyEstimates::empty(n);
    sampler.extend(metric, &mut est, params.toprank2_initial_anchors(n));
    let mut q = candidate_set(&est, params.k, params.alpha_prime);
    let increment = params.toprank2_increment(n);
    let log_n = (n as f64).ln();
    let mut rounds = 0;
    while sampler.remaining() > 0 {
        let before = q.len();
        sampler.extend(metric, &mut est, increment);
        q = candidate_set(&est, params.k, params.alpha_prime);
        rounds += 1;
        if (before as f64) - (q.len() as f64) < log_n {
            break;
        }
    }
    Ok(finish(metric, &est, q, params.k, start, rounds))
}
