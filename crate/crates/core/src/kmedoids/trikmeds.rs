//! Bound-accelerated Voronoi iteration.
//!
//! Two families of lower bounds avoid most distance evaluations:
//!
//! - `l_c(i, k)`, element-to-medoid distance bounds, maintained Elkan-style
//!   by subtracting how far each medoid moved;
//! - `l_s(i)`, bounds on each element's in-cluster distance sum, tightened
//!   by the energy-bound argument within a cluster (`|v·d(i, i') - S(i)|`
//!   bounds `S(i')`) and loosened after reassignment using the flux of
//!   arriving and departing elements.
//!
//! State is kept in *position* order: after [`ClusterState::contiguate`]
//! cluster `k` occupies positions `V(k-1)..V(k)`, its medoid first, the other
//! members by ascending element id.

use super::{sum_ascending_with_head, validate_init, KMedoidsResult};
use crate::metric::Metric;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrikmedsConfig {
    /// Relaxation of both bound tests; 0 is exact.
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Default for TrikmedsConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            max_iters: super::DEFAULT_MAX_ITERS,
        }
    }
}

/// Relative slack added to both skip tests. Bounds are exact in real
/// arithmetic but can exceed the quantity they bound by a few ulps, which
/// would let a rounding-level tie be skipped and break agreement with kmeds.
pub const ROUNDING_GUARD: f64 = 1e-10;

/// Per-cluster arrivals and departures during one assignment round.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxAccumulators<T> {
    pub n_in: Vec<usize>,
    pub n_out: Vec<usize>,
    /// Sum of new medoid distances of arriving elements.
    pub s_in: Vec<T>,
    /// Sum of old medoid distances of departing elements.
    pub s_out: Vec<T>,
}

impl<T: Scalar> FluxAccumulators<T> {
    pub fn zeros(k: usize) -> Self {
        Self {
            n_in: vec![0; k],
            n_out: vec![0; k],
            s_in: vec![T::zero(); k],
            s_out: vec![T::zero(); k],
        }
    }
}

/// Where in an iteration an observer is being called.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initialised,
    MedoidsUpdated,
    Assigned,
    SumBoundsUpdated,
}

#[derive(Debug, Clone)]
pub struct ClusterState<T> {
    k: usize,
    relax: T,
    /// position -> element id
    order: Vec<usize>,
    /// a
    assignment: Vec<usize>,
    /// d
    medoid_dist: Vec<T>,
    /// l_c, position-major n × K
    medoid_bounds: Vec<T>,
    /// l_s
    sum_bounds: Vec<T>,
    /// v
    counts: Vec<usize>,
    /// V, with V(0) = 0 at index 0
    offsets: Vec<usize>,
    /// s
    sums: Vec<T>,
    /// p
    moved: Vec<T>,
    /// m, as element ids
    medoids: Vec<usize>,
    empty_cluster_events: usize,
    scratch: Vec<T>,
}

impl<T: Scalar> ClusterState<T> {
    /// Tight medoid-distance bounds, nearest-medoid assignment, zero sum
    /// bounds except at the medoids, then contiguation.
    pub fn initialise<M: Metric<T> + ?Sized>(metric: &M, init: &[usize], epsilon: f64) -> Result<Self> {
        let n = metric.len();
        validate_init(n, init)?;
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if !metric.is_symmetric() {
            return Err(Error::InvalidParameter(
                "trikmeds needs a symmetric metric; use the symmetrized graph view".into(),
            ));
        }
        let k = init.len();
        let mut medoid_bounds = vec![T::zero(); n * k];
        let mut row = vec![T::zero(); n];
        for (c, &m) in init.iter().enumerate() {
            metric.row_into(m, &mut row);
            for (i, &d) in row.iter().enumerate() {
                medoid_bounds[i * k + c] = d;
            }
        }
        let mut assignment = vec![0; n];
        let mut medoid_dist = vec![T::zero(); n];
        let mut counts = vec![0; k];
        for i in 0..n {
            let bounds = &medoid_bounds[i * k..(i + 1) * k];
            let mut best = (0, bounds[0]);
            for (c, &d) in bounds.iter().enumerate().skip(1) {
                if d < best.1 {
                    best = (c, d);
                }
            }
            assignment[i] = best.0;
            medoid_dist[i] = best.1;
            counts[best.0] += 1;
        }
        let mut state = Self {
            k,
            relax: T::one() + T::from_f64_lossy(epsilon),
            order: (0..n).collect(),
            assignment,
            medoid_dist,
            medoid_bounds,
            sum_bounds: vec![T::zero(); n],
            counts,
            offsets: vec![0; k + 1],
            sums: vec![T::zero(); k],
            moved: vec![T::zero(); k],
            medoids: init.to_vec(),
            empty_cluster_events: 0,
            scratch: Vec::new(),
        };
        state.recompute_offsets();
        state.contiguate();
        state.refresh_cluster_sums();
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.k
    }

    /// Element id at each position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Cluster index at each position.
    pub fn assignment_by_position(&self) -> &[usize] {
        &self.assignment
    }

    /// Distance to the assigned medoid at each position.
    pub fn medoid_distances(&self) -> &[T] {
        &self.medoid_dist
    }

    /// `l_c` row (one bound per cluster) at `pos`.
    pub fn medoid_bounds(&self, pos: usize) -> &[T] {
        &self.medoid_bounds[pos * self.k..(pos + 1) * self.k]
    }

    /// `l_s` at each position.
    pub fn sum_bounds(&self) -> &[T] {
        &self.sum_bounds
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Cumulative counts `V(0..=K)`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn cluster_sums(&self) -> &[T] {
        &self.sums
    }

    pub fn moved(&self) -> &[T] {
        &self.moved
    }

    pub fn medoids(&self) -> &[usize] {
        &self.medoids
    }

    pub fn cluster_range(&self, c: usize) -> std::ops::Range<usize> {
        self.offsets[c]..self.offsets[c + 1]
    }

    pub fn empty_cluster_events(&self) -> usize {
        self.empty_cluster_events
    }

    /// Cluster index per element id.
    pub fn assignments(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (&id, &a) in self.order.iter().zip(&self.assignment) {
            out[id] = a;
        }
        out
    }

    /// Σ d over elements in ascending id order.
    pub fn objective(&self) -> T {
        let mut by_id = vec![T::zero(); self.n()];
        for (&id, &d) in self.order.iter().zip(&self.medoid_dist) {
            by_id[id] = d;
        }
        by_id.into_iter().fold(T::zero(), |acc, d| acc + d)
    }

    fn recompute_offsets(&mut self) {
        self.offsets[0] = 0;
        for c in 0..self.k {
            self.offsets[c + 1] = self.offsets[c] + self.counts[c];
        }
    }

    fn medoid_leads(&self, c: usize) -> bool {
        let r = self.cluster_range(c);
        !r.is_empty() && self.order[r.start] == self.medoids[c]
    }

    /// Permutes every per-position array so that each cluster is a contiguous
    /// block `V(k-1)..V(k)`, led by its medoid (when the medoid is a member)
    /// and otherwise sorted by element id.
    pub fn contiguate(&mut self) {
        let n = self.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_unstable_by_key(|&p| {
            let a = self.assignment[p];
            let id = self.order[p];
            (a, id != self.medoids[a], id)
        });
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return;
        }
        self.order = perm.iter().map(|&p| self.order[p]).collect();
        self.assignment = perm.iter().map(|&p| self.assignment[p]).collect();
        self.medoid_dist = perm.iter().map(|&p| self.medoid_dist[p]).collect();
        self.sum_bounds = perm.iter().map(|&p| self.sum_bounds[p]).collect();
        let k = self.k;
        let mut bounds = Vec::with_capacity(n * k);
        for &p in &perm {
            bounds.extend_from_slice(&self.medoid_bounds[p * k..(p + 1) * k]);
        }
        self.medoid_bounds = bounds;
    }

    /// `s(k) = Σ d` over each cluster, and the medoid's sum bound made tight.
    pub fn refresh_cluster_sums(&mut self) {
        for c in 0..self.k {
            let r = self.cluster_range(c);
            self.sums[c] = sum_ascending_with_head(&self.order[r.clone()], &self.medoid_dist[r.clone()]);
            if self.medoid_leads(c) {
                self.sum_bounds[r.start] = self.sums[c];
            }
        }
    }

    /// Scans each cluster for a member with smaller in-cluster sum, computing
    /// a member's row only when its sum bound fails the (relaxed) test.
    /// Returns whether any medoid changed; if so every `l_c(i, k)` is then
    /// lowered by how far medoid `k` moved.
    pub fn update_medoids<M: Metric<T> + ?Sized>(&mut self, metric: &M) -> bool {
        let mut changed = false;
        let mut dtilde = std::mem::take(&mut self.scratch);
        for c in 0..self.k {
            self.moved[c] = T::zero();
            let r = self.cluster_range(c);
            if r.is_empty() {
                self.empty_cluster_events += 1;
                continue;
            }
            let incumbent_leads = self.medoid_leads(c);
            if !incumbent_leads {
                self.sums[c] = T::infinity();
            }
            let size = T::from_usize_lossy(r.len());
            let guard = T::one() + T::from_f64_lossy(ROUNDING_GUARD);
            let mut best = incumbent_leads.then_some(r.start);
            dtilde.clear();
            dtilde.resize(r.len(), T::zero());
            for pos in r.clone() {
                // a leading incumbent's sum is already exact
                if incumbent_leads && pos == r.start {
                    continue;
                }
                if self.sum_bounds[pos] * self.relax > self.sums[c] * guard {
                    continue;
                }
                let id = self.order[pos];
                for (q, slot) in r.clone().zip(dtilde.iter_mut()) {
                    *slot = if q == pos {
                        T::zero()
                    } else {
                        metric.distance(id, self.order[q])
                    };
                }
                let total = if incumbent_leads {
                    sum_ascending_with_head(&self.order[r.clone()], &dtilde)
                } else {
                    dtilde.iter().fold(T::zero(), |acc, &d| acc + d)
                };
                self.sum_bounds[pos] = total;
                if total < self.sums[c] {
                    self.sums[c] = total;
                    best = Some(pos);
                    self.medoid_dist[r.clone()].copy_from_slice(&dtilde);
                }
                for (q, &d) in r.clone().zip(dtilde.iter()) {
                    let bound = (d * size - total).abs();
                    if bound > self.sum_bounds[q] {
                        self.sum_bounds[q] = bound;
                    }
                }
            }
            let best = best.expect("non-empty cluster has a best member");
            let new_medoid = self.order[best];
            if new_medoid != self.medoids[c] {
                self.moved[c] = if incumbent_leads {
                    // d now holds distances from the new medoid
                    self.medoid_dist[r.start]
                } else {
                    metric.distance(self.medoids[c], new_medoid)
                };
                self.medoids[c] = new_medoid;
                changed = true;
            }
        }
        self.scratch = dtilde;
        if changed {
            let k = self.k;
            for bounds in self.medoid_bounds.chunks_exact_mut(k) {
                for (b, &p) in bounds.iter_mut().zip(&self.moved) {
                    *b = *b - p;
                }
            }
        }
        changed
    }

    /// Moves each element to its nearest medoid, computing a distance only
    /// when `l_c(i, k)(1 + ε)` does not exceed the current distance. Ends with
    /// contiguation and returns the round's fluxes.
    #[allow(clippy::needless_range_loop)]
    pub fn assign_to_clusters<M: Metric<T> + ?Sized>(&mut self, metric: &M) -> FluxAccumulators<T> {
        let k = self.k;
        let mut flux = FluxAccumulators::zeros(k);
        let guard = T::one() + T::from_f64_lossy(ROUNDING_GUARD);
        for pos in 0..self.n() {
            let bounds = &mut self.medoid_bounds[pos * k..(pos + 1) * k];
            let old = self.assignment[pos];
            let old_dist = self.medoid_dist[pos];
            bounds[old] = old_dist;
            let (mut a, mut d) = (old, old_dist);
            let id = self.order[pos];
            for c in 0..k {
                if c == a {
                    continue;
                }
                let lb = bounds[c] * self.relax;
                let reach = d * guard;
                if lb < reach || (lb <= reach && c < a) {
                    let exact = metric.distance(id, self.medoids[c]);
                    bounds[c] = exact;
                    if exact < d || (exact == d && c < a) {
                        a = c;
                        d = exact;
                    }
                }
            }
            if a != old {
                self.assignment[pos] = a;
                self.medoid_dist[pos] = d;
                self.counts[old] -= 1;
                self.counts[a] += 1;
                self.sum_bounds[pos] = T::zero();
                flux.n_in[a] += 1;
                flux.n_out[old] += 1;
                flux.s_in[a] = flux.s_in[a] + d;
                flux.s_out[old] = flux.s_out[old] + old_dist;
            }
        }
        self.recompute_offsets();
        self.contiguate();
        flux
    }

    /// Loosens every sum bound by the worst-case effect of the round's
    /// arrivals and departures, clamped at zero.
    pub fn update_sum_bounds(&mut self, flux: &FluxAccumulators<T>) {
        for c in 0..self.k {
            let abs_s = flux.s_in[c] + flux.s_out[c];
            let net_s = flux.s_in[c] - flux.s_out[c];
            let abs_n = T::from_usize_lossy(flux.n_in[c] + flux.n_out[c]);
            let net_n = T::from_usize_lossy(flux.n_in[c]) - T::from_usize_lossy(flux.n_out[c]);
            for pos in self.cluster_range(c) {
                let d = self.medoid_dist[pos];
                let drop = (abs_s - net_n * d).min(abs_n * d - net_s);
                self.sum_bounds[pos] = (self.sum_bounds[pos] - drop).max(T::zero());
            }
        }
    }
}

/// trikmeds with ε-relaxed bound tests. With ε = 0 the result (medoids,
/// assignments, objective, iterations) matches [`kmeds`](super::kmeds) from
/// the same initial medoids.
pub fn trikmeds<T: Scalar, M: Metric<T> + ?Sized>(
    metric: &M,
    init: &[usize],
    config: &TrikmedsConfig,
) -> Result<KMedoidsResult<T>> {
    trikmeds_observed(metric, init, config, |_, _| {})
}

/// [`trikmeds`] with a callback after every phase.
pub fn trikmeds_observed<T, M, F>(
    metric: &M,
    init: &[usize],
    config: &TrikmedsConfig,
    mut observer: F,
) -> Result<KMedoidsResult<T>>
where
    T: Scalar,
    M: Metric<T> + ?Sized,
    F: FnMut(Phase, &ClusterState<T>),
{
    let start = metric.counters().snapshot();
    let mut state = ClusterState::initialise(metric, init, config.epsilon)?;
    observer(Phase::Initialised, &state);
    let mut iterations = 0;
    while iterations < config.max_iters {
        iterations += 1;
        let changed = state.update_medoids(metric);
        observer(Phase::MedoidsUpdated, &state);
        if !changed {
            break;
        }
        let flux = state.assign_to_clusters(metric);
        observer(Phase::Assigned, &state);
        state.update_sum_bounds(&flux);
        state.refresh_cluster_sums();
        observer(Phase::SumBoundsUpdated, &state);
    }
    Ok(KMedoidsResult {
        medoids: state.medoids().to_vec(),
        assignments: state.assignments(),
        objective: state.objective(),
        iterations,
        distance_evals: metric.counters().snapshot().since(start).evals,
        empty_cluster_events: state.empty_cluster_events(),
    })
}
