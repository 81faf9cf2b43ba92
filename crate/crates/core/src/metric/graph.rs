use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fs;
use std::path::Path;

use super::{Counters, Metric};
use crate::{Error, Result, Scalar};

/// Edge list over nodes `0..n_nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    n_nodes: usize,
    edges: Vec<(usize, usize, T)>,
    directed: bool,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize, T)>, directed: bool) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::InvalidDataset(format!(
                    "edge ({u}, {v}) references a node outside 0..{n_nodes}"
                )));
            }
            if !(w.is_finite() && w >= T::zero()) {
                return Err(Error::InvalidDataset(format!("edge ({u}, {v}) has invalid weight {w}")));
            }
        }
        Ok(Self {
            n_nodes,
            edges,
            directed,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }
}

/// Parses an edge list: `u v` or `u v w` per line, `#` comments, weight 1
/// when omitted. The node count is one more than the largest id seen.
pub fn parse_graph<T: Scalar>(text: &str, directed: bool, path: &Path) -> Result<WeightedGraph<T>> {
    let mut edges = Vec::new();
    let mut max_id = None::<usize>;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(format!(
                "expected `u v` or `u v w`, found {} fields",
                fields.len()
            )));
        }
        let node = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(format!("invalid node id: {s:?}")))
        };
        let (u, v) = (node(fields[0])?, node(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<T>()
                .map_err(|_| parse_err(format!("invalid weight: {s:?}")))?,
            None => T::one(),
        };
        if !w.is_finite() || w < T::zero() {
            return Err(parse_err(format!("weight must be finite and nonnegative, got {w}")));
        }
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        edges.push((u, v, w));
    }
    let Some(max_id) = max_id else {
        return Err(Error::EmptyInput {
            path: path.to_path_buf(),
        });
    };
    WeightedGraph::new(max_id + 1, edges, directed)
}

pub fn load_graph<T: Scalar>(path: impl AsRef<Path>, directed: bool) -> Result<WeightedGraph<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(&text, directed, path)
}

/// Compressed adjacency.
#[derive(Debug, Clone)]
struct Csr<T> {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    fn build(n: usize, arcs: impl Iterator<Item = (usize, usize, T)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, _, _) in arcs.clone() {
            offsets[u + 1] += 1;
        }
        for k in 0..n {
            offsets[k + 1] += offsets[k];
        }
        let m = offsets[n];
        let mut fill = offsets.clone();
        let mut targets = vec![0; m];
        let mut weights = vec![T::zero(); m];
        for (u, v, w) in arcs {
            targets[fill[u]] = v;
            weights[fill[u]] = w;
            fill[u] += 1;
        }
        Self {
            offsets,
            targets,
            weights,
        }
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    fn reachable_from(&self, source: usize) -> Vec<bool> {
        let n = self.offsets.len() - 1;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Single-source shortest paths; unreachable nodes stay at infinity.
    /// With `target`, stops as soon as that node is settled.
    fn dijkstra(&self, source: usize, target: Option<usize>, dist: &mut [T]) {
        dist.fill(T::infinity());
        dist[source] = T::zero();
        let mut settled = vec![false; dist.len()];
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry {
            dist: T::zero(),
            node: source,
        });
        while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
            if settled[u] {
                continue;
            }
            settled[u] = true;
            if target == Some(u) {
                return;
            }
            for (v, w) in self.neighbors(u) {
                let candidate = d + w;
                if candidate < dist[v] {
                    dist[v] = candidate;
                    heap.push(HeapEntry {
                        dist: candidate,
                        node: v,
                    });
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry<T> {
    dist: T,
    node: usize,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    // Min-heap on distance, then node id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

fn undirected_arcs<T: Scalar>(g: &WeightedGraph<T>) -> impl Iterator<Item = (usize, usize, T)> + Clone + '_ {
    g.edges.iter().flat_map(|&(u, v, w)| [(u, v, w), (v, u, w)])
}

/// Accepts iff the graph is connected (undirected) or strongly connected
/// (directed). On rejection, reports one ordered pair with no path.
pub fn validate_connectivity<T: Scalar>(graph: &WeightedGraph<T>) -> Result<()> {
    let n = graph.n_nodes;
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let forward = if graph.directed {
        Csr::build(n, graph.edges.iter().copied())
    } else {
        Csr::build(n, undirected_arcs(graph))
    };
    if let Some(to) = forward.reachable_from(0).iter().position(|&r| !r) {
        return Err(Error::Disconnected { from: 0, to });
    }
    if graph.directed {
        let reverse = Csr::build(n, graph.edges.iter().map(|&(u, v, w)| (v, u, w)));
        if let Some(from) = reverse.reachable_from(0).iter().position(|&r| !r) {
            return Err(Error::Disconnected { from, to: 0 });
        }
    }
    Ok(())
}

/// Which distance a [`GraphOracle`] serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphView {
    /// Shortest path `i -> j` along edge directions.
    Directed,
    /// `(d(i, j) + d(j, i)) / 2`. Equal to `Directed` on undirected graphs.
    Symmetrized,
}

/// Shortest-path distances, one Dijkstra run per row (two for the
/// symmetrized view of a directed graph).
#[derive(Debug)]
pub struct GraphOracle<'a, T> {
    graph: &'a WeightedGraph<T>,
    view: GraphView,
    forward: Csr<T>,
    reverse: Option<Csr<T>>,
    counters: Counters,
}

impl<'a, T: Scalar> GraphOracle<'a, T> {
    /// Validates connectivity first, so every row is finite.
    pub fn new(graph: &'a WeightedGraph<T>, view: GraphView) -> Result<Self> {
        validate_connectivity(graph)?;
        Ok(Self::unchecked(graph, view))
    }

    /// Skips the connectivity check; [`graph_row`](Self::graph_row) then
    /// reports unreachable nodes as errors.
    pub fn unchecked(graph: &'a WeightedGraph<T>, view: GraphView) -> Self {
        let n = graph.n_nodes;
        let (forward, reverse) = if graph.directed {
            (
                Csr::build(n, graph.edges.iter().copied()),
                Some(Csr::build(n, graph.edges.iter().map(|&(u, v, w)| (v, u, w)))),
            )
        } else {
            (Csr::build(n, undirected_arcs(graph)), None)
        };
        Self {
            graph,
            view,
            forward,
            reverse,
            counters: Counters::default(),
        }
    }

    pub fn graph(&self) -> &'a WeightedGraph<T> {
        self.graph
    }

    pub fn view(&self) -> GraphView {
        self.view
    }

    fn symmetrizes(&self) -> bool {
        self.view == GraphView::Symmetrized && self.reverse.is_some()
    }

    fn fill_row(&self, i: usize, out: &mut [T]) {
        self.forward.dijkstra(i, None, out);
        if self.symmetrizes() {
            let mut back = vec![T::zero(); out.len()];
            self.reverse
                .as_ref()
                .expect("directed graph has reverse adjacency")
                .dijkstra(i, None, &mut back);
            let two = T::one() + T::one();
            for (o, b) in out.iter_mut().zip(back) {
                *o = (*o + b) / two;
            }
        }
    }

    /// Shortest-path row of `i` in this oracle's view. Counted as one row.
    pub fn graph_row(&self, i: usize) -> Result<Vec<T>> {
        let n = self.len();
        assert!(i < n, "node {i} out of range");
        let mut out = vec![T::zero(); n];
        self.fill_row(i, &mut out);
        self.counters.add_row(n as u64);
        match out.iter().position(|d| !d.is_finite()) {
            Some(target) => Err(Error::Unreachable { source_node: i, target }),
            None => Ok(out),
        }
    }

    /// Raw outgoing distances from `i`, regardless of view. Uncounted; for
    /// reporting only.
    pub fn directed_row(&self, i: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.len()];
        self.forward.dijkstra(i, None, &mut out);
        out
    }
}

impl<T: Scalar> Metric<T> for GraphOracle<'_, T> {
    fn len(&self) -> usize {
        self.graph.n_nodes
    }

    fn distance(&self, i: usize, j: usize) -> T {
        self.counters.add_evals(1);
        let mut buf = vec![T::zero(); self.len()];
        self.forward.dijkstra(i, Some(j), &mut buf);
        let there = buf[j];
        if self.symmetrizes() {
            self.forward.dijkstra(j, Some(i), &mut buf);
            (there + buf[i]) / (T::one() + T::one())
        } else {
            there
        }
    }

    fn row_into(&self, i: usize, out: &mut [T]) {
        assert_eq!(out.len(), self.len());
        self.fill_row(i, out);
        self.counters.add_row(out.len() as u64);
        debug_assert!(out.iter().all(|d| d.is_finite()), "unreachable node in validated graph");
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn is_symmetric(&self) -> bool {
        !self.graph.directed || self.view == GraphView::Symmetrized
    }
}
