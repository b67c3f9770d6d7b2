//! Immutable weighted graphs in CSR form and the operations every other
//! module builds on.

mod io;
mod ops;
mod sssp;

pub use io::{load_graph, load_graph_file, write_edge_list, LoadedGraph};
pub use ops::{connected_components, contract, induced_subgraph, Subgraph};
pub use sssp::{eccentricity_of, sssp, SsspResult};
pub(crate) use sssp::{distances_from, Dijkstra};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Undirected graph with strictly positive edge weights.
///
/// Adjacency lists are sorted by neighbor id and every edge is stored in
/// both directions with the same weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<S> {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<S>,
    edge_count: usize,
}

impl<S: Scalar> WeightedGraph<S> {
    /// Builds a graph on `n` vertices.
    ///
    /// Rejects out-of-range endpoints, self-loops, duplicate edges (in either
    /// orientation) and weights that are not finite and positive.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::Capacity(format!("{n} vertices exceed u32 ids")));
        }
        let mut list = Vec::new();
        let mut seen = HashSet::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            if !(w > S::zero()) || !w.is_finite() {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) has non-positive or non-finite weight {w}"
                )));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
            list.push((key.0, key.1, w));
        }
        Ok(Self::from_unique_edges(n, &list))
    }

    /// Assumes the edge list is already validated.
    pub(crate) fn from_unique_edges(n: usize, list: &[(usize, usize, S)]) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _) in list {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in degree.iter().take(n) {
            acc += d;
            offsets.push(acc);
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0u32; acc];
        let mut weights = vec![S::zero(); acc];
        for &(u, v, w) in list {
            neighbors[fill[u]] = v as u32;
            weights[fill[u]] = w;
            fill[u] += 1;
            neighbors[fill[v]] = u as u32;
            weights[fill[v]] = w;
            fill[v] += 1;
        }
        for x in 0..n {
            let (lo, hi) = (offsets[x], offsets[x + 1]);
            if hi - lo > 1 {
                let mut pairs: Vec<(u32, S)> = neighbors[lo..hi]
                    .iter()
                    .copied()
                    .zip(weights[lo..hi].iter().copied())
                    .collect();
                pairs.sort_unstable_by_key(|p| p.0);
                for (k, (y, w)) in pairs.into_iter().enumerate() {
                    neighbors[lo + k] = y;
                    weights[lo + k] = w;
                }
            }
        }
        WeightedGraph {
            offsets,
            neighbors,
            weights,
            edge_count: list.len(),
        }
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_unique_edges(n, &[])
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbor ids and weights of `v`, sorted by neighbor id.
    #[inline]
    pub fn adjacency(&self, v: usize) -> (&[u32], &[S]) {
        let (lo, hi) = (self.offsets[v], self.offsets[v + 1]);
        (&self.neighbors[lo..hi], &self.weights[lo..hi])
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        let (ns, ws) = self.adjacency(v);
        ns.iter().zip(ws).map(|(&u, &w)| (u as usize, w))
    }

    /// Weight of edge `uv`, if present.
    pub fn weight(&self, u: usize, v: usize) -> Option<S> {
        let (ns, ws) = self.adjacency(u);
        ns.binary_search(&(v as u32)).ok().map(|k| ws[k])
    }

    /// Every edge once, as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn min_weight(&self) -> Option<S> {
        self.weights.iter().copied().reduce(S::min)
    }

    pub fn max_weight(&self) -> Option<S> {
        self.weights.iter().copied().reduce(S::max)
    }

    pub fn csr_offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::domain(format!(
                "vertex {v} out of range (graph has {} vertices)",
                self.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Unweighted simple graph, used for cluster graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl SimpleGraph {
    /// Builds a simple graph, silently dropping self-loops and parallel edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) outside 0..{n}");
            if u != v {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            neighbors.extend(list);
            offsets.push(neighbors.len());
        }
        SimpleGraph { offsets, neighbors }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Subgraph induced by `keep` (sorted, deduplicated), relabelled densely.
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let mut local = vec![u32::MAX; self.vertex_count()];
        for (k, &v) in keep.iter().enumerate() {
            local[v] = k as u32;
        }
        let edges = keep.iter().enumerate().flat_map(|(k, &v)| {
            let local = &local;
            self.neighbors(v)
                .iter()
                .filter(move |&&u| local[u as usize] != u32::MAX)
                .map(move |&u| (k, local[u as usize] as usize))
        });
        SimpleGraph::from_edges(keep.len(), edges.collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_is_symmetric_and_sorted() {
        let g = WeightedGraph::from_edges(4, vec![(2, 0, 1.5), (0, 1, 2.0), (3, 2, 0.5)]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(*g.csr_offsets().last().unwrap(), 6);
        assert_eq!(g.adjacency(0).0, &[1, 2]);
        assert_eq!(g.weight(2, 0), Some(1.5));
        assert_eq!(g.weight(0, 2), Some(1.5));
        assert_eq!(g.weight(1, 3), None);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1, 2.0), (0, 2, 1.5), (2, 3, 0.5)]);
        assert!(g.offsets.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            WeightedGraph::from_edges(2, vec![(0, 1, -1.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            WeightedGraph::from_edges(2, vec![(0, 1, 0.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            WeightedGraph::from_edges(2, vec![(1, 1, 1.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            WeightedGraph::from_edges(2, vec![(0, 1, 2.0), (1, 0, 3.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            WeightedGraph::from_edges(2, vec![(0, 2, 1.0f64)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn simple_graph_dedups() {
        let h = SimpleGraph::from_edges(3, vec![(0, 1), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(1, 0));
        assert!(!h.has_edge(0, 2));
        let sub = h.induced(&[1, 2]);
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }
}
