//! Binary-heap Dijkstra.
//!
//! Vertices with equal tentative distance are settled in increasing id order
//! and a parent is only replaced on strict improvement, so results are fully
//! deterministic. Weights whose sums nearly tie may still resolve differently
//! than exact arithmetic would.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::WeightedGraph;
use crate::error::Result;
use crate::scalar::Scalar;

/// Shortest-path distances and tree from one source.
#[derive(Debug, Clone, PartialEq)]
pub struct SsspResult<S> {
    pub source: usize,
    /// `S::infinity()` marks unreachable vertices.
    pub dist: Vec<S>,
    pub parent: Vec<Option<usize>>,
}

impl<S: Scalar> SsspResult<S> {
    pub fn is_reachable(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Largest finite distance, or infinity if some vertex is unreachable.
    pub fn eccentricity(&self) -> S {
        self.dist.iter().copied().fold(S::zero(), S::max)
    }

    /// Vertex realizing the eccentricity (smallest id on ties).
    pub fn farthest(&self) -> usize {
        let mut best = self.source;
        for (v, &d) in self.dist.iter().enumerate() {
            if d > self.dist[best] {
                best = v;
            }
        }
        best
    }
}

#[derive(Clone, Copy)]
struct Item<S> {
    dist: S,
    vertex: u32,
}

impl<S: Scalar> PartialEq for Item<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Item<S> {}

impl<S: Scalar> PartialOrd for Item<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Item<S> {
    // Reversed so that `BinaryHeap` pops the smallest (dist, vertex).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Reusable Dijkstra workspace.
pub(crate) struct Dijkstra<S> {
    heap: BinaryHeap<Item<S>>,
    settled: Vec<bool>,
}

impl<S: Scalar> Dijkstra<S> {
    pub(crate) fn new() -> Self {
        Dijkstra {
            heap: BinaryHeap::new(),
            settled: Vec::new(),
        }
    }

    /// Fills `dist` (and `parent`, if given) for a run from `source`.
    pub(crate) fn run(
        &mut self,
        g: &WeightedGraph<S>,
        source: usize,
        dist: &mut Vec<S>,
        mut parent: Option<&mut Vec<Option<usize>>>,
    ) {
        let n = g.vertex_count();
        dist.clear();
        dist.resize(n, S::infinity());
        if let Some(p) = parent.as_deref_mut() {
            p.clear();
            p.resize(n, None);
        }
        self.settled.clear();
        self.settled.resize(n, false);
        self.heap.clear();

        dist[source] = S::zero();
        self.heap.push(Item {
            dist: S::zero(),
            vertex: source as u32,
        });
        while let Some(Item { dist: d, vertex }) = self.heap.pop() {
            let x = vertex as usize;
            if self.settled[x] {
                continue;
            }
            self.settled[x] = true;
            let (ns, ws) = g.adjacency(x);
            for (&y, &w) in ns.iter().zip(ws) {
                let y = y as usize;
                if self.settled[y] {
                    continue;
                }
                let nd = d + w;
                if nd < dist[y] {
                    dist[y] = nd;
                    if let Some(p) = parent.as_deref_mut() {
                        p[y] = Some(x);
                    }
                    self.heap.push(Item {
                        dist: nd,
                        vertex: y as u32,
                    });
                }
            }
        }
    }
}

/// Exact single-source shortest paths.
pub fn sssp<S: Scalar>(g: &WeightedGraph<S>, source: usize) -> Result<SsspResult<S>> {
    g.check_vertex(source)?;
    let mut dist = Vec::new();
    let mut parent = Vec::new();
    Dijkstra::new().run(g, source, &mut dist, Some(&mut parent));
    Ok(SsspResult {
        source,
        dist,
        parent,
    })
}

pub(crate) fn distances_from<S: Scalar>(g: &WeightedGraph<S>, source: usize) -> Vec<S> {
    let mut dist = Vec::new();
    Dijkstra::new().run(g, source, &mut dist, None);
    dist
}

/// Exact eccentricity of `v`; infinite when the graph is disconnected.
pub fn eccentricity_of<S: Scalar>(g: &WeightedGraph<S>, v: usize) -> Result<S> {
    Ok(sssp(g, v)?.eccentricity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn path3() -> WeightedGraph<f64> {
        WeightedGraph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_distances() {
        let r = sssp(&path3(), 0).unwrap();
        assert_eq!(r.dist, vec![0.0, 1.0, 2.0]);
        assert_eq!(r.parent, vec![None, Some(0), Some(1)]);
        assert_eq!(r.eccentricity(), 2.0);
        assert_eq!(r.farthest(), 2);
    }

    #[test]
    fn triangle_relaxes_through_middle() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        let r = sssp(&g, 0).unwrap();
        assert_eq!(r.dist[2], 2.0);
        assert_eq!(r.parent[2], Some(1));
    }

    #[test]
    fn unreachable_is_infinite() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0f32)]).unwrap();
        let r = sssp(&g, 0).unwrap();
        assert!(r.dist[2].is_infinite());
        assert_eq!(r.parent[2], None);
        assert!(r.eccentricity().is_infinite());
    }

    #[test]
    fn source_out_of_range() {
        assert!(matches!(sssp(&path3(), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn equal_keys_prefer_smaller_parent() {
        // 0-1 (1), 0-2 (1), 1-3 (1), 2-3 (1): vertex 3 reached first via 1.
        let g = WeightedGraph::from_edges(
            4,
            vec![(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let r = sssp(&g, 0).unwrap();
        assert_eq!(r.parent[3], Some(1));
    }
}
