//! Radius-bounded clustering with a layering by distance from a root.
//!
//! Layers are `floor(d(root, v) / delta)`. Clusters are the connected pieces
//! of the shortest-path tree inside one layer; the center of a cluster is its
//! topmost tree vertex, so every member reaches the center through the
//! cluster along a tree path shorter than `delta`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    contract, induced_subgraph, sssp, Dijkstra, SimpleGraph, Subgraph, WeightedGraph,
};
use crate::scalar::{floor_steps, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering<S> {
    pub delta: S,
    pub root: usize,
    pub cluster_of: Vec<usize>,
    pub center: Vec<usize>,
    /// Layer per cluster. Only meaningful for clusterings produced by
    /// [`build_clustering`]; composed clusterings may carry per-part layers.
    pub layer: Vec<u32>,
}

/// One cluster, as dumped for debugging.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterRecord {
    pub id: usize,
    pub center: usize,
    pub layer: u32,
    pub members: Vec<usize>,
}

impl<S: Scalar> Clustering<S> {
    pub fn cluster_count(&self) -> usize {
        self.center.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn vertex_layer(&self, v: usize) -> u32 {
        self.layer[self.cluster_of[v]]
    }

    pub fn max_layer(&self) -> u32 {
        self.layer.iter().copied().max().unwrap_or(0)
    }

    /// Members of every cluster, each list sorted.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn records(&self) -> Vec<ClusterRecord> {
        self.members()
            .into_iter()
            .enumerate()
            .map(|(id, members)| ClusterRecord {
                id,
                center: self.center[id],
                layer: self.layer[id],
                members,
            })
            .collect()
    }

    /// Restriction to a subgraph that contains whole clusters only.
    ///
    /// Surviving clusters keep their relative order.
    pub fn restrict(&self, sub: &Subgraph<S>) -> Result<Clustering<S>> {
        let mut renum = vec![usize::MAX; self.cluster_count()];
        let mut size = vec![0usize; self.cluster_count()];
        for &v in &sub.to_parent {
            size[self.cluster_of[v]] += 1;
        }
        let full = self.members();
        let mut center = Vec::new();
        let mut layer = Vec::new();
        for (c, members) in full.iter().enumerate() {
            if size[c] == 0 {
                continue;
            }
            if size[c] != members.len() {
                return Err(Error::domain(format!(
                    "subgraph splits cluster {c}; restriction needs whole clusters"
                )));
            }
            renum[c] = center.len();
            center.push(sub.local(self.center[c]).expect("center inside whole cluster"));
            layer.push(self.layer[c]);
        }
        let cluster_of = sub
            .to_parent
            .iter()
            .map(|&v| renum[self.cluster_of[v]])
            .collect();
        Ok(Clustering {
            delta: self.delta,
            root: sub.local(self.root).unwrap_or(0),
            cluster_of,
            center,
            layer,
        })
    }

    /// Checks the partition and strong-radius properties against `g`.
    pub fn validate(&self, g: &WeightedGraph<S>) -> Result<()> {
        if self.cluster_of.len() != g.vertex_count() {
            return Err(Error::domain("clustering does not cover the graph"));
        }
        if self.layer.len() != self.center.len() {
            return Err(Error::domain("one layer per cluster expected"));
        }
        for (c, &z) in self.center.iter().enumerate() {
            if z >= g.vertex_count() || self.cluster_of[z] != c {
                return Err(Error::domain(format!("center of cluster {c} is not a member")));
            }
        }
        let mut dijkstra = Dijkstra::new();
        let mut dist = Vec::new();
        for (c, members) in self.members().iter().enumerate() {
            if members.is_empty() {
                return Err(Error::domain(format!("cluster {c} is empty")));
            }
            let sub = induced_subgraph(g, members);
            let src = sub.local(self.center[c]).expect("center is a member");
            dijkstra.run(&sub.graph, src, &mut dist, None);
            if let Some(k) = dist.iter().position(|&d| !(d <= self.delta)) {
                return Err(Error::domain(format!(
                    "vertex {} is {} from the center of cluster {c} (radius {})",
                    sub.to_parent[k], dist[k], self.delta
                )));
            }
        }
        Ok(())
    }
}

/// Clustering of a connected graph at radius `delta`, rooted at vertex 0.
pub fn build_clustering<S: Scalar>(g: &WeightedGraph<S>, delta: S) -> Result<Clustering<S>> {
    if !(delta > S::zero()) || !delta.is_finite() {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::domain("cannot cluster an empty graph"));
    }
    let root = 0;
    let tree = sssp(g, root)?;
    if tree.dist.iter().any(|d| d.is_infinite()) {
        return Err(Error::domain("clustering needs a connected graph"));
    }
    let vertex_layer: Vec<u32> = tree.dist.iter().map(|&d| floor_steps(d, delta)).collect();

    let mut children = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = tree.parent[v] {
            children[p].push(v);
        }
    }

    let mut cluster_of = vec![usize::MAX; n];
    let mut center = Vec::new();
    let mut layer = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let starts_cluster = match tree.parent[v] {
            None => true,
            Some(p) => vertex_layer[p] < vertex_layer[v],
        };
        if starts_cluster {
            cluster_of[v] = center.len();
            center.push(v);
            layer.push(vertex_layer[v]);
        } else {
            cluster_of[v] = cluster_of[tree.parent[v].expect("non-root")];
        }
        queue.extend(children[v].iter().copied());
    }

    Ok(Clustering {
        delta,
        root,
        cluster_of,
        center,
        layer,
    })
}

/// Graph obtained by contracting every cluster; vertex `i` is cluster `i`
/// and keeps `c.layer[i]`.
pub fn cluster_graph<S: Scalar>(g: &WeightedGraph<S>, c: &Clustering<S>) -> Result<SimpleGraph> {
    contract(g, &c.cluster_of)
}

/// Closed range of layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LayerInterval {
    pub lo: u32,
    pub hi: u32,
}

impl LayerInterval {
    pub fn contains(&self, layer: u32) -> bool {
        self.lo <= layer && layer <= self.hi
    }

    /// Number of layers covered.
    pub fn span(&self) -> u32 {
        self.hi + 1 - self.lo
    }
}

/// Subgraph induced by the vertices whose layer lies in `interval`.
pub fn interval_subgraph<S: Scalar>(
    g: &WeightedGraph<S>,
    c: &Clustering<S>,
    interval: LayerInterval,
) -> Subgraph<S> {
    let keep: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| interval.contains(c.vertex_layer(v)))
        .collect();
    induced_subgraph(g, &keep)
}

/// Layers that any shortest path between vertices on layers `layer_u` and
/// `layer_v` stays in, provided the two are within `p * delta` of each other.
///
/// Returns `None` when the layers differ by more than `p`, which certifies
/// that the distance exceeds `p * delta`.
pub fn distance_interval(layer_u: u32, layer_v: u32, p: u32) -> Option<LayerInterval> {
    let (a, b) = (layer_u.min(layer_v), layer_u.max(layer_v));
    if b - a > p {
        return None;
    }
    Some(LayerInterval {
        lo: b.saturating_sub(p),
        hi: a + p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph<f64> {
        WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn six_path_delta_two() {
        let g = path(6);
        let c = build_clustering(&g, 2.0).unwrap();
        let layers: Vec<u32> = (0..6).map(|v| c.vertex_layer(v)).collect();
        assert_eq!(layers, vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(c.members(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(c.center, vec![0, 2, 4]);
        c.validate(&g).unwrap();

        let h = cluster_graph(&g, &c).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

        let sub = interval_subgraph(&g, &c, LayerInterval { lo: 0, hi: 0 });
        assert_eq!(sub.to_parent, vec![0, 1]);
        let all = interval_subgraph(&g, &c, LayerInterval { lo: 0, hi: 9 });
        assert_eq!(all.graph, g);
        let none = interval_subgraph(&g, &c, LayerInterval { lo: 7, hi: 9 });
        assert_eq!(none.graph.vertex_count(), 0);
    }

    #[test]
    fn large_delta_gives_single_cluster() {
        let g = path(5);
        let c = build_clustering(&g, 4.5).unwrap();
        assert_eq!(c.cluster_count(), 1);
        assert_eq!(c.center, vec![0]);
        assert_eq!(c.layer, vec![0]);
        assert_eq!(cluster_graph(&g, &c).unwrap().vertex_count(), 1);
    }

    #[test]
    fn single_vertex() {
        let g = WeightedGraph::<f64>::empty(1);
        let c = build_clustering(&g, 1.0).unwrap();
        assert_eq!(c.cluster_of, vec![0]);
        assert_eq!(c.center, vec![0]);
    }

    #[test]
    fn rejects_disconnected_and_bad_delta() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(build_clustering(&g, 1.0), Err(Error::Domain(_))));
        assert!(matches!(build_clustering(&path(3), 0.0), Err(Error::Domain(_))));
        assert!(matches!(build_clustering(&path(3), -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_interval_examples() {
        assert_eq!(distance_interval(3, 3, 1), Some(LayerInterval { lo: 2, hi: 4 }));
        assert_eq!(distance_interval(2, 5, 3), Some(LayerInterval { lo: 2, hi: 5 }));
        assert_eq!(distance_interval(5, 2, 3), Some(LayerInterval { lo: 2, hi: 5 }));
        assert_eq!(distance_interval(0, 1, 2), Some(LayerInterval { lo: 0, hi: 2 }));
        assert_eq!(distance_interval(0, 4, 3), None);
        let i = distance_interval(7, 9, 4).unwrap();
        assert!(i.span() <= 2 * 4 + 1);
    }

    #[test]
    fn restrict_keeps_whole_clusters() {
        let g = path(6);
        let c = build_clustering(&g, 2.0).unwrap();
        let sub = interval_subgraph(&g, &c, LayerInterval { lo: 1, hi: 2 });
        let r = c.restrict(&sub).unwrap();
        assert_eq!(r.cluster_of, vec![0, 0, 1, 1]);
        assert_eq!(r.center, vec![0, 2]);
        assert_eq!(r.layer, vec![1, 2]);
        r.validate(&sub.graph).unwrap();

        let split = induced_subgraph(&g, &[0, 2, 3]);
        assert!(c.restrict(&split).is_err());
    }
}
