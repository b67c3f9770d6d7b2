use std::collections::VecDeque;

use super::{SimpleGraph, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An induced subgraph together with its id translation.
#[derive(Debug, Clone)]
pub struct Subgraph<S> {
    pub graph: WeightedGraph<S>,
    /// Parent-graph id of each local vertex, strictly increasing.
    pub to_parent: Vec<usize>,
}

impl<S: Scalar> Subgraph<S> {
    /// Local id of parent vertex `v`, if it belongs to the subgraph.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.to_parent.binary_search(&v).ok()
    }
}

/// Subgraph induced by `vertices` (order and duplicates are ignored).
pub fn induced_subgraph<S: Scalar>(g: &WeightedGraph<S>, vertices: &[usize]) -> Subgraph<S> {
    let mut to_parent: Vec<usize> = vertices.to_vec();
    to_parent.sort_unstable();
    to_parent.dedup();
    let mut local = vec![u32::MAX; g.vertex_count()];
    for (k, &v) in to_parent.iter().enumerate() {
        local[v] = k as u32;
    }
    let mut edges = Vec::new();
    for (k, &v) in to_parent.iter().enumerate() {
        for (u, w) in g.neighbors(v) {
            let lu = local[u];
            if lu != u32::MAX && (lu as usize) > k {
                edges.push((k, lu as usize, w));
            }
        }
    }
    Subgraph {
        graph: WeightedGraph::from_unique_edges(to_parent.len(), &edges),
        to_parent,
    }
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components<S: Scalar>(g: &WeightedGraph<S>) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(x) = queue.pop_front() {
            comp.push(x);
            for (y, _) in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Contracts every block of `part` to one vertex.
///
/// `part[v]` is the block of `v`; blocks must be numbered `0..b` without gaps
/// and each must induce a connected subgraph.
pub fn contract<S: Scalar>(g: &WeightedGraph<S>, part: &[usize]) -> Result<SimpleGraph> {
    let n = g.vertex_count();
    if part.len() != n {
        return Err(Error::domain(format!(
            "partition covers {} vertices, graph has {n}",
            part.len()
        )));
    }
    let blocks = part.iter().copied().max().map_or(0, |b| b + 1);
    let mut size = vec![0usize; blocks];
    for &b in part {
        size[b] += 1;
    }
    if let Some(b) = size.iter().position(|&s| s == 0) {
        return Err(Error::domain(format!("block {b} is empty")));
    }

    // Each block must be reachable from its first vertex without leaving it.
    let mut reached = vec![0usize; blocks];
    let mut started = vec![false; blocks];
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for s in 0..n {
        let b = part[s];
        if started[b] {
            continue;
        }
        started[b] = true;
        seen[s] = true;
        stack.push(s);
        while let Some(x) = stack.pop() {
            reached[b] += 1;
            for (y, _) in g.neighbors(x) {
                if !seen[y] && part[y] == b {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if reached[b] != size[b] {
            return Err(Error::domain(format!("block {b} is not connected")));
        }
    }

    let edges = g
        .edges()
        .filter(|&(u, v, _)| part[u] != part[v])
        .map(|(u, v, _)| (part[u], part[v]));
    Ok(SimpleGraph::from_edges(blocks, edges.collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph<f64> {
        WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn contract_identity_is_isomorphic() {
        let g = path(5);
        let h = contract(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn contract_everything_to_one_vertex() {
        let h = contract(&path(4), &[0; 4]).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn contract_six_path_pairs() {
        let h = contract(&path(6), &[0, 0, 1, 1, 2, 2]).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn contract_rejects_disconnected_block() {
        assert!(matches!(
            contract(&path(3), &[0, 1, 0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn induced_on_cycle() {
        let c4 = WeightedGraph::from_edges(
            4,
            vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (3, 0, 4.0)],
        )
        .unwrap();
        let sub = induced_subgraph(&c4, &[2, 1, 3]);
        assert_eq!(sub.to_parent, vec![1, 2, 3]);
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), vec![(0, 1, 2.0), (1, 2, 3.0)]);
        assert_eq!(sub.local(3), Some(2));
        assert_eq!(sub.local(0), None);

        let single = induced_subgraph(&c4, &[0]);
        assert_eq!(single.graph.vertex_count(), 1);
        assert_eq!(single.graph.edge_count(), 0);
        assert_eq!(induced_subgraph(&c4, &[]).graph.vertex_count(), 0);
        assert_eq!(induced_subgraph(&c4, &[0, 1, 2, 3]).graph, c4);
    }

    #[test]
    fn components() {
        let g = WeightedGraph::from_edges(4, vec![(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(connected_components(&g), vec![vec![0, 1], vec![2, 3]]);
        let e = WeightedGraph::<f64>::empty(3);
        assert_eq!(connected_components(&e), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(connected_components(&path(4)).len(), 1);
    }
}
