//! Tree decompositions of cluster graphs.
//!
//! [`heuristic_decomposition`] builds a decomposition by min-fill
//! elimination, [`balance_binary`] reshapes any valid decomposition into a
//! binary one of logarithmic depth, and [`validate_decomposition`] checks the
//! two decomposition axioms plus the tree shape.

mod balance;
mod minfill;

pub use balance::{balance_binary, depth_bound, BalancedDecomposition};
pub use minfill::{elimination_order, heuristic_decomposition};

use serde::Serialize;

use crate::graph::SimpleGraph;

/// Rooted tree whose nodes carry bags of graph vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Sorted, duplicate-free.
    bags: Vec<Vec<u32>>,
}

impl TreeDecomposition {
    /// Assembles a decomposition from a parent array and bags. Bags are
    /// sorted and deduplicated; children are listed in increasing id order.
    pub fn from_parts(parent: Vec<Option<usize>>, bags: Vec<Vec<u32>>) -> Self {
        assert_eq!(parent.len(), bags.len(), "one bag per node");
        let mut children = vec![Vec::new(); parent.len()];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(t);
            }
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            parent,
            children,
            bags,
        }
    }

    /// A single node holding every vertex of a graph with `n` vertices.
    pub fn trivial(n: usize) -> Self {
        Self::from_parts(vec![None], vec![(0..n as u32).collect()])
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn bag(&self, t: usize) -> &[u32] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<u32>] {
        &self.bags
    }

    /// First node without a parent.
    pub fn root(&self) -> usize {
        self.parent
            .iter()
            .position(Option::is_none)
            .expect("decomposition has a root")
    }

    /// Largest bag size minus one (0 for empty bags).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Node depths, root at depth 0. Assumes a valid tree.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.node_count()];
        for t in self.top_down() {
            if let Some(p) = self.parent[t] {
                depth[t] = depth[p] + 1;
            }
        }
        depth
    }

    /// Height of the tree (0 for a single node).
    pub fn depth(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Nodes in breadth-first order from the root.
    pub fn top_down(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        if self.node_count() == 0 {
            return order;
        }
        order.push(self.root());
        let mut k = 0;
        while k < order.len() {
            let t = order[k];
            order.extend(self.children[t].iter().copied());
            k += 1;
        }
        order
    }

    pub fn contains(&self, t: usize, x: u32) -> bool {
        self.bags[t].binary_search(&x).is_ok()
    }
}

/// First decomposition axiom found violated, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Parent links do not form a single rooted tree.
    NotATree { detail: String },
    /// A bag mentions a vertex the graph does not have.
    UnknownVertex { node: usize, vertex: u32 },
    /// A vertex appears in no bag.
    MissingVertex { vertex: u32 },
    /// The bags containing `vertex` do not form a connected subtree.
    Disconnected { vertex: u32 },
    /// No bag contains both endpoints of an edge.
    UncoveredEdge { u: u32, v: u32 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotATree { detail } => write!(f, "not a rooted tree: {detail}"),
            Violation::UnknownVertex { node, vertex } => {
                write!(f, "node {node} holds unknown vertex {vertex}")
            }
            Violation::MissingVertex { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::Disconnected { vertex } => {
                write!(f, "bags containing vertex {vertex} are not connected")
            }
            Violation::UncoveredEdge { u, v } => write!(f, "edge ({u}, {v}) is in no bag"),
        }
    }
}

/// Checks that `td` is a tree decomposition of `h` with exactly one root.
pub fn validate_decomposition(h: &SimpleGraph, td: &TreeDecomposition) -> Result<(), Violation> {
    let nodes = td.node_count();
    if nodes == 0 {
        return Err(Violation::NotATree {
            detail: "no nodes".into(),
        });
    }
    let roots: Vec<usize> = (0..nodes).filter(|&t| td.parent[t].is_none()).collect();
    if roots.len() != 1 {
        return Err(Violation::NotATree {
            detail: format!("{} roots", roots.len()),
        });
    }
    for t in 0..nodes {
        if let Some(p) = td.parent[t] {
            if p >= nodes || !td.children[p].contains(&t) {
                return Err(Violation::NotATree {
                    detail: format!("bad parent link at node {t}"),
                });
            }
        }
    }
    let reached = td.top_down().len();
    if reached != nodes {
        return Err(Violation::NotATree {
            detail: format!("{} nodes unreachable from the root", nodes - reached),
        });
    }

    let n = h.vertex_count();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut links = vec![0usize; n];
    for t in 0..nodes {
        for &x in td.bag(t) {
            if x as usize >= n {
                return Err(Violation::UnknownVertex { node: t, vertex: x });
            }
            occurrences[x as usize].push(t);
            if let Some(p) = td.parent[t] {
                if td.contains(p, x) {
                    links[x as usize] += 1;
                }
            }
        }
    }
    for x in 0..n {
        if occurrences[x].is_empty() {
            return Err(Violation::MissingVertex { vertex: x as u32 });
        }
        // A forest on k nodes with k - 1 edges is a tree.
        if occurrences[x].len() != links[x] + 1 {
            return Err(Violation::Disconnected { vertex: x as u32 });
        }
    }
    for (u, v) in h.edges() {
        let (a, b) = if occurrences[u].len() <= occurrences[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        if !occurrences[a].iter().any(|&t| td.contains(t, b as u32)) {
            return Err(Violation::UncoveredEdge {
                u: u as u32,
                v: v as u32,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)))
    }

    #[test]
    fn accepts_path_decomposition() {
        let h = path_graph(3);
        let td = TreeDecomposition::from_parts(vec![None, Some(0)], vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(validate_decomposition(&h, &td), Ok(()));
        assert_eq!(td.width(), 1);
        assert_eq!(td.depth(), 1);
    }

    #[test]
    fn reports_uncovered_edge() {
        let h = path_graph(3);
        let td = TreeDecomposition::from_parts(vec![None, Some(0)], vec![vec![0, 1], vec![2]]);
        assert_eq!(
            validate_decomposition(&h, &td),
            Err(Violation::UncoveredEdge { u: 1, v: 2 })
        );
    }

    #[test]
    fn reports_disconnected_occurrences() {
        let h = path_graph(3);
        // Vertex 0 sits in nodes 0 and 2, separated by node 1.
        let td = TreeDecomposition::from_parts(
            vec![None, Some(0), Some(1)],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        );
        assert_eq!(
            validate_decomposition(&h, &td),
            Err(Violation::Disconnected { vertex: 0 })
        );
    }

    #[test]
    fn reports_shape_errors() {
        let h = path_graph(2);
        let two_roots = TreeDecomposition::from_parts(vec![None, None], vec![vec![0, 1], vec![1]]);
        assert!(matches!(
            validate_decomposition(&h, &two_roots),
            Err(Violation::NotATree { .. })
        ));
        let missing = TreeDecomposition::from_parts(vec![None], vec![vec![0]]);
        assert_eq!(
            validate_decomposition(&h, &missing),
            Err(Violation::MissingVertex { vertex: 1 })
        );
        let unknown = TreeDecomposition::from_parts(vec![None], vec![vec![0, 1, 5]]);
        assert_eq!(
            validate_decomposition(&h, &unknown),
            Err(Violation::UnknownVertex { node: 0, vertex: 5 })
        );
    }
}
