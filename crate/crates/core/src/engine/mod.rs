//! Additive distance oracle and eccentricity queries over a balanced tree
//! decomposition of a cluster graph.
//!
//! For a decomposition node `t`, `V_t` is the set of vertices whose cluster
//! first appears (closest to the root) somewhere in the subtree of `t`. For
//! each cluster `i` first appearing at `t` the oracle stores the exact
//! distance from the center of `i` to every vertex of `V_t`, measured inside
//! `G[V_t]`.
//!
//! These tables are stored per vertex rather than per node: a vertex `v` keeps
//! one entry for every cluster owned by a node on the path from the root to
//! the node owning `v`'s cluster, ordered root first. Two vertices then share
//! a common prefix of entries for exactly the nodes that are ancestors of both,
//! and a distance query is a min-plus scan over that prefix.

mod ecc;

pub use ecc::{
    all_eccentricities, approx_diameter, approx_radius, run_eccentricities, EccentricityEstimate,
    EccentricityRun, PipelineStats,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::{cluster_graph, Clustering};
use crate::coreset::greedy_rows;
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Dijkstra, WeightedGraph};
use crate::scalar::Scalar;
use crate::treewidth::{validate_decomposition, BalancedDecomposition};

/// What to precompute for eccentricity queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoresetMode {
    /// Greedy core-sets at twice the oracle error.
    Greedy,
    /// Keep every vertex of every `V_t`; exact scan, quadratic memory.
    Exhaustive,
    /// Distance queries only.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineOptions {
    pub coresets: CoresetMode,
    /// Validate the decomposition against the cluster graph at build time.
    pub validate: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            coresets: CoresetMode::Greedy,
            validate: true,
        }
    }
}

/// Core-set of `V_t` with cached approximate distances from each member to
/// the centers of the clusters in the parent bag.
#[derive(Debug, Clone, Default)]
pub(crate) struct NodeCoreset<S> {
    /// Global vertex ids, increasing.
    pub(crate) members: Vec<usize>,
    /// Row-major `members.len() x parent_bag.len()`.
    pub(crate) tuples: Vec<S>,
}

/// Sizes measured at build time.
#[derive(Debug, Clone, Serialize)]
pub struct EngineStats {
    pub vertices: usize,
    pub clusters: usize,
    pub nodes: usize,
    pub width: usize,
    pub depth: usize,
    /// Sum of `|V_t|` over all nodes.
    pub sum_vt: usize,
    /// Stored distance entries (equals the number of valid triples).
    pub table_entries: usize,
    pub coreset_total: usize,
    pub coreset_max: usize,
}

#[derive(Debug, Clone)]
pub struct EngineOracle<S> {
    delta: S,
    clustering: Clustering<S>,
    decomposition: BalancedDecomposition,
    node_depth: Vec<usize>,
    /// Shallowest node whose bag holds each cluster.
    loc: Vec<usize>,
    /// Clusters with `loc == t`, increasing.
    owned: Vec<Vec<usize>>,
    /// Label positions `prefix_end[parent(t)]..prefix_end[t]` belong to `t`.
    prefix_end: Vec<usize>,
    /// Position of each cluster inside the labels that contain it.
    label_pos: Vec<usize>,
    label_offsets: Vec<usize>,
    labels: Vec<S>,
    coresets: Vec<NodeCoreset<S>>,
    mode: CoresetMode,
    stats: EngineStats,
}

/// Builds the oracle with default options.
pub fn build_engine<S: Scalar>(
    g: &WeightedGraph<S>,
    clustering: Clustering<S>,
    decomposition: BalancedDecomposition,
) -> Result<EngineOracle<S>> {
    build_engine_with(g, clustering, decomposition, EngineOptions::default())
}

pub fn build_engine_with<S: Scalar>(
    g: &WeightedGraph<S>,
    clustering: Clustering<S>,
    decomposition: BalancedDecomposition,
    options: EngineOptions,
) -> Result<EngineOracle<S>> {
    let n = g.vertex_count();
    let k = clustering.cluster_count();
    if clustering.cluster_of.len() != n {
        return Err(Error::domain(format!(
            "clustering covers {} vertices, graph has {n}",
            clustering.cluster_of.len()
        )));
    }
    if clustering
        .center
        .iter()
        .enumerate()
        .any(|(i, &c)| c >= n || clustering.cluster_of[c] != i)
    {
        return Err(Error::domain("cluster centers do not belong to their clusters"));
    }
    let tree = &decomposition.tree;
    if options.validate {
        let h = cluster_graph(g, &clustering)?;
        if h.vertex_count() != k {
            return Err(Error::domain("clustering has empty clusters"));
        }
        validate_decomposition(&h, tree).map_err(|v| {
            Error::domain(format!("decomposition does not fit the cluster graph: {v}"))
        })?;
    }

    let nodes = tree.node_count();
    let node_depth = tree.depths();
    let mut loc = vec![usize::MAX; k];
    for t in tree.top_down() {
        for &i in tree.bag(t) {
            let i = i as usize;
            if i >= k {
                return Err(Error::domain(format!("bag {t} names unknown cluster {i}")));
            }
            if loc[i] == usize::MAX {
                loc[i] = t;
            }
        }
    }
    if let Some(i) = loc.iter().position(|&t| t == usize::MAX) {
        return Err(Error::domain(format!("cluster {i} is in no bag")));
    }

    let mut owned = vec![Vec::new(); nodes];
    for (i, &t) in loc.iter().enumerate() {
        owned[t].push(i);
    }
    let mut prefix_end = vec![0usize; nodes];
    let mut label_pos = vec![0usize; k];
    for t in tree.top_down() {
        let start = tree.parent(t).map_or(0, |p| prefix_end[p]);
        for (q, &i) in owned[t].iter().enumerate() {
            label_pos[i] = start + q;
        }
        prefix_end[t] = start + owned[t].len();
    }

    // V_t: every vertex joins all nodes on its owner's root path.
    let mut vt: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for v in 0..n {
        let mut t = Some(loc[clustering.cluster_of[v]]);
        while let Some(x) = t {
            vt[x].push(v);
            t = tree.parent(x);
        }
    }
    let sum_vt: usize = vt.iter().map(Vec::len).sum();
    let depth = decomposition.depth;
    if sum_vt > (depth + 1) * n {
        return Err(Error::invariant(format!(
            "sum of |V_t| is {sum_vt}, above (depth + 1) * n = {}",
            (depth + 1) * n
        )));
    }

    let mut label_offsets = Vec::with_capacity(n + 1);
    label_offsets.push(0);
    for v in 0..n {
        let len = prefix_end[loc[clustering.cluster_of[v]]];
        label_offsets.push(label_offsets[v] + len);
    }
    let mut labels = vec![S::infinity(); label_offsets[n]];

    // One Dijkstra per owned cluster, inside G[V_t].
    let tables: Vec<Vec<Vec<S>>> = (0..nodes)
        .into_par_iter()
        .map_init(Dijkstra::new, |dijkstra, t| {
            if owned[t].is_empty() {
                return Vec::new();
            }
            let sub = induced_subgraph(g, &vt[t]);
            owned[t]
                .iter()
                .map(|&i| {
                    let src = sub.local(clustering.center[i]).expect("center lies in V_t");
                    let mut dist = Vec::new();
                    dijkstra.run(&sub.graph, src, &mut dist, None);
                    dist
                })
                .collect()
        })
        .collect();
    for (t, per_cluster) in tables.into_iter().enumerate() {
        for (q, dist) in per_cluster.into_iter().enumerate() {
            let pos = label_pos[owned[t][q]];
            for (x, d) in dist.into_iter().enumerate() {
                labels[label_offsets[vt[t][x]] + pos] = d;
            }
        }
    }

    let mut oracle = EngineOracle {
        delta: clustering.delta,
        stats: EngineStats {
            vertices: n,
            clusters: k,
            nodes,
            width: decomposition.width(),
            depth,
            sum_vt,
            table_entries: labels.len(),
            coreset_total: 0,
            coreset_max: 0,
        },
        clustering,
        decomposition,
        node_depth,
        loc,
        owned,
        prefix_end,
        label_pos,
        label_offsets,
        labels,
        coresets: Vec::new(),
        mode: options.coresets,
    };
    if options.coresets != CoresetMode::Skip {
        oracle.coresets = oracle.build_coresets(&vt, options.coresets);
        oracle.stats.coreset_total = oracle.coresets.iter().map(|c| c.members.len()).sum();
        oracle.stats.coreset_max = oracle
            .coresets
            .iter()
            .map(|c| c.members.len())
            .max()
            .unwrap_or(0);
    }
    Ok(oracle)
}

/// `min_k a[k] + b[k]` over the common length.
#[inline]
pub(crate) fn min_plus<S: Scalar>(a: &[S], b: &[S]) -> S {
    const LANES: usize = 8;
    let len = a.len().min(b.len());
    let (a, b) = (&a[..len], &b[..len]);
    // Independent lanes let the compiler vectorize the reduction.
    let mut acc = [S::infinity(); LANES];
    let mut ca = a.chunks_exact(LANES);
    let mut cb = b.chunks_exact(LANES);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for l in 0..LANES {
            let s = x[l] + y[l];
            acc[l] = if s < acc[l] { s } else { acc[l] };
        }
    }
    let mut best = S::infinity();
    for (&x, &y) in ca.remainder().iter().zip(cb.remainder()) {
        let s = x + y;
        if s < best {
            best = s;
        }
    }
    for v in acc {
        if v < best {
            best = v;
        }
    }
    best
}

impl<S: Scalar> EngineOracle<S> {
    pub fn delta(&self) -> S {
        self.delta
    }

    pub fn clustering(&self) -> &Clustering<S> {
        &self.clustering
    }

    pub fn decomposition(&self) -> &BalancedDecomposition {
        &self.decomposition
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    pub fn vertex_count(&self) -> usize {
        self.clustering.cluster_of.len()
    }

    /// Shallowest decomposition node whose bag holds cluster `i`.
    pub fn loc(&self, cluster: usize) -> usize {
        self.loc[cluster]
    }

    /// Node owning the cluster of `v`.
    pub fn vertex_loc(&self, v: usize) -> usize {
        self.loc[self.clustering.cluster_of[v]]
    }

    /// `V_t`: vertices whose owning node lies in the subtree of `t`.
    pub fn vt_members(&self, t: usize) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.is_ancestor(t, self.vertex_loc(v)))
            .collect()
    }

    /// Stored distance from the center of cluster `i` to `v` inside
    /// `G[V_t]`, for valid triples `(t, i, v)` only.
    pub fn inner_dist(&self, t: usize, cluster: usize, v: usize) -> Option<S> {
        if self.loc.get(cluster) != Some(&t) || v >= self.vertex_count() {
            return None;
        }
        if !self.is_ancestor(t, self.vertex_loc(v)) {
            return None;
        }
        Some(self.label(v)[self.label_pos[cluster]])
    }

    pub(crate) fn label(&self, v: usize) -> &[S] {
        &self.labels[self.label_offsets[v]..self.label_offsets[v + 1]]
    }

    /// Whether `a` is `b` or an ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        while self.node_depth[b] > self.node_depth[a] {
            b = self.decomposition.tree.parent(b).expect("non-root");
        }
        a == b
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let tree = &self.decomposition.tree;
        while self.node_depth[a] > self.node_depth[b] {
            a = tree.parent(a).expect("non-root");
        }
        while self.node_depth[b] > self.node_depth[a] {
            b = tree.parent(b).expect("non-root");
        }
        while a != b {
            a = tree.parent(a).expect("non-root");
            b = tree.parent(b).expect("non-root");
        }
        a
    }

    /// Approximate distance, never below the true one and at most `2 * delta`
    /// above it when the graph is connected. Infinite when no stored walk
    /// joins the two vertices. Panics on out-of-range ids.
    pub fn apx_dist(&self, u: usize, v: usize) -> S {
        self.apx_dist_counted(u, v).0
    }

    /// [`apx_dist`](Self::apx_dist) plus the number of table pairs inspected.
    pub fn apx_dist_counted(&self, u: usize, v: usize) -> (S, usize) {
        if u == v {
            return (S::zero(), 0);
        }
        let l = self.lca(self.vertex_loc(u), self.vertex_loc(v));
        let len = self.prefix_end[l];
        (min_plus(&self.label(u)[..len], &self.label(v)[..len]), len)
    }

    /// Distance estimate from `v` to the center of `cluster`, where the
    /// cluster is owned by an ancestor of `v`'s owning node.
    pub(crate) fn apx_to_ancestor_center(&self, v: usize, label_v: &[S], cluster: usize) -> S {
        let c = self.clustering.center[cluster];
        if c == v {
            return S::zero();
        }
        let len = self.prefix_end[self.loc[cluster]];
        min_plus(&label_v[..len], &self.label(c)[..len])
    }

    /// Distance estimates from `v` to the center of every cluster in the
    /// parent bag of some node on `v`'s root path, sorted by cluster. Bags
    /// along a path overlap heavily, so each estimate is computed once.
    fn terminal_estimates(&self, v: usize, seen: &mut [usize]) -> Vec<(u32, S)> {
        let tree = &self.decomposition.tree;
        let label = self.label(v);
        let mut out = Vec::new();
        let mut t = self.vertex_loc(v);
        while let Some(p) = tree.parent(t) {
            for &s in tree.bag(p) {
                if seen[s as usize] != v {
                    seen[s as usize] = v;
                    out.push((s, self.apx_to_ancestor_center(v, label, s as usize)));
                }
            }
            t = p;
        }
        out.sort_unstable_by_key(|&(s, _)| s);
        out
    }

    fn build_coresets(&self, vt: &[Vec<usize>], mode: CoresetMode) -> Vec<NodeCoreset<S>> {
        let tree = &self.decomposition.tree;
        let threshold = S::of(2.0) * self.delta;
        let k = self.clustering.cluster_count();
        let estimates: Vec<Vec<(u32, S)>> = (0..self.vertex_count())
            .into_par_iter()
            .map_init(
                || vec![usize::MAX; k],
                |seen, v| self.terminal_estimates(v, seen),
            )
            .collect();
        let lookup = |v: usize, s: u32| {
            let list = &estimates[v];
            list[list.partition_point(|&(x, _)| x < s)].1
        };
        (0..tree.node_count())
            .into_par_iter()
            .map(|t| {
                let Some(p) = tree.parent(t) else {
                    return NodeCoreset::default();
                };
                let terminals = tree.bag(p);
                let k = terminals.len();
                let mut rows = Vec::with_capacity(vt[t].len() * k);
                for &v in &vt[t] {
                    rows.extend(terminals.iter().map(|&s| lookup(v, s)));
                }
                let picked: Vec<usize> = match mode {
                    CoresetMode::Greedy => {
                        let views: Vec<&[S]> = if k == 0 {
                            vec![&[][..]; vt[t].len()]
                        } else {
                            rows.chunks(k).collect()
                        };
                        greedy_rows(&views, threshold)
                    }
                    _ => (0..vt[t].len()).collect(),
                };
                let mut tuples = Vec::with_capacity(picked.len() * k);
                for &r in &picked {
                    tuples.extend_from_slice(&rows[r * k..(r + 1) * k]);
                }
                NodeCoreset {
                    members: picked.iter().map(|&r| vt[t][r]).collect(),
                    tuples,
                }
            })
            .collect()
    }

    /// Core-set members of node `t` (empty for the root).
    pub fn coreset(&self, t: usize) -> &[usize] {
        self.coresets.get(t).map_or(&[], |c| &c.members[..])
    }

    pub fn coreset_mode(&self) -> CoresetMode {
        self.mode
    }
}
