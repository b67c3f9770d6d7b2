//! Diameter of graphs that become well behaved after deleting a few apices.
//!
//! [`diam_reduction`] rewires a graph around its apex set so that every
//! component left after removing the apices has bounded strong diameter,
//! while the diameter is preserved up to `1 + eps` (given a guess `D` of
//! it). [`apx_step`] runs the eccentricity engine on the rewired graph and
//! [`apex_diameter`] scans guesses in `[D0, 2 * D0]`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::{build_clustering, cluster_graph, Clustering};
use crate::engine::{approx_diameter, build_engine_with, EngineOptions};
use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, sssp, Dijkstra, WeightedGraph};
use crate::scalar::Scalar;
use crate::treewidth::{balance_binary, heuristic_decomposition, TreeDecomposition};

/// A graph together with its apex set.
#[derive(Debug, Clone)]
pub struct ApexInput<S> {
    pub graph: WeightedGraph<S>,
    /// Sorted, without duplicates.
    pub apices: Vec<usize>,
}

impl<S: Scalar> ApexInput<S> {
    pub fn new(graph: WeightedGraph<S>, mut apices: Vec<usize>) -> Result<Self> {
        apices.sort_unstable();
        apices.dedup();
        if let Some(&a) = apices.iter().find(|&&a| a >= graph.vertex_count()) {
            return Err(Error::domain(format!(
                "apex {a} out of range (graph has {} vertices)",
                graph.vertex_count()
            )));
        }
        Ok(ApexInput { graph, apices })
    }

    fn check_connected(&self) -> Result<()> {
        if self.graph.vertex_count() == 0 {
            return Err(Error::domain("graph has no vertices"));
        }
        if !self.graph.is_connected() {
            return Err(Error::InfiniteDiameter);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The diameter certainly exceeds `D`.
    DiamExceedsD,
    /// The diameter is at most `(1 + eps) * D`.
    DiamAtMost,
}

/// Rewired graph produced by [`diam_reduction`].
#[derive(Debug, Clone)]
pub struct Reduced<S> {
    pub graph: WeightedGraph<S>,
    pub apices: Vec<usize>,
    /// Apex shortcut edges `(a, v, d(a, v))` inserted or lowered.
    pub added_edges: Vec<(usize, usize, S)>,
    /// Edges dropped, both the overweight ones and those touching `far`.
    pub removed_edges: Vec<(usize, usize, S)>,
    /// One vertex per relevant signature, smallest id first.
    pub representatives: Vec<usize>,
    /// Non-apex vertices farther than `3D` from every representative.
    pub far: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum ReductionResult<S> {
    DiamExceedsD { reason: String },
    Reduced(Reduced<S>),
}

impl<S: Scalar> ReductionResult<S> {
    pub fn reduced(&self) -> Option<&Reduced<S>> {
        match self {
            ReductionResult::Reduced(r) => Some(r),
            ReductionResult::DiamExceedsD { .. } => None,
        }
    }
}

fn check_params<S: Scalar>(d: S, eps: S) -> Result<()> {
    if !(d > S::zero()) || !d.is_finite() {
        return Err(Error::domain(format!("diameter guess must be positive, got {d}")));
    }
    if !(eps > S::zero()) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Distances in `g` from `source`, ignoring every vertex flagged in `skip`.
fn distances_avoiding<S: Scalar>(
    g: &WeightedGraph<S>,
    skip: &[bool],
    source: usize,
) -> Vec<S> {
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| !skip[v]).collect();
    let sub = induced_subgraph(g, &keep);
    let mut local = Vec::new();
    Dijkstra::new().run(&sub.graph, sub.local(source).expect("source kept"), &mut local, None);
    let mut dist = vec![S::infinity(); g.vertex_count()];
    for (k, &v) in sub.to_parent.iter().enumerate() {
        dist[v] = local[k];
    }
    dist
}

/// Apex rewiring for a diameter guess `d` with `2d >= diam(G)`.
///
/// Either certifies `diam(G) > d` or returns `G'` with
/// `diam(G) <= diam(G')`, `diam(G') <= (1 + eps) * d` whenever
/// `diam(G) <= d`, and every component of `G' - A` of strong diameter at
/// most `8 * (2 / eps)^c * d`.
pub fn diam_reduction<S: Scalar>(input: &ApexInput<S>, d: S, eps: S) -> Result<ReductionResult<S>> {
    check_params(d, eps)?;
    if input.apices.is_empty() {
        return Err(Error::domain(
            "apex reduction needs at least one apex; use the plain diameter pipeline",
        ));
    }
    input.check_connected()?;
    let g = &input.graph;
    let n = g.vertex_count();
    let two = S::of(2.0);

    let mut edges: BTreeMap<(usize, usize), S> = BTreeMap::new();
    let mut removed = Vec::new();
    for (u, v, w) in g.edges() {
        if w > two * d {
            removed.push((u, v, w));
        } else {
            edges.insert((u, v), w);
        }
    }
    let trimmed = WeightedGraph::from_edges(n, edges.iter().map(|(&(u, v), &w)| (u, v, w)))?;

    let mut is_apex = vec![false; n];
    for &a in &input.apices {
        is_apex[a] = true;
    }
    let from_apex: Vec<Vec<S>> = input
        .apices
        .par_iter()
        .map(|&a| sssp(&trimmed, a).map(|r| r.dist))
        .collect::<Result<_>>()?;
    for (k, row) in from_apex.iter().enumerate() {
        if let Some(v) = (0..n).find(|&v| row[v] > d) {
            return Ok(ReductionResult::DiamExceedsD {
                reason: format!(
                    "vertex {v} is at distance {} from apex {}",
                    row[v], input.apices[k]
                ),
            });
        }
    }

    // Shortcuts from every apex to every vertex at their exact distance.
    let mut added = Vec::new();
    for (k, &a) in input.apices.iter().enumerate() {
        for (v, &w) in from_apex[k].iter().enumerate() {
            if v == a {
                continue;
            }
            let key = (a.min(v), a.max(v));
            match edges.get(&key) {
                Some(&old) if old <= w => {}
                _ => {
                    edges.insert(key, w);
                    added.push((key.0, key.1, w));
                }
            }
        }
    }

    // Signature of v: bucket index of its distance to each apex.
    let step = eps * d / two;
    let cap = (two / eps).floor();
    let signature = |v: usize| -> Result<Vec<u64>> {
        from_apex
            .iter()
            .map(|row| {
                let j = (row[v] / step).floor();
                if j > cap {
                    return Err(Error::invariant(format!(
                        "signature entry {j} above {cap} after the distance check"
                    )));
                }
                Ok(j.to_u64().expect("bounded bucket"))
            })
            .collect()
    };
    let mut sig_of: Vec<Option<usize>> = vec![None; n];
    let mut sigs: Vec<Vec<u64>> = Vec::new();
    let mut first_vertex: Vec<usize> = Vec::new();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    for v in (0..n).filter(|&v| !is_apex[v]) {
        let s = signature(v)?;
        let id = *index.entry(s.clone()).or_insert_with(|| {
            sigs.push(s);
            first_vertex.push(v);
            sigs.len() - 1
        });
        sig_of[v] = Some(id);
    }
    // A pair of signatures is relevant when no path of length at most d
    // between the two classes can pass through an apex.
    let bound = two / eps;
    let relevant_pair = |x: &[u64], y: &[u64]| {
        x.iter()
            .zip(y)
            .all(|(&a, &b)| S::of_usize((a + b) as usize) > bound)
    };
    let relevant: Vec<bool> = (0..sigs.len())
        .into_par_iter()
        .map(|i| (0..sigs.len()).any(|j| relevant_pair(&sigs[i], &sigs[j])))
        .collect();
    let mut representatives: Vec<usize> = (0..sigs.len())
        .filter(|&i| relevant[i])
        .map(|i| first_vertex[i])
        .collect();
    representatives.sort_unstable();

    let from_rep: Vec<Vec<S>> = representatives
        .par_iter()
        .map(|&b| distances_avoiding(&trimmed, &is_apex, b))
        .collect();
    for (k, &b) in representatives.iter().enumerate() {
        let sb = sig_of[b];
        if let Some(v) = (0..n).find(|&v| sig_of[v] == sb && from_rep[k][v] > two * d) {
            return Ok(ReductionResult::DiamExceedsD {
                reason: format!(
                    "vertices {b} and {v} share a relevant signature but lie {} apart without apices",
                    from_rep[k][v]
                ),
            });
        }
    }

    let three_d = S::of(3.0) * d;
    let far: Vec<usize> = (0..n)
        .filter(|&z| !is_apex[z] && from_rep.iter().all(|row| row[z] > three_d))
        .collect();
    let mut is_far = vec![false; n];
    for &z in &far {
        is_far[z] = true;
    }
    edges.retain(|&(u, v), w| {
        let drop = !is_apex[u] && !is_apex[v] && (is_far[u] || is_far[v]);
        if drop {
            removed.push((u, v, *w));
        }
        !drop
    });
    removed.sort_by_key(|e| (e.0, e.1));
    let graph = WeightedGraph::from_edges(n, edges.into_iter().map(|((u, v), w)| (u, v, w)))?;
    Ok(ReductionResult::Reduced(Reduced {
        graph,
        apices: input.apices.clone(),
        added_edges: added,
        removed_edges: removed,
        representatives,
        far,
    }))
}

/// Outcome of one guess, as recorded by [`apex_diameter`].
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub guess: f64,
    pub verdict: Verdict,
    /// `None` when the reduction itself decided.
    pub estimate: Option<f64>,
    pub threshold: f64,
    pub reason: String,
}

/// Decides `diam > d` or `diam <= (1 + eps) * d` for `d` in `[D0, 2 * D0]`.
pub fn apx_step<S: Scalar>(input: &ApexInput<S>, d: S, eps: S) -> Result<Verdict> {
    Ok(apx_step_logged(input, d, eps, 0)?.verdict)
}

fn apx_step_logged<S: Scalar>(input: &ApexInput<S>, d: S, eps: S, index: usize) -> Result<StepRecord> {
    let third = eps / S::of(3.0);
    let threshold = (S::one() + S::of(2.0) * third) * d;
    let mut record = StepRecord {
        index,
        guess: d.as_f64(),
        verdict: Verdict::DiamExceedsD,
        estimate: None,
        threshold: threshold.as_f64(),
        reason: String::new(),
    };
    let reduced = match diam_reduction(input, d, third)? {
        ReductionResult::DiamExceedsD { reason } => {
            record.reason = reason;
            return Ok(record);
        }
        ReductionResult::Reduced(r) => r,
    };
    let delta = eps * d / S::of(48.0);
    let g = &reduced.graph;
    let (clustering, apex_clusters) = apex_clustering(&reduced, delta)?;
    let h = cluster_graph(g, &clustering)?;
    let base = clustering.cluster_count() - apex_clusters;
    let keep: Vec<usize> = (0..base).collect();
    let td = heuristic_decomposition(&h.induced(&keep));
    let apex_ids: Vec<u32> = (base..base + apex_clusters).map(|i| i as u32).collect();
    let parent = (0..td.node_count()).map(|t| td.parent(t)).collect();
    let bags = (0..td.node_count())
        .map(|t| td.bag(t).iter().chain(&apex_ids).copied().collect())
        .collect();
    let bd = balance_binary(&TreeDecomposition::from_parts(parent, bags));
    let engine = build_engine_with(g, clustering, bd, EngineOptions::default())?;
    let estimate = engine
        .all_eccentricities()?
        .into_iter()
        .map(|e| e.value)
        .fold(S::zero(), S::max);
    record.estimate = Some(estimate.as_f64());
    if estimate > threshold {
        record.reason = format!("estimated diameter {estimate} above {threshold}");
    } else {
        record.verdict = Verdict::DiamAtMost;
        record.reason = format!("estimated diameter {estimate} within {threshold}");
    }
    Ok(record)
}

/// Clusters every component of `G' - A` on its own and appends one
/// singleton cluster per apex (layer 0). Returns the number of apex clusters.
fn apex_clustering<S: Scalar>(r: &Reduced<S>, delta: S) -> Result<(Clustering<S>, usize)> {
    let n = r.graph.vertex_count();
    let mut is_apex = vec![false; n];
    for &a in &r.apices {
        is_apex[a] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !is_apex[v]).collect();
    let without = induced_subgraph(&r.graph, &rest);
    let mut cluster_of = vec![usize::MAX; n];
    let mut center = Vec::new();
    let mut layer = Vec::new();
    for comp in connected_components(&without.graph) {
        let part = induced_subgraph(&without.graph, &comp);
        let c = build_clustering(&part.graph, delta)?;
        let offset = center.len();
        for (k, &local) in part.to_parent.iter().enumerate() {
            cluster_of[without.to_parent[local]] = offset + c.cluster_of[k];
        }
        center.extend(c.center.iter().map(|&x| without.to_parent[part.to_parent[x]]));
        layer.extend_from_slice(&c.layer);
    }
    for &a in &r.apices {
        cluster_of[a] = center.len();
        center.push(a);
        layer.push(0);
    }
    let root = rest.first().copied().unwrap_or(r.apices[0]);
    Ok((
        Clustering {
            delta,
            root,
            cluster_of,
            center,
            layer,
        },
        r.apices.len(),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ApexDiameter {
    pub estimate: f64,
    pub d0: f64,
    pub steps: Vec<StepRecord>,
}

/// Diameter within a factor `1 + eps` for a connected graph with apex set
/// `A`. With no apices this is the plain pipeline.
pub fn apex_diameter<S: Scalar>(input: &ApexInput<S>, eps: S) -> Result<ApexDiameter> {
    if !(eps > S::zero()) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    input.check_connected()?;
    let d0 = sssp(&input.graph, 0)?.eccentricity();
    if input.apices.is_empty() || d0 == S::zero() {
        let est = if d0 == S::zero() {
            S::zero()
        } else {
            approx_diameter(&input.graph, eps)?
        };
        return Ok(ApexDiameter {
            estimate: est.as_f64(),
            d0: d0.as_f64(),
            steps: Vec::new(),
        });
    }
    let k = (S::one() / eps)
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::Capacity(format!("eps {eps} gives too many guesses")))?;
    let mut steps = Vec::new();
    for i in 0..=k {
        let guess = d0 + S::of_usize(i) * d0 / S::of_usize(k);
        let record = apx_step_logged(input, guess, eps, i)?;
        let done = record.verdict == Verdict::DiamAtMost;
        steps.push(record);
        if done {
            return Ok(ApexDiameter {
                estimate: guess.as_f64(),
                d0: d0.as_f64(),
                steps,
            });
        }
    }
    Err(Error::invariant(format!(
        "every guess up to 2 * D0 = {} was rejected",
        S::of(2.0) * d0
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::exact_apsp;

    fn grid_with_apex(k: usize, w_apex: f64, attach: &[usize]) -> ApexInput<f64> {
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let v = r * k + c;
                if c + 1 < k {
                    edges.push((v, v + 1, 1.0));
                }
                if r + 1 < k {
                    edges.push((v, v + k, 1.0));
                }
            }
        }
        let a = k * k;
        edges.extend(attach.iter().map(|&v| (v, a, w_apex)));
        ApexInput::new(WeightedGraph::from_edges(k * k + 1, edges).unwrap(), vec![a]).unwrap()
    }

    fn diam(g: &WeightedGraph<f64>) -> f64 {
        exact_apsp(g).unwrap().diameter().unwrap()
    }

    #[test]
    fn apex_next_to_everything() {
        let d = 4.0;
        let n = 6;
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        edges.extend((0..n).map(|v| (v, n, d / 2.0)));
        let input = ApexInput::new(WeightedGraph::from_edges(n + 1, edges).unwrap(), vec![n]).unwrap();
        assert!(diam(&input.graph) <= d);
        let r = diam_reduction(&input, d, 0.5).unwrap();
        let r = r.reduced().unwrap();
        assert!(r.representatives.is_empty());
        assert_eq!(r.far, (0..n).collect::<Vec<_>>());
        assert_eq!(r.graph.edge_count(), n);
        let d2 = diam(&r.graph);
        assert!(d2 >= diam(&input.graph) && d2 <= 1.5 * d);
    }

    #[test]
    fn far_apex_vertex_exceeds() {
        let input = grid_with_apex(5, 1.0, &[0]);
        let r = diam_reduction(&input, 3.0, 0.5).unwrap();
        assert!(matches!(r, ReductionResult::DiamExceedsD { .. }));
    }

    #[test]
    fn reduction_invariants_on_grid() {
        let attach: Vec<usize> = (0..144).filter(|v| v % 13 == 0).collect();
        let input = grid_with_apex(12, 3.0, &attach);
        let d = diam(&input.graph);
        for eps in [0.5, 0.25] {
            let r = diam_reduction(&input, d, eps).unwrap();
            let r = r.reduced().expect("D is the true diameter");
            let d2 = diam(&r.graph);
            assert!(d2 >= d && d2 <= (1.0 + eps) * d, "{d2} vs {d}");
            let rest: Vec<usize> = (0..144).collect();
            let without = induced_subgraph(&r.graph, &rest);
            let bound = 8.0 * (2.0 / eps) * d;
            for comp in connected_components(&without.graph) {
                let part = induced_subgraph(&without.graph, &comp);
                assert!(diam(&part.graph) <= bound);
            }
        }
    }

    #[test]
    fn zero_apices_rejected() {
        let input = ApexInput::new(WeightedGraph::from_edges(2, vec![(0, 1, 1.0)]).unwrap(), vec![]).unwrap();
        assert!(matches!(diam_reduction(&input, 1.0, 0.5), Err(Error::Domain(_))));
        assert_eq!(apex_diameter(&input, 0.5).unwrap().estimate, 1.0);
    }

    #[test]
    fn step_verdicts() {
        let input = grid_with_apex(8, 1.0, &[0, 63]);
        let d = diam(&input.graph);
        assert_eq!(apx_step(&input, d, 0.5).unwrap(), Verdict::DiamAtMost);
        assert_eq!(apx_step(&input, d / 1.6, 0.5).unwrap(), Verdict::DiamExceedsD);
    }

    #[test]
    fn pendant_apex_diameter() {
        let input = grid_with_apex(10, 1.0, &[55]);
        let d = diam(&input.graph);
        for eps in [0.5, 0.25] {
            let out = apex_diameter(&input, eps).unwrap();
            assert!(out.estimate <= (1.0 + eps) * d && d <= (1.0 + eps) * out.estimate);
            assert_eq!(out.steps.last().unwrap().verdict, Verdict::DiamAtMost);
        }
    }

    #[test]
    fn disconnected_is_infinite() {
        let input = ApexInput::new(WeightedGraph::from_edges(3, vec![(0, 1, 1.0)]).unwrap(), vec![2]).unwrap();
        assert!(matches!(apex_diameter(&input, 0.5), Err(Error::InfiniteDiameter)));
    }
}
