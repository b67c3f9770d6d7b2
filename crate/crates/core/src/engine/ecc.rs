use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{build_engine_with, CoresetMode, EngineOptions, EngineOracle, EngineStats};
use crate::clustering::{build_clustering, cluster_graph};
use crate::error::{Error, Result};
use crate::graph::{sssp, WeightedGraph};
use crate::scalar::Scalar;
use crate::treewidth::{balance_binary, heuristic_decomposition};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EccentricityEstimate<S> {
    pub vertex: usize,
    pub value: S,
    /// Vertex realizing the estimate.
    pub witness: usize,
}

/// Running maximum; ties keep the smaller witness id.
struct Best<S> {
    value: S,
    witness: usize,
}

impl<S: Scalar> Best<S> {
    fn offer(&mut self, value: S, witness: usize) {
        if value > self.value || (value == self.value && witness < self.witness) {
            self.value = value;
            self.witness = witness;
        }
    }
}

impl<S: Scalar> EngineOracle<S> {
    /// Eccentricity of `v` up to an additive `16 * delta`, with a witness.
    ///
    /// Combines the centers in the bags from `v`'s owning node to the root,
    /// the core-sets of the owning node's children, and for every strict
    /// ancestor the core-set of the child that does not lead to `v`.
    pub fn eccentricity(&self, v: usize) -> Result<EccentricityEstimate<S>> {
        if v >= self.vertex_count() {
            return Err(Error::domain(format!(
                "vertex {v} out of range (graph has {} vertices)",
                self.vertex_count()
            )));
        }
        if self.mode == CoresetMode::Skip {
            return Err(Error::domain("oracle was built without core-sets"));
        }
        let tree = &self.decomposition.tree;
        let label = self.label(v);
        let home = self.vertex_loc(v);

        // Case 1: every cluster owned on the root path sits in a path bag and
        // vice versa, so scan all label positions.
        let mut est = vec![S::zero(); label.len()];
        let mut best = Best {
            value: S::zero(),
            witness: v,
        };
        let mut t = Some(home);
        while let Some(x) = t {
            for &i in &self.owned[x] {
                let a = self.apx_to_ancestor_center(v, label, i);
                est[self.label_pos[i]] = a;
                best.offer(a, self.clustering.center[i]);
            }
            t = tree.parent(x);
        }

        // Case 2: children of the owning node, against v's own center.
        let bag = tree.bag(home);
        let j = bag
            .binary_search(&(self.clustering.cluster_of[v] as u32))
            .expect("owning bag holds the cluster");
        let k = bag.len();
        for &child in tree.children(home) {
            let cs = &self.coresets[child];
            for (r, &u) in cs.members.iter().enumerate() {
                best.offer(cs.tuples[r * k + j], u);
            }
        }

        // Case 3: for each strict ancestor, the sibling subtree.
        let mut below = home;
        let mut hat = tree.parent(home);
        let mut via = Vec::new();
        while let Some(top) = hat {
            let bag = tree.bag(top);
            let k = bag.len();
            via.clear();
            via.extend(bag.iter().map(|&i| est[self.label_pos[i as usize]]));
            for &other in tree.children(top) {
                if other == below {
                    continue;
                }
                let cs = &self.coresets[other];
                for (r, &u) in cs.members.iter().enumerate() {
                    let row = &cs.tuples[r * k..(r + 1) * k];
                    let mut m = S::infinity();
                    for (&a, &b) in via.iter().zip(row) {
                        let s = a + b;
                        if s < m {
                            m = s;
                        }
                    }
                    best.offer(m, u);
                }
            }
            below = top;
            hat = tree.parent(top);
        }

        Ok(EccentricityEstimate {
            vertex: v,
            value: best.value,
            witness: best.witness,
        })
    }

    /// Estimates for every vertex, computed in parallel.
    pub fn all_eccentricities(&self) -> Result<Vec<EccentricityEstimate<S>>> {
        (0..self.vertex_count())
            .into_par_iter()
            .map(|v| self.eccentricity(v))
            .collect()
    }
}

/// Sizes and timings of one eccentricity run.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineStats {
    pub d0: f64,
    pub delta: f64,
    pub cluster_graph_edges: usize,
    /// Width of the unbalanced decomposition.
    pub heuristic_width: usize,
    pub engine: Option<EngineStats>,
    pub ms_clustering: f64,
    pub ms_decomposition: f64,
    pub ms_engine: f64,
    pub ms_queries: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EccentricityRun<S> {
    pub eps: f64,
    pub estimates: Vec<EccentricityEstimate<S>>,
    pub stats: PipelineStats,
}

impl<S: Scalar> EccentricityRun<S> {
    pub fn diameter(&self) -> S {
        self.estimates
            .iter()
            .map(|e| e.value)
            .fold(S::zero(), S::max)
    }

    pub fn radius(&self) -> S {
        self.estimates
            .iter()
            .map(|e| e.value)
            .fold(S::infinity(), S::min)
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Full pipeline: exact eccentricity of vertex 0 fixes the scale, then
/// clustering at `delta = eps * D / 16`, decomposition, balancing, oracle
/// and one query per vertex.
pub fn run_eccentricities<S: Scalar>(
    g: &WeightedGraph<S>,
    eps: S,
    options: EngineOptions,
) -> Result<EccentricityRun<S>> {
    if !(eps > S::zero()) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::domain("graph has no vertices"));
    }
    let start = Instant::now();
    let d0 = sssp(g, 0)?.eccentricity();
    if d0.is_infinite() {
        return Err(Error::InfiniteDiameter);
    }
    let mut stats = PipelineStats {
        d0: d0.as_f64(),
        delta: 0.0,
        cluster_graph_edges: 0,
        heuristic_width: 0,
        engine: None,
        ms_clustering: 0.0,
        ms_decomposition: 0.0,
        ms_engine: 0.0,
        ms_queries: 0.0,
    };
    if d0 == S::zero() {
        // Single vertex.
        return Ok(EccentricityRun {
            eps: eps.as_f64(),
            estimates: vec![EccentricityEstimate {
                vertex: 0,
                value: S::zero(),
                witness: 0,
            }],
            stats,
        });
    }

    let delta = eps * d0 / S::of(16.0);
    stats.delta = delta.as_f64();
    let clustering = build_clustering(g, delta)?;
    stats.ms_clustering = ms_since(start);

    let t = Instant::now();
    let h = cluster_graph(g, &clustering)?;
    stats.cluster_graph_edges = h.edge_count();
    let td = heuristic_decomposition(&h);
    stats.heuristic_width = td.width();
    let bd = balance_binary(&td);
    stats.ms_decomposition = ms_since(t);

    let t = Instant::now();
    let oracle = build_engine_with(
        g,
        clustering,
        bd,
        EngineOptions {
            validate: false,
            ..options
        },
    )?;
    stats.ms_engine = ms_since(t);
    stats.engine = Some(oracle.stats().clone());

    let t = Instant::now();
    let estimates = oracle.all_eccentricities()?;
    stats.ms_queries = ms_since(t);
    Ok(EccentricityRun {
        eps: eps.as_f64(),
        estimates,
        stats,
    })
}

/// Eccentricity of every vertex within `eps * diam` of the truth.
pub fn all_eccentricities<S: Scalar>(
    g: &WeightedGraph<S>,
    eps: S,
) -> Result<Vec<EccentricityEstimate<S>>> {
    Ok(run_eccentricities(g, eps, EngineOptions::default())?.estimates)
}

pub fn approx_diameter<S: Scalar>(g: &WeightedGraph<S>, eps: S) -> Result<S> {
    Ok(run_eccentricities(g, eps, EngineOptions::default())?.diameter())
}

pub fn approx_radius<S: Scalar>(g: &WeightedGraph<S>, eps: S) -> Result<S> {
    Ok(run_eccentricities(g, eps, EngineOptions::default())?.radius())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_ecc(g: &WeightedGraph<f64>) -> Vec<f64> {
        (0..g.vertex_count())
            .map(|v| sssp(g, v).unwrap().eccentricity())
            .collect()
    }

    fn check(g: &WeightedGraph<f64>, eps: f64) {
        let exact = brute_ecc(g);
        let diam = exact.iter().copied().fold(0.0, f64::max);
        for mode in [CoresetMode::Greedy, CoresetMode::Exhaustive] {
            let run = run_eccentricities(
                g,
                eps,
                EngineOptions {
                    coresets: mode,
                    validate: true,
                },
            )
            .unwrap();
            for e in &run.estimates {
                let truth = exact[e.vertex];
                assert!(
                    (e.value - truth).abs() <= eps * diam,
                    "vertex {} estimate {} exact {truth}",
                    e.vertex,
                    e.value
                );
                let dw = sssp(g, e.vertex).unwrap().dist[e.witness];
                assert!(dw >= truth - eps * diam);
            }
        }
    }

    #[test]
    fn single_vertex() {
        let g = WeightedGraph::<f64>::empty(1);
        let est = all_eccentricities(&g, 0.5).unwrap();
        assert_eq!(est[0].value, 0.0);
        assert_eq!(est[0].witness, 0);
    }

    #[test]
    fn triangle() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        check(&g, 0.5);
        check(&g, 0.1);
    }

    #[test]
    fn paths_and_cycles() {
        let p = WeightedGraph::from_edges(6, (0..5).map(|i| (i, i + 1, 1.0))).unwrap();
        check(&p, 1.0);
        check(&p, 0.25);
        let c = WeightedGraph::from_edges(
            30,
            (0..30).map(|i| (i, (i + 1) % 30, 1.0 + (i % 3) as f64)),
        )
        .unwrap();
        check(&c, 0.5);
        check(&c, 0.2);
    }

    #[test]
    fn small_grid() {
        let k = 7;
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let v = r * k + c;
                if c + 1 < k {
                    edges.push((v, v + 1, 1.0 + ((r + 2 * c) % 4) as f64));
                }
                if r + 1 < k {
                    edges.push((v, v + k, 1.0 + ((3 * r + c) % 5) as f64));
                }
            }
        }
        let g = WeightedGraph::from_edges(k * k, edges).unwrap();
        for eps in [0.5, 0.25, 0.1] {
            check(&g, eps);
        }
    }

    #[test]
    fn disconnected_is_infinite() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            all_eccentricities(&g, 0.5),
            Err(Error::InfiniteDiameter)
        ));
    }

    #[test]
    fn huge_eps_single_cluster() {
        let g = WeightedGraph::from_edges(5, (0..4).map(|i| (i, i + 1, 1.0))).unwrap();
        let run = run_eccentricities(&g, 100.0, EngineOptions::default()).unwrap();
        assert_eq!(run.stats.engine.as_ref().unwrap().clusters, 1);
        check(&g, 100.0);
    }
}
