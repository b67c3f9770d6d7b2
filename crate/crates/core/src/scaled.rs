//! Distance oracles at every scale.
//!
//! A [`DeltaOracle`] answers queries whose true distance is at most a cap
//! `Δ`, within additive `eps * Δ / 2`. It clusters the graph once at
//! `δ = eps * Δ / 4`; a shortest path of length at most `Δ` then never
//! leaves a window of `p = ⌈4 / eps⌉` layers around its endpoints, so each
//! query is answered by an additive oracle built on one window of layers.
//! A [`ScaledOracle`] stacks delta oracles at `Δ = w_min * 2^i` and returns
//! the smallest answer, which is within a factor `1 + eps`.

use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::clustering::{build_clustering, cluster_graph, interval_subgraph, Clustering, LayerInterval};
use crate::engine::{build_engine_with, CoresetMode, EngineOptions, EngineOracle};
use crate::error::{Error, Result};
use crate::graph::{sssp, WeightedGraph};
use crate::scalar::Scalar;
use crate::treewidth::{balance_binary, heuristic_decomposition};

/// Answer of a delta oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DeltaAnswer<S> {
    /// The distance certainly exceeds the cap.
    Far,
    Dist(S),
}

impl<S: Scalar> DeltaAnswer<S> {
    pub fn value(self) -> Option<S> {
        match self {
            DeltaAnswer::Far => None,
            DeltaAnswer::Dist(x) => Some(x),
        }
    }
}

#[derive(Debug)]
struct IntervalOracle<S> {
    to_parent: Vec<usize>,
    engine: EngineOracle<S>,
}

impl<S: Scalar> IntervalOracle<S> {
    fn local(&self, v: usize) -> usize {
        self.to_parent.binary_search(&v).expect("vertex lies in its window")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaStats {
    pub delta_cap: f64,
    pub delta: f64,
    pub p: u32,
    pub max_layer: u32,
    pub intervals: usize,
    /// Sum of window sizes, at most `(2p + 1) * n`.
    pub sum_interval_vertices: usize,
    pub max_width: usize,
    pub max_depth: usize,
}

#[derive(Debug)]
pub struct DeltaOracle<S> {
    graph: WeightedGraph<S>,
    delta_cap: S,
    eps: S,
    p: u32,
    clustering: Clustering<S>,
    /// Distinct windows, one per larger endpoint layer after clipping.
    intervals: Vec<LayerInterval>,
    window_of_layer: Vec<usize>,
    slots: Vec<OnceLock<std::result::Result<IntervalOracle<S>, String>>>,
}

/// Builds a delta oracle with every window oracle constructed up front.
pub fn build_delta_oracle<S: Scalar>(
    g: &WeightedGraph<S>,
    eps: S,
    delta_cap: S,
) -> Result<DeltaOracle<S>> {
    let oracle = DeltaOracle::new(g, eps, delta_cap)?;
    oracle.build_all()?;
    Ok(oracle)
}

impl<S: Scalar> DeltaOracle<S> {
    /// Clusters the graph and plans the windows; window oracles are built on
    /// first use (see [`build_all`](Self::build_all)).
    pub fn new(g: &WeightedGraph<S>, eps: S, delta_cap: S) -> Result<Self> {
        if !(eps > S::zero()) || !eps.is_finite() {
            return Err(Error::domain(format!("eps must be positive, got {eps}")));
        }
        if !(delta_cap > S::zero()) || !delta_cap.is_finite() {
            return Err(Error::domain(format!(
                "distance cap must be positive, got {delta_cap}"
            )));
        }
        let p_real = (S::of(4.0) / eps).ceil();
        let p = p_real
            .to_u32()
            .ok_or_else(|| Error::Capacity(format!("window width {p_real} too large")))?;
        let delta = eps * delta_cap / S::of(4.0);
        let clustering = build_clustering(g, delta)?;
        let max_layer = clustering.max_layer();

        let mut intervals: Vec<LayerInterval> = Vec::new();
        let mut window_of_layer = Vec::with_capacity(max_layer as usize + 1);
        for b in 0..=max_layer {
            let iv = LayerInterval {
                lo: b.saturating_sub(p),
                hi: b.saturating_add(p).min(max_layer),
            };
            if intervals.last() != Some(&iv) {
                intervals.push(iv);
            }
            window_of_layer.push(intervals.len() - 1);
        }
        let slots = intervals.iter().map(|_| OnceLock::new()).collect();
        let oracle = DeltaOracle {
            graph: g.clone(),
            delta_cap,
            eps,
            p,
            clustering,
            intervals,
            window_of_layer,
            slots,
        };
        let n = g.vertex_count();
        let sum = oracle.sum_interval_vertices();
        if sum > (2 * p as usize + 1) * n {
            return Err(Error::invariant(format!(
                "windows hold {sum} vertices in total, above (2p + 1) * n = {}",
                (2 * p as usize + 1) * n
            )));
        }
        Ok(oracle)
    }

    fn sum_interval_vertices(&self) -> usize {
        let mut per_layer = vec![0usize; self.window_of_layer.len()];
        for v in 0..self.graph.vertex_count() {
            per_layer[self.clustering.vertex_layer(v) as usize] += 1;
        }
        self.intervals
            .iter()
            .map(|iv| (iv.lo..=iv.hi).map(|l| per_layer[l as usize]).sum::<usize>())
            .sum()
    }

    fn build_window(&self, w: usize) -> Result<IntervalOracle<S>> {
        let sub = interval_subgraph(&self.graph, &self.clustering, self.intervals[w]);
        let clustering = self.clustering.restrict(&sub)?;
        let h = cluster_graph(&sub.graph, &clustering)?;
        let bd = balance_binary(&heuristic_decomposition(&h));
        let engine = build_engine_with(
            &sub.graph,
            clustering,
            bd,
            EngineOptions {
                coresets: CoresetMode::Skip,
                validate: false,
            },
        )?;
        Ok(IntervalOracle {
            to_parent: sub.to_parent,
            engine,
        })
    }

    fn window(&self, w: usize) -> Result<&IntervalOracle<S>> {
        self.slots[w]
            .get_or_init(|| self.build_window(w).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|msg| Error::invariant(format!("window oracle failed to build: {msg}")))
    }

    /// Builds every window oracle that is still missing.
    pub fn build_all(&self) -> Result<()> {
        (0..self.intervals.len())
            .into_par_iter()
            .try_for_each(|w| self.window(w).map(|_| ()))
    }

    pub fn delta_cap(&self) -> S {
        self.delta_cap
    }

    pub fn eps(&self) -> S {
        self.eps
    }

    pub fn delta(&self) -> S {
        self.clustering.delta
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn clustering(&self) -> &Clustering<S> {
        &self.clustering
    }

    pub fn intervals(&self) -> &[LayerInterval] {
        &self.intervals
    }

    /// Window used for a pair whose larger layer is `layer`.
    pub fn interval_for(&self, layer_u: u32, layer_v: u32) -> Option<LayerInterval> {
        if layer_u.abs_diff(layer_v) > self.p {
            return None;
        }
        Some(self.intervals[self.window_of_layer[layer_u.max(layer_v) as usize]])
    }

    /// `Far` only if the distance exceeds the cap; otherwise a walk length
    /// that is within `eps * cap / 2` of the distance whenever the distance
    /// is at most the cap.
    pub fn query(&self, u: usize, v: usize) -> Result<DeltaAnswer<S>> {
        for x in [u, v] {
            if x >= self.graph.vertex_count() {
                return Err(Error::domain(format!(
                    "vertex {x} out of range (graph has {} vertices)",
                    self.graph.vertex_count()
                )));
            }
        }
        if u == v {
            return Ok(DeltaAnswer::Dist(S::zero()));
        }
        let (lu, lv) = (self.clustering.vertex_layer(u), self.clustering.vertex_layer(v));
        if lu.abs_diff(lv) > self.p {
            return Ok(DeltaAnswer::Far);
        }
        let w = self.window_of_layer[lu.max(lv) as usize];
        let window = self.window(w)?;
        let x = window.engine.apx_dist(window.local(u), window.local(v));
        Ok(DeltaAnswer::Dist(x))
    }

    pub fn stats(&self) -> DeltaStats {
        let built: Vec<&IntervalOracle<S>> = self
            .slots
            .iter()
            .filter_map(|s| s.get().and_then(|r| r.as_ref().ok()))
            .collect();
        DeltaStats {
            delta_cap: self.delta_cap.as_f64(),
            delta: self.delta().as_f64(),
            p: self.p,
            max_layer: self.clustering.max_layer(),
            intervals: self.intervals.len(),
            sum_interval_vertices: self.sum_interval_vertices(),
            max_width: built.iter().map(|w| w.engine.stats().width).max().unwrap_or(0),
            max_depth: built.iter().map(|w| w.engine.stats().depth).max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ScaledOptions {
    /// Build window oracles on first use instead of up front.
    pub lazy: bool,
    /// Return the first answer from the bottom level instead of the minimum
    /// over all levels. Never underestimates, but the `1 + eps` bound is not
    /// guaranteed.
    pub first_hit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaledReport {
    pub eps: f64,
    pub w_min: f64,
    pub stretch_w: f64,
    pub levels: Vec<DeltaStats>,
    pub build_ms: f64,
}

/// Multiplicative `(1 + eps)` distance oracle.
#[derive(Debug)]
pub struct ScaledOracle<S> {
    eps: S,
    w_min: S,
    stretch_w: S,
    n: usize,
    levels: Vec<DeltaOracle<S>>,
    options: ScaledOptions,
    build_ms: f64,
}

pub fn build_multiplicative_oracle<S: Scalar>(g: &WeightedGraph<S>, eps: S) -> Result<ScaledOracle<S>> {
    build_multiplicative_oracle_with(g, eps, ScaledOptions::default())
}

pub fn build_multiplicative_oracle_with<S: Scalar>(
    g: &WeightedGraph<S>,
    eps: S,
    options: ScaledOptions,
) -> Result<ScaledOracle<S>> {
    if !(eps > S::zero()) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    let start = Instant::now();
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::domain("graph has no vertices"));
    }
    let e0 = sssp(g, 0)?.eccentricity();
    if e0.is_infinite() {
        return Err(Error::InfiniteDiameter);
    }
    let Some(w_min) = g.min_weight() else {
        // A single vertex: only the trivial query exists.
        return Ok(ScaledOracle {
            eps,
            w_min: S::one(),
            stretch_w: S::one(),
            n,
            levels: Vec::new(),
            options,
            build_ms: 0.0,
        });
    };
    let stretch_w = S::of(2.0) * e0 / w_min;
    let count = stretch_w.log2().ceil().max(S::one());
    let count = count
        .to_usize()
        .ok_or_else(|| Error::Capacity(format!("{count} levels")))?;
    let levels = (1..=count)
        .into_par_iter()
        .map(|i| {
            let cap = w_min * S::of(2.0).powi(i as i32);
            if options.lazy {
                DeltaOracle::new(g, eps, cap)
            } else {
                build_delta_oracle(g, eps, cap)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledOracle {
        eps,
        w_min,
        stretch_w,
        n,
        levels,
        options,
        build_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

impl<S: Scalar> ScaledOracle<S> {
    pub fn eps(&self) -> S {
        self.eps
    }

    pub fn w_min(&self) -> S {
        self.w_min
    }

    pub fn stretch_w(&self) -> S {
        self.stretch_w
    }

    pub fn levels(&self) -> &[DeltaOracle<S>] {
        &self.levels
    }

    /// Smallest answer over all levels; between `d` and `(1 + eps) * d`.
    /// Infinite if every level reports `Far`.
    pub fn query(&self, u: usize, v: usize) -> Result<S> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::domain(format!(
                    "vertex {x} out of range (graph has {} vertices)",
                    self.n
                )));
            }
        }
        if u == v {
            return Ok(S::zero());
        }
        let mut best = S::infinity();
        for level in &self.levels {
            if let DeltaAnswer::Dist(x) = level.query(u, v)? {
                if self.options.first_hit {
                    return Ok(x);
                }
                best = best.min(x);
            }
        }
        Ok(best)
    }

    pub fn report(&self) -> ScaledReport {
        ScaledReport {
            eps: self.eps.as_f64(),
            w_min: self.w_min.as_f64(),
            stretch_w: self.stretch_w.as_f64(),
            levels: self.levels.iter().map(DeltaOracle::stats).collect(),
            build_ms: self.build_ms,
        }
    }
}
