//! Exact all-pairs distances for tests and acceptance runs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{distances_from, WeightedGraph};
use crate::scalar::Scalar;

/// Default cap on the vertex count accepted by [`exact_apsp`].
pub const DEFAULT_MAX_N: usize = 5000;

/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "METRIC_ENGINE_MAX_N";

/// Vertex cap in effect, honoring the environment override.
pub fn capacity_limit() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

/// Dense distance matrix; `INFINITY` between components.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMetric<S> {
    n: usize,
    dist: Vec<S>,
}

impl<S: Scalar> ExactMetric<S> {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> S {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[S] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(|d| d.is_finite())
    }

    /// Row maxima.
    pub fn eccentricities(&self) -> Result<Vec<S>> {
        if !self.is_connected() {
            return Err(Error::InfiniteDiameter);
        }
        Ok((0..self.n)
            .map(|u| self.row(u).iter().copied().fold(S::zero(), S::max))
            .collect())
    }

    pub fn diameter(&self) -> Result<S> {
        Ok(self.eccentricities()?.into_iter().fold(S::zero(), S::max))
    }

    pub fn radius(&self) -> Result<S> {
        let ecc = self.eccentricities()?;
        Ok(ecc.into_iter().reduce(S::min).unwrap_or(S::zero()))
    }
}

/// One Dijkstra per vertex. Fails with a capacity error above
/// [`capacity_limit`] vertices.
pub fn exact_apsp<S: Scalar>(g: &WeightedGraph<S>) -> Result<ExactMetric<S>> {
    exact_apsp_capped(g, capacity_limit())
}

pub fn exact_apsp_capped<S: Scalar>(g: &WeightedGraph<S>, max_n: usize) -> Result<ExactMetric<S>> {
    let n = g.vertex_count();
    if n > max_n {
        return Err(Error::Capacity(format!(
            "exact distances limited to {max_n} vertices, graph has {n} (set {MAX_N_ENV} to raise)"
        )));
    }
    let rows: Vec<Vec<S>> = (0..n).into_par_iter().map(|s| distances_from(g, s)).collect();
    Ok(ExactMetric {
        n,
        dist: rows.concat(),
    })
}

pub fn exact_eccentricities<S: Scalar>(m: &ExactMetric<S>) -> Result<Vec<S>> {
    m.eccentricities()
}

pub fn exact_diameter<S: Scalar>(m: &ExactMetric<S>) -> Result<S> {
    m.diameter()
}

pub fn exact_radius<S: Scalar>(m: &ExactMetric<S>) -> Result<S> {
    m.radius()
}
