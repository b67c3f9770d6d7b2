//! Deterministic test-graph families.
//!
//! Random weights are rounded to multiples of `2^-10`, so path lengths add up
//! exactly in `f64` (and in `f32` up to about 16000) and exact comparisons in
//! tests never hinge on summation order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Scalar;

const GRID_STEP: f64 = 1.0 / 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Weights {
    Unit,
    /// Uniform on `[lo, hi]`, rounded to the `2^-10` grid.
    Uniform { lo: f64, hi: f64 },
    /// `base + j * 2^-10` for `j` in `0..3`: many almost equal paths.
    NearTie { base: f64 },
}

impl Weights {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Weights::Unit => true,
            Weights::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi,
            Weights::NearTie { base } => base.is_finite() && base > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid weight distribution {self}")))
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Weights::Unit => 1.0,
            Weights::Uniform { lo, hi } => {
                let x = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
                ((x / GRID_STEP).round() * GRID_STEP).max(GRID_STEP)
            }
            Weights::NearTie { base } => {
                let base = ((base / GRID_STEP).round() * GRID_STEP).max(GRID_STEP);
                base + rng.gen_range(0..3) as f64 * GRID_STEP
            }
        }
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weights::Unit => write!(f, "unit"),
            Weights::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            Weights::NearTie { base } => write!(f, "neartie:{base}"),
        }
    }
}

impl FromStr for Weights {
    type Err = Error;

    /// `unit`, `uniform:LO:HI` or `neartie:BASE`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|e| Error::domain(format!("bad number `{x}` in weights: {e}")))
        };
        let w = match parts.as_slice() {
            ["unit"] => Weights::Unit,
            ["uniform", lo, hi] => Weights::Uniform {
                lo: num(lo)?,
                hi: num(hi)?,
            },
            ["neartie", base] => Weights::NearTie { base: num(base)? },
            _ => {
                return Err(Error::domain(format!(
                    "unknown weights `{s}` (expected unit, uniform:LO:HI or neartie:BASE)"
                )))
            }
        };
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Family {
    Grid { rows: usize, cols: usize },
    /// Grid plus `apices` extra vertices, each joined to every grid vertex
    /// independently with probability `attach` (and to at least one).
    GridApex {
        rows: usize,
        cols: usize,
        apices: usize,
        attach: f64,
    },
    Path { n: usize },
    /// Center 0 joined to `leaves` other vertices.
    Star { leaves: usize },
    /// Grid keeping a random spanning tree; every other edge is deleted with
    /// probability `delete`.
    RandomPlanarish {
        rows: usize,
        cols: usize,
        delete: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenSpec {
    pub family: Family,
    pub weights: Weights,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Generated<S> {
    pub graph: WeightedGraph<S>,
    /// Apex vertices (only for grid-plus-apex graphs), increasing.
    pub apices: Vec<usize>,
}

fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges
}

fn check_size(what: &str, x: usize) -> Result<()> {
    if x == 0 {
        return Err(Error::domain(format!("{what} must be at least 1")));
    }
    Ok(())
}

fn check_prob(what: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("{what} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Builds the graph described by `spec`; equal specs give identical graphs.
pub fn generate<S: Scalar>(spec: &GenSpec) -> Result<Generated<S>> {
    spec.weights.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, pairs, apices) = match spec.family {
        Family::Grid { rows, cols } => {
            check_size("rows", rows)?;
            check_size("cols", cols)?;
            (rows * cols, grid_edges(rows, cols), Vec::new())
        }
        Family::GridApex {
            rows,
            cols,
            apices,
            attach,
        } => {
            check_size("rows", rows)?;
            check_size("cols", cols)?;
            check_size("apices", apices)?;
            check_prob("attach probability", attach)?;
            let base = rows * cols;
            let mut pairs = grid_edges(rows, cols);
            for a in 0..apices {
                let apex = base + a;
                let before = pairs.len();
                for v in 0..base {
                    if rng.gen_bool(attach) {
                        pairs.push((v, apex));
                    }
                }
                if pairs.len() == before {
                    pairs.push((rng.gen_range(0..base), apex));
                }
            }
            (base + apices, pairs, (base..base + apices).collect())
        }
        Family::Path { n } => {
            check_size("n", n)?;
            (n, (0..n - 1).map(|i| (i, i + 1)).collect(), Vec::new())
        }
        Family::Star { leaves } => (leaves + 1, (1..=leaves).map(|i| (0, i)).collect(), Vec::new()),
        Family::RandomPlanarish { rows, cols, delete } => {
            check_size("rows", rows)?;
            check_size("cols", cols)?;
            check_prob("delete fraction", delete)?;
            let n = rows * cols;
            let mut all = grid_edges(rows, cols);
            all.shuffle(&mut rng);
            // Kruskal on a random order gives a random spanning tree.
            let mut uf: Vec<usize> = (0..n).collect();
            fn find(uf: &mut [usize], mut x: usize) -> usize {
                while uf[x] != x {
                    uf[x] = uf[uf[x]];
                    x = uf[x];
                }
                x
            }
            let mut kept = Vec::new();
            for (u, v) in all {
                let (a, b) = (find(&mut uf, u), find(&mut uf, v));
                if a != b {
                    uf[a] = b;
                    kept.push((u, v));
                } else if !rng.gen_bool(delete) {
                    kept.push((u, v));
                }
            }
            kept.sort_unstable();
            (n, kept, Vec::new())
        }
    };
    let edges: Vec<(usize, usize, S)> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, S::of(spec.weights.draw(&mut rng))))
        .collect();
    Ok(Generated {
        graph: WeightedGraph::from_edges(n, edges)?,
        apices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sssp, write_edge_list};

    fn spec(family: Family, weights: Weights, seed: u64) -> GenSpec {
        GenSpec {
            family,
            weights,
            seed,
        }
    }

    #[test]
    fn two_by_two_grid() {
        let g = generate::<f64>(&spec(Family::Grid { rows: 2, cols: 2 }, Weights::Unit, 0)).unwrap();
        assert_eq!(g.graph.vertex_count(), 4);
        assert_eq!(g.graph.edge_count(), 4);
    }

    #[test]
    fn path_diameter() {
        let g = generate::<f64>(&spec(Family::Path { n: 5 }, Weights::Unit, 0)).unwrap();
        assert_eq!(sssp(&g.graph, 0).unwrap().eccentricity(), 4.0);
    }

    #[test]
    fn deterministic_dump() {
        let s = spec(
            Family::GridApex {
                rows: 4,
                cols: 5,
                apices: 2,
                attach: 0.2,
            },
            Weights::Uniform { lo: 1.0, hi: 10.0 },
            7,
        );
        let a = generate::<f64>(&s).unwrap();
        let b = generate::<f64>(&s).unwrap();
        assert_eq!(write_edge_list(&a.graph, &[]), write_edge_list(&b.graph, &[]));
        assert_eq!(a.apices, vec![20, 21]);
        let other = generate::<f64>(&GenSpec { seed: 8, ..s }).unwrap();
        assert_ne!(write_edge_list(&a.graph, &[]), write_edge_list(&other.graph, &[]));
    }

    #[test]
    fn weights_are_dyadic() {
        let g = generate::<f64>(&spec(
            Family::Grid { rows: 5, cols: 5 },
            Weights::Uniform { lo: 1.0, hi: 10.0 },
            3,
        ))
        .unwrap();
        for (_, _, w) in g.graph.edges() {
            assert!((1.0..=10.0).contains(&w));
            assert_eq!((w * 1024.0).fract(), 0.0);
        }
    }

    #[test]
    fn planarish_stays_connected() {
        for seed in 0..5 {
            let g = generate::<f64>(&spec(
                Family::RandomPlanarish {
                    rows: 6,
                    cols: 7,
                    delete: 0.7,
                },
                Weights::Unit,
                seed,
            ))
            .unwrap();
            assert!(g.graph.is_connected());
            assert!(g.graph.edge_count() >= 41);
        }
    }

    #[test]
    fn apex_attaches_somewhere() {
        let g = generate::<f64>(&spec(
            Family::GridApex {
                rows: 3,
                cols: 3,
                apices: 1,
                attach: 0.0,
            },
            Weights::Unit,
            1,
        ))
        .unwrap();
        assert_eq!(g.graph.degree(9), 1);
    }

    #[test]
    fn parses_weights() {
        assert_eq!("unit".parse::<Weights>().unwrap(), Weights::Unit);
        assert_eq!(
            "uniform:1:10".parse::<Weights>().unwrap(),
            Weights::Uniform { lo: 1.0, hi: 10.0 }
        );
        assert!("uniform:0:1".parse::<Weights>().is_err());
        assert!("gauss".parse::<Weights>().is_err());
        assert_eq!("neartie:2".parse::<Weights>().unwrap().to_string(), "neartie:2");
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(generate::<f64>(&spec(Family::Grid { rows: 0, cols: 3 }, Weights::Unit, 0)).is_err());
        assert!(generate::<f64>(&spec(Family::Path { n: 0 }, Weights::Unit, 0)).is_err());
    }
}
