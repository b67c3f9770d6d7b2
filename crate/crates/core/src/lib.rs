//! Approximate eccentricities, diameter and distance oracles for weighted
//! graphs that exclude an apex graph as a minor (planar graphs, grids and
//! their relatives), plus a reduction for graphs with a few apex vertices.
//!
//! Everything is generic over the edge-weight scalar (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.
//!
//! ```
//! use metric_engine::{approx_diameter, Graph};
//!
//! let g = Graph::from_edges(4, vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)]).unwrap();
//! let d = approx_diameter(&g, 0.25).unwrap();
//! assert!((4.0 - 0.25 * 4.0..=4.0 + 0.25 * 4.0).contains(&d));
//! ```

// `!(x > 0)` also rejects NaN, which `x <= 0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod apex;
pub mod clustering;
pub mod coreset;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod reference;
pub mod scalar;
pub mod scaled;
pub mod treewidth;
pub mod vc;

pub use apex::{apex_diameter, apx_step, diam_reduction, ApexDiameter, ApexInput, ReductionResult, Verdict};
pub use clustering::{build_clustering, cluster_graph, distance_interval, interval_subgraph, LayerInterval};
pub use coreset::{greedy_coreset, verify_coreset, DistanceTuple};
pub use engine::{
    all_eccentricities, approx_diameter, approx_radius, build_engine, build_engine_with,
    run_eccentricities, CoresetMode, EccentricityEstimate, EngineOptions,
};
pub use error::{Error, Result};
pub use graph::{load_graph, load_graph_file, sssp, write_edge_list, SimpleGraph};
pub use reference::{exact_apsp, exact_diameter, exact_eccentricities, exact_radius};
pub use scalar::Scalar;
pub use scaled::{build_delta_oracle, build_multiplicative_oracle, DeltaAnswer};
pub use treewidth::{balance_binary, heuristic_decomposition, validate_decomposition, TreeDecomposition};

pub type Graph = graph::WeightedGraph<f64>;
pub type Clustering = clustering::Clustering<f64>;
pub type EngineOracle = engine::EngineOracle<f64>;
pub type DeltaOracle = scaled::DeltaOracle<f64>;
pub type ScaledOracle = scaled::ScaledOracle<f64>;
pub type ExactMetric = reference::ExactMetric<f64>;
