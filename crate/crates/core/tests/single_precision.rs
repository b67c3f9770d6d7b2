//! The same pipeline instantiated with `f32` weights.

use metric_engine::apex::{apex_diameter, ApexInput};
use metric_engine::engine::{approx_diameter, run_eccentricities, EngineOptions};
use metric_engine::generators::{generate, Family, GenSpec, Weights};
use metric_engine::reference::exact_apsp;
use metric_engine::scaled::build_multiplicative_oracle;

fn grid(rows: usize, cols: usize, seed: u64) -> metric_engine::graph::WeightedGraph<f32> {
    generate::<f32>(&GenSpec {
        family: Family::Grid { rows, cols },
        weights: Weights::Uniform { lo: 1.0, hi: 10.0 },
        seed,
    })
    .unwrap()
    .graph
}

#[test]
fn eccentricities_in_f32() {
    let g = grid(9, 11, 1);
    let m = exact_apsp(&g).unwrap();
    let ecc = m.eccentricities().unwrap();
    let diam = m.diameter().unwrap();
    let eps = 0.25f32;
    let run = run_eccentricities(&g, eps, EngineOptions::default()).unwrap();
    for e in &run.estimates {
        assert!((e.value - ecc[e.vertex]).abs() <= eps * diam);
    }
    let d = approx_diameter(&g, eps).unwrap();
    assert!((d - diam).abs() <= eps * diam);
}

#[test]
fn multiplicative_oracle_in_f32() {
    let g = grid(6, 7, 2);
    let m = exact_apsp(&g).unwrap();
    let o = build_multiplicative_oracle(&g, 0.5f32).unwrap();
    for u in 0..g.vertex_count() {
        for v in 0..g.vertex_count() {
            let x = o.query(u, v).unwrap();
            assert!(x >= m.dist(u, v) && x <= 1.5 * m.dist(u, v) * (1.0 + 1e-6));
        }
    }
}

#[test]
fn apex_diameter_in_f32() {
    let gen = generate::<f32>(&GenSpec {
        family: Family::GridApex {
            rows: 8,
            cols: 8,
            apices: 1,
            attach: 0.1,
        },
        weights: Weights::Unit,
        seed: 3,
    })
    .unwrap();
    let input = ApexInput::new(gen.graph, gen.apices).unwrap();
    let diam = exact_apsp(&input.graph).unwrap().diameter().unwrap() as f64;
    let est = apex_diameter(&input, 0.5f32).unwrap().estimate;
    assert!(est <= 1.5 * diam && diam <= 1.5 * est);
}
