//! Exact distances cross-checked against independent textbook algorithms.

use metric_engine::generators::{generate, Family, GenSpec, Weights};
use metric_engine::graph::WeightedGraph;
use metric_engine::reference::exact_apsp;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bellman_ford(g: &WeightedGraph<f64>, s: usize) -> Vec<f64> {
    let n = g.vertex_count();
    let edges: Vec<_> = g.edges().collect();
    let mut d = vec![f64::INFINITY; n];
    d[s] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in &edges {
            if d[u] + w < d[v] {
                d[v] = d[u] + w;
                changed = true;
            }
            if d[v] + w < d[u] {
                d[u] = d[v] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    d
}

fn floyd(g: &WeightedGraph<f64>) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (u, v, w) in g.edges() {
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn random_graph(seed: u64) -> WeightedGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..40);
    let p = rng.gen_range(0.05..0.4);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                // Dyadic weights: sums are exact regardless of order.
                edges.push((u, v, f64::from(rng.gen_range(1u32..=4096)) / 256.0));
            }
        }
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

#[test]
fn dijkstra_matches_bellman_ford_on_random_graphs() {
    for seed in 0..50 {
        let g = random_graph(seed);
        let m = exact_apsp(&g).unwrap();
        for s in 0..g.vertex_count() {
            assert_eq!(m.row(s), bellman_ford(&g, s).as_slice(), "seed {seed} source {s}");
        }
    }
}

#[test]
fn dijkstra_matches_floyd_on_grids() {
    for seed in 0..5 {
        let g = generate::<f64>(&GenSpec {
            family: Family::Grid { rows: 7, cols: 9 },
            weights: Weights::Uniform { lo: 1.0, hi: 10.0 },
            seed,
        })
        .unwrap()
        .graph;
        let m = exact_apsp(&g).unwrap();
        let f = floyd(&g);
        for (u, row) in f.iter().enumerate() {
            assert_eq!(m.row(u), row.as_slice());
        }
    }
}

#[test]
fn metric_axioms() {
    for seed in 100..110 {
        let g = random_graph(seed);
        let m = exact_apsp(&g).unwrap();
        let n = g.vertex_count();
        let scale = g.max_weight().unwrap_or(1.0) * n as f64;
        for u in 0..n {
            assert_eq!(m.dist(u, u), 0.0);
            for v in 0..n {
                assert_eq!(m.dist(u, v), m.dist(v, u));
                for w in 0..n {
                    assert!(m.dist(u, v) <= m.dist(u, w) + m.dist(w, v) + 1e-9 * scale);
                }
            }
        }
    }
}

#[test]
fn diameter_and_radius_of_paths() {
    for len in 1..12usize {
        let g = WeightedGraph::from_edges(len + 1, (0..len).map(|i| (i, i + 1, 1.0))).unwrap();
        let m = exact_apsp(&g).unwrap();
        assert_eq!(m.diameter().unwrap(), len as f64);
        assert_eq!(m.radius().unwrap(), len.div_ceil(2) as f64);
        let ecc = m.eccentricities().unwrap();
        assert_eq!(m.diameter().unwrap(), ecc.iter().copied().fold(0.0, f64::max));
        assert_eq!(m.radius().unwrap(), ecc.iter().copied().fold(f64::INFINITY, f64::min));
    }
}

#[test]
fn complete_graph_is_flat() {
    let n = 6;
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0)));
    let m = exact_apsp(&WeightedGraph::from_edges(n, edges).unwrap()).unwrap();
    assert_eq!(m.diameter().unwrap(), 1.0);
    assert_eq!(m.radius().unwrap(), 1.0);
}
