//! Edge-list text format.
//!
//! ```text
//! # optional comments
//! p <n> <m>
//! <u> <v> <w>      (m lines)
//! ```
//!
//! Ids that all fit in `0..n` are used as-is. Otherwise the distinct ids are
//! sorted and mapped to `0..`, and the mapping is kept in
//! [`LoadedGraph::original_ids`].

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct LoadedGraph<S> {
    pub graph: WeightedGraph<S>,
    /// `original_ids[v]` is the id used in the file for dense vertex `v`.
    pub original_ids: Vec<u64>,
    /// Comment lines (without the leading `#`), in file order.
    pub comments: Vec<String>,
}

impl<S> LoadedGraph<S> {
    pub fn is_identity_mapping(&self) -> bool {
        self.original_ids
            .iter()
            .enumerate()
            .all(|(k, &id)| id == k as u64)
    }

    /// Dense id for an id as written in the input file.
    pub fn dense_id(&self, original: u64) -> Option<usize> {
        if self.is_identity_mapping() {
            return ((original as usize) < self.original_ids.len()).then_some(original as usize);
        }
        self.original_ids.binary_search(&original).ok()
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn load_graph<S: Scalar>(text: &str) -> Result<LoadedGraph<S>> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw: Vec<(u64, u64, S, usize)> = Vec::new();
    let mut comments = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "p" {
            if header.is_some() {
                return Err(parse_err(lineno, "second header line"));
            }
            if tokens.len() != 3 {
                return Err(parse_err(lineno, "header must be `p <n> <m>`"));
            }
            let n = tokens[1]
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad vertex count: {e}")))?;
            let m = tokens[2]
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad edge count: {e}")))?;
            header = Some((n, m));
            continue;
        }
        if header.is_none() {
            return Err(parse_err(lineno, "edge line before `p <n> <m>` header"));
        }
        if tokens.len() != 3 {
            return Err(parse_err(lineno, "edge line must be `u v w`"));
        }
        let u = tokens[0]
            .parse::<u64>()
            .map_err(|e| parse_err(lineno, format!("bad vertex id `{}`: {e}", tokens[0])))?;
        let v = tokens[1]
            .parse::<u64>()
            .map_err(|e| parse_err(lineno, format!("bad vertex id `{}`: {e}", tokens[1])))?;
        let w = tokens[2]
            .parse::<S>()
            .map_err(|e| parse_err(lineno, format!("bad weight `{}`: {e}", tokens[2])))?;
        if !(w > S::zero()) || !w.is_finite() {
            return Err(Error::domain(format!(
                "line {lineno}: weight {w} is not positive"
            )));
        }
        if u == v {
            return Err(Error::domain(format!("line {lineno}: self-loop at {u}")));
        }
        raw.push((u, v, w, lineno));
    }

    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing `p <n> <m>` header"))?;
    if raw.len() != m {
        return Err(parse_err(
            last_line.max(1),
            format!("header announces {m} edges, found {}", raw.len()),
        ));
    }

    let identity = raw.iter().all(|&(u, v, _, _)| (u as usize) < n && (v as usize) < n);
    let original_ids: Vec<u64> = if identity {
        (0..n as u64).collect()
    } else {
        let distinct: BTreeSet<u64> = raw.iter().flat_map(|&(u, v, _, _)| [u, v]).collect();
        if distinct.len() > n {
            return Err(Error::domain(format!(
                "{} distinct vertex ids but header declares {n} vertices",
                distinct.len()
            )));
        }
        let mut ids: Vec<u64> = distinct.into_iter().collect();
        // Declared-but-unused vertices become isolated and get ids past the
        // largest one seen.
        let mut next = ids.last().map_or(0, |&x| x + 1);
        while ids.len() < n {
            ids.push(next);
            next += 1;
        }
        ids
    };
    let dense = |x: u64| -> usize {
        if identity {
            x as usize
        } else {
            original_ids.binary_search(&x).expect("id collected above")
        }
    };

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (u, v, w, lineno) in raw {
        let (a, b) = (dense(u), dense(v));
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::domain(format!(
                "line {lineno}: duplicate edge ({u}, {v})"
            )));
        }
        edges.push((a, b, w));
    }
    let graph = WeightedGraph::from_edges(n, edges)?;
    Ok(LoadedGraph {
        graph,
        original_ids,
        comments,
    })
}

pub fn load_graph_file<S: Scalar>(path: impl AsRef<Path>) -> Result<LoadedGraph<S>> {
    let text = std::fs::read_to_string(path)?;
    load_graph(&text)
}

/// Serializes `graph` in the edge-list format. Weights use Rust's shortest
/// round-trip representation, so the output is stable and reloads exactly.
pub fn write_edge_list<S: Scalar>(graph: &WeightedGraph<S>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "p {} {}", graph.vertex_count(), graph.edge_count());
    for (u, v, w) in graph.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_single_edge() {
        let g = load_graph::<f64>("p 2 1 \n 0 1 2.5").unwrap();
        assert_eq!(g.graph.vertex_count(), 2);
        assert_eq!(g.graph.edge_count(), 1);
        assert_eq!(g.graph.weight(0, 1), Some(2.5));
        assert!(g.is_identity_mapping());
    }

    #[test]
    fn negative_weight_is_domain_error() {
        assert!(matches!(
            load_graph::<f64>("p 2 1 \n 0 1 -1"),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn duplicate_edge_is_domain_error() {
        assert!(matches!(
            load_graph::<f64>("p 2 2\n0 1 2 \n 1 0 3"),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_graph::<f64>("# c\np 3 2\n0 1 1\n1 x 2\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load_graph::<f64>("p 3 2\n0 1 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(load_graph::<f64>("0 1 1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn remaps_one_based_ids_and_handles_crlf() {
        let g = load_graph::<f64>("# one-based\r\np 3 2\r\n1 2 1.0\r\n2 3 4\r\n").unwrap();
        assert_eq!(g.original_ids, vec![1, 2, 3]);
        assert_eq!(g.graph.weight(1, 2), Some(4.0));
        assert_eq!(g.dense_id(3), Some(2));
        assert_eq!(g.dense_id(0), None);
        assert_eq!(g.comments, vec!["one-based".to_string()]);
    }

    #[test]
    fn write_then_load_is_identity() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 0.1f64), (1, 2, 3.25)]).unwrap();
        let text = write_edge_list(&g, &["demo".into()]);
        let back = load_graph::<f64>(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(text, write_edge_list(&back.graph, &["demo".into()]));
    }
}
