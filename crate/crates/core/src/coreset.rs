//! Additive core-sets over distance tuples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distances (exact or approximate) from one vertex to an ordered list of
/// terminals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceTuple<S> {
    pub values: Vec<S>,
}

impl<S: Scalar> DistanceTuple<S> {
    pub fn new(values: Vec<S>) -> Self {
        DistanceTuple { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Chebyshev distance to `other`; tuples must have equal length.
    pub fn linf(&self, other: &Self) -> S {
        linf(&self.values, &other.values)
    }
}

pub(crate) fn linf<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut worst = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        let gap = if x == y { S::zero() } else { (x - y).abs() };
        // Infinite coordinates on both sides count as equal; a NaN gap means
        // one side is infinite and the other is not.
        if gap.is_nan() || gap > worst {
            worst = if gap.is_nan() { S::infinity() } else { gap };
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreSet<S> {
    /// Indices into the input list, increasing.
    pub members: Vec<usize>,
    /// Additive bound the set certifies (five times the input error).
    pub guarantee: S,
}

impl<S> CoreSet<S> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Greedy core-set: scans elements in index order and keeps an element
/// unless a kept one lies within `3 * delta` of it.
///
/// If every tuple is within `delta` of the exact one, the kept elements cover
/// every element within `5 * delta` in the exact metric.
pub fn greedy_coreset<S: Scalar>(tuples: &[DistanceTuple<S>], delta: S) -> Result<CoreSet<S>> {
    if !(delta > S::zero()) || !delta.is_finite() {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let k = tuples.first().map_or(0, DistanceTuple::len);
    if let Some(bad) = tuples.iter().position(|t| t.len() != k) {
        return Err(Error::domain(format!(
            "tuple {bad} has length {}, expected {k}",
            tuples[bad].len()
        )));
    }
    let rows: Vec<&[S]> = tuples.iter().map(|t| t.values.as_slice()).collect();
    Ok(CoreSet {
        members: greedy_rows(&rows, delta),
        guarantee: S::of(5.0) * delta,
    })
}

/// Greedy selection over equal-length rows.
///
/// Kept rows are indexed by their first coordinate so that each candidate is
/// only compared against members whose first coordinate is within the
/// threshold.
pub(crate) fn greedy_rows<S: Scalar>(rows: &[&[S]], delta: S) -> Vec<usize> {
    let threshold = S::of(3.0) * delta;
    let mut members = Vec::new();
    if rows.first().is_none_or(|r| r.is_empty()) {
        // No terminals: every element has the empty tuple.
        if !rows.is_empty() {
            members.push(0);
        }
        return members;
    }
    // (first coordinate, index) of members, sorted; infinite keys sort last.
    let mut index: Vec<(S, usize)> = Vec::new();
    for (v, row) in rows.iter().enumerate() {
        let key = row[0];
        let lo = index.partition_point(|&(x, _)| key - x > threshold);
        let covered = index[lo..]
            .iter()
            .take_while(|&&(x, _)| !(x - key > threshold))
            .any(|&(_, u)| linf(rows[u], row) <= threshold);
        if !covered {
            members.push(v);
            let at = index.partition_point(|&(x, _)| x <= key);
            index.insert(at, (key, v));
        }
    }
    members
}

/// Result of checking a candidate core-set against exact tuples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoresetCheck<S> {
    pub passed: bool,
    /// Element farthest from every member, with its gap.
    pub worst_element: Option<usize>,
    pub worst_gap: S,
}

/// Checks that every element lies within `bound` of some member in the exact
/// Chebyshev metric.
pub fn verify_coreset<S: Scalar>(
    exact: &[DistanceTuple<S>],
    members: &[usize],
    bound: S,
) -> CoresetCheck<S> {
    let mut worst_element = None;
    let mut worst_gap = S::zero();
    for (v, t) in exact.iter().enumerate() {
        let gap = members
            .iter()
            .map(|&u| exact[u].linf(t))
            .fold(S::infinity(), S::min);
        if worst_element.is_none() || gap > worst_gap {
            worst_element = Some(v);
            worst_gap = gap;
        }
    }
    CoresetCheck {
        passed: worst_element.is_none() || worst_gap <= bound,
        worst_element,
        worst_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(rows: &[&[f64]]) -> Vec<DistanceTuple<f64>> {
        rows.iter().map(|r| DistanceTuple::new(r.to_vec())).collect()
    }

    #[test]
    fn identical_tuples_keep_first() {
        let y = tuples(&[&[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0]]);
        let c = greedy_coreset(&y, 0.5).unwrap();
        assert_eq!(c.members, vec![0]);
        assert_eq!(c.guarantee, 2.5);
    }

    #[test]
    fn spread_tuples_all_kept() {
        let y = tuples(&[&[0.0], &[10.0], &[20.0]]);
        assert_eq!(greedy_coreset(&y, 1.0).unwrap().members, vec![0, 1, 2]);
    }

    #[test]
    fn three_delta_rule() {
        let y = tuples(&[&[0.0], &[2.0], &[4.0]]);
        assert_eq!(greedy_coreset(&y, 1.0).unwrap().members, vec![0, 2]);
    }

    #[test]
    fn empty_and_errors() {
        assert!(greedy_coreset::<f64>(&[], 1.0).unwrap().is_empty());
        let y = tuples(&[&[0.0], &[1.0, 2.0]]);
        assert!(matches!(greedy_coreset(&y, 1.0), Err(Error::Domain(_))));
        assert!(matches!(greedy_coreset(&y[..1], 0.0), Err(Error::Domain(_))));
        let no_terminals = tuples(&[&[], &[]]);
        assert_eq!(greedy_coreset(&no_terminals, 1.0).unwrap().members, vec![0]);
    }

    #[test]
    fn index_does_not_miss_neighbors() {
        // Brute-force reimplementation of the rule.
        let raw: Vec<Vec<f64>> = (0..60)
            .map(|i| vec![((i * 37) % 23) as f64, ((i * 11) % 7) as f64 * 2.0])
            .collect();
        let y: Vec<_> = raw.iter().map(|r| DistanceTuple::new(r.clone())).collect();
        let got = greedy_coreset(&y, 0.9).unwrap().members;
        let mut expect: Vec<usize> = Vec::new();
        for v in 0..raw.len() {
            if !expect.iter().any(|&u| {
                raw[u]
                    .iter()
                    .zip(&raw[v])
                    .all(|(a, b)| (a - b).abs() <= 2.7 + 1e-12)
            }) {
                expect.push(v);
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn infinite_coordinates() {
        let inf = f64::INFINITY;
        let y = tuples(&[&[inf, 1.0], &[inf, 1.5], &[0.0, 1.0]]);
        assert_eq!(greedy_coreset(&y, 1.0).unwrap().members, vec![0, 2]);
    }

    #[test]
    fn verify_examples() {
        let exact = tuples(&[&[0.0], &[3.0], &[9.0]]);
        let all = verify_coreset(&exact, &[0, 1, 2], 0.0);
        assert!(all.passed);
        assert_eq!(all.worst_gap, 0.0);

        let single = verify_coreset(&exact, &[0], 5.0);
        assert!(!single.passed);
        assert_eq!(single.worst_element, Some(2));
        assert_eq!(single.worst_gap, 9.0);
    }
}
