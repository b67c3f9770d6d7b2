//! Set systems cut out by distance-difference thresholds, and brute-force
//! VC dimension for small ground sets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{sssp, WeightedGraph};
use crate::scalar::Scalar;

/// Largest ground set [`vc_dimension`] accepts.
pub const MAX_VC_GROUND: usize = 20;

/// Family of distinct subsets of `0..ground_size`, each stored as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    pub ground_size: usize,
    sets: Vec<Vec<u64>>,
}

impl SetSystem {
    /// Builds a system from explicit member lists; duplicate sets collapse.
    pub fn from_sets<I, J>(ground_size: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = usize>,
    {
        let words = ground_size.div_ceil(64);
        let mut distinct = BTreeSet::new();
        for set in sets {
            let mut bits = vec![0u64; words];
            for x in set {
                if x >= ground_size {
                    return Err(Error::domain(format!(
                        "element {x} outside ground set of size {ground_size}"
                    )));
                }
                bits[x / 64] |= 1 << (x % 64);
            }
            distinct.insert(bits);
        }
        Ok(SetSystem {
            ground_size,
            sets: distinct.into_iter().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Members of every set, in a canonical order.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|bits| {
                (0..self.ground_size)
                    .filter(|&x| bits[x / 64] >> (x % 64) & 1 == 1)
                    .collect()
            })
            .collect()
    }
}

/// For terminals `s_0..s_{k-1}` and thresholds `m`, the family of sets
/// `{(i, j) : d(v, s_i) - d(v, s_0) <= m[j]}` over all vertices `v`.
///
/// Pair `(i, j)` with `1 <= i < k` is ground element `(i - 1) * |m| + j`.
/// Unreachable terminals never satisfy a threshold.
pub fn lp_hat_system<S: Scalar>(
    g: &WeightedGraph<S>,
    terminals: &[usize],
    thresholds: &[S],
) -> Result<SetSystem> {
    if terminals.is_empty() {
        return Err(Error::domain("at least one terminal is required"));
    }
    let rows = terminals
        .iter()
        .map(|&s| sssp(g, s).map(|r| r.dist))
        .collect::<Result<Vec<_>>>()?;
    let k = terminals.len();
    let m = thresholds.len();
    let sets = (0..g.vertex_count()).map(|v| {
        let base = rows[0][v];
        let rows = &rows;
        (1..k).flat_map(move |i| {
            let diff = rows[i][v] - base;
            thresholds
                .iter()
                .enumerate()
                .filter(move |&(_, &t)| diff <= t)
                .map(move |(j, _)| (i - 1) * m + j)
        })
    });
    SetSystem::from_sets((k - 1) * m, sets)
}

/// Size of the largest shattered subset of the ground set.
///
/// Candidate subsets are enumerated by increasing size; the search stops at
/// the first size with no shattered subset.
pub fn vc_dimension(system: &SetSystem) -> Result<usize> {
    let m = system.ground_size;
    if m > MAX_VC_GROUND {
        return Err(Error::Capacity(format!(
            "ground set of size {m} exceeds the brute-force limit {MAX_VC_GROUND}"
        )));
    }
    let masks: Vec<u32> = system.sets.iter().map(|b| b.first().copied().unwrap_or(0) as u32).collect();
    let mut best = 0;
    let mut traces = Vec::with_capacity(masks.len());
    for d in 1..=m {
        if masks.len() < 1 << d {
            break;
        }
        let shattered = subsets_of_size(m, d).any(|x| {
            traces.clear();
            traces.extend(masks.iter().map(|&s| s & x));
            traces.sort_unstable();
            traces.dedup();
            traces.len() == 1 << d
        });
        if !shattered {
            break;
        }
        best = d;
    }
    Ok(best)
}

/// Bitmasks over `0..m` with exactly `d` bits set, in increasing order.
fn subsets_of_size(m: usize, d: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << m;
    let mut next = Some((1u64 << d) - 1);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            return None;
        }
        // Gosper's hack.
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        next = Some((((r ^ cur) >> 2) / c) | r);
        Some(cur as u32)
    })
}

/// `sum_{i <= d} C(m, i)`, the most sets a family of VC dimension `d` on `m`
/// elements can have.
pub fn sauer_shelah_bound(m: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=d.min(m) {
        if i > 0 {
            binom = binom * (m - i + 1) as u128 / i as u128;
        }
        total += binom;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_set_of_two() {
        let s = SetSystem::from_sets(2, vec![vec![], vec![0], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(vc_dimension(&s).unwrap(), 2);
    }

    #[test]
    fn singletons_have_dimension_one() {
        let s = SetSystem::from_sets(5, (0..5).map(|i| vec![i])).unwrap();
        assert_eq!(vc_dimension(&s).unwrap(), 1);
    }

    #[test]
    fn lone_empty_set() {
        let s = SetSystem::from_sets(4, vec![Vec::<usize>::new()]).unwrap();
        assert_eq!(vc_dimension(&s).unwrap(), 0);
    }

    #[test]
    fn large_ground_set_is_capacity_error() {
        let s = SetSystem::from_sets(21, vec![vec![0]]).unwrap();
        assert!(matches!(vc_dimension(&s), Err(Error::Capacity(_))));
    }

    #[test]
    fn three_path_system() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let s = lp_hat_system(&g, &[0, 2], &[0.0]).unwrap();
        assert_eq!(s.ground_size, 1);
        assert_eq!(s.sets(), vec![vec![], vec![0]]);
    }

    #[test]
    fn single_terminal_and_huge_threshold() {
        let g = WeightedGraph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let s = lp_hat_system(&g, &[1], &[0.0, 1.0]).unwrap();
        assert_eq!(s.sets(), vec![Vec::<usize>::new()]);
        let s = lp_hat_system(&g, &[0, 1, 2], &[1e18]).unwrap();
        assert_eq!(s.sets(), vec![vec![0, 1]]);
    }

    #[test]
    fn gosper_enumeration() {
        let all: Vec<u32> = subsets_of_size(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(subsets_of_size(20, 10).count(), 184_756);
    }

    #[test]
    fn sauer_shelah_values() {
        assert_eq!(sauer_shelah_bound(4, 0), 1);
        assert_eq!(sauer_shelah_bound(4, 2), 1 + 4 + 6);
        assert_eq!(sauer_shelah_bound(4, 9), 16);
        assert_eq!(sauer_shelah_bound(100, 3), 1 + 100 + 4950 + 161_700);
    }
}
