use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::TreeDecomposition;
use crate::graph::SimpleGraph;

/// Greedy min-fill elimination order. Ties go to the smaller current degree,
/// then to the smaller vertex id.
pub fn elimination_order(h: &SimpleGraph) -> Vec<usize> {
    eliminate(h).0
}

/// Tree decomposition from a min-fill elimination order.
///
/// The bag of `v` is `v` plus its neighbors at the time it is eliminated.
/// Bags contained in a neighboring bag are merged away, so the result has at
/// most `max(1, n)` nodes. An empty graph yields a single empty bag.
pub fn heuristic_decomposition(h: &SimpleGraph) -> TreeDecomposition {
    let n = h.vertex_count();
    if n == 0 {
        return TreeDecomposition::from_parts(vec![None], vec![Vec::new()]);
    }
    let (order, later) = eliminate(h);
    let mut position = vec![0usize; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut bags: Vec<Vec<u32>> = Vec::with_capacity(n);
    for v in 0..n {
        parent[v] = later[v].iter().map(|&u| u as usize).min_by_key(|&u| position[u]);
        let mut bag = later[v].clone();
        bag.push(v as u32);
        bags.push(bag);
    }
    // One tree per connected component; hang all of them under the root
    // eliminated last. Their bags are disjoint, so this keeps validity.
    let root = *order.last().expect("n > 0");
    for (v, p) in parent.iter_mut().enumerate() {
        if v != root && p.is_none() {
            *p = Some(root);
        }
    }
    compress(TreeDecomposition::from_parts(parent, bags))
}

/// Membership marks that reset in O(1).
struct Marks {
    stamp: Vec<u32>,
    now: u32,
}

impl Marks {
    fn new(n: usize) -> Self {
        Marks {
            stamp: vec![0; n],
            now: 0,
        }
    }

    fn set(&mut self, items: &[u32]) {
        self.now += 1;
        for &x in items {
            self.stamp[x as usize] = self.now;
        }
    }

    fn add(&mut self, x: u32) {
        self.stamp[x as usize] = self.now;
    }

    #[inline]
    fn has(&self, x: u32) -> bool {
        self.stamp[x as usize] == self.now
    }
}

/// Runs the elimination game; returns the order and, per vertex, its
/// neighbors at elimination time (all eliminated later).
fn eliminate(h: &SimpleGraph) -> (Vec<usize>, Vec<Vec<u32>>) {
    let n = h.vertex_count();
    let mut adj: Vec<Vec<u32>> = (0..n).map(|v| h.neighbors(v).to_vec()).collect();
    let mut of_a = Marks::new(n);
    let mut of_b = Marks::new(n);
    let mut fill: Vec<i64> = (0..n)
        .map(|v| {
            let mut missing = 0;
            for (k, &a) in adj[v].iter().enumerate() {
                of_a.set(&adj[a as usize]);
                missing += adj[v][k + 1..].iter().filter(|&&b| !of_a.has(b)).count() as i64;
            }
            missing
        })
        .collect();
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(i64, usize, usize)>> = (0..n)
        .map(|v| Reverse((fill[v], adj[v].len(), v)))
        .collect();

    let mut order = Vec::with_capacity(n);
    let mut later = vec![Vec::new(); n];
    let mut touched = Vec::new();
    while let Some(Reverse((f, d, v))) = heap.pop() {
        if done[v] || f != fill[v] || d != adj[v].len() {
            continue;
        }
        done[v] = true;
        order.push(v);
        let mut nbrs = std::mem::take(&mut adj[v]);
        nbrs.sort_unstable();

        touched.clear();
        touched.extend(nbrs.iter().map(|&x| x as usize));
        // Turn the neighborhood into a clique.
        for (k, &a) in nbrs.iter().enumerate() {
            of_a.set(&adj[a as usize]);
            for &b in &nbrs[k + 1..] {
                if of_a.has(b) {
                    continue;
                }
                let (ai, bi) = (a as usize, b as usize);
                of_b.set(&adj[bi]);
                let mut only_a = 0;
                for &x in &adj[ai] {
                    if of_b.has(x) {
                        fill[x as usize] -= 1;
                        touched.push(x as usize);
                    } else {
                        only_a += 1;
                    }
                }
                let common = adj[ai].len() - only_a;
                fill[ai] += only_a as i64;
                fill[bi] += (adj[bi].len() - common) as i64;
                adj[ai].push(b);
                adj[bi].push(a);
                of_a.add(b);
            }
        }
        // Drop v: pairs (v, y) that were missing at neighbor x disappear.
        // After the clique step these are the y outside N[v].
        of_a.set(&nbrs);
        for &x in &nbrs {
            let x = x as usize;
            let list = &mut adj[x];
            let at = list.iter().position(|&y| y as usize == v).expect("symmetric adjacency");
            list.swap_remove(at);
            let lost = list.iter().filter(|&&y| !of_a.has(y)).count() as i64;
            fill[x] -= lost;
        }
        touched.sort_unstable();
        touched.dedup();
        for &x in &touched {
            if !done[x] {
                heap.push(Reverse((fill[x], adj[x].len(), x)));
            }
        }
        later[v] = nbrs;
    }
    (order, later)
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    // Both sorted.
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Merges every node whose bag is comparable with its parent's bag into the
/// parent, then renumbers nodes in breadth-first order.
pub(crate) fn compress(td: TreeDecomposition) -> TreeDecomposition {
    let order = td.top_down();
    let nodes = td.node_count();
    let mut rep: Vec<usize> = (0..nodes).collect();
    let mut bags = td.bags.clone();
    for &t in &order {
        let Some(p) = td.parent[t] else { continue };
        let q = rep[p];
        if is_subset(&bags[t], &bags[q]) {
            rep[t] = q;
        } else if is_subset(&bags[q], &bags[t]) {
            bags[q] = std::mem::take(&mut bags[t]);
            rep[t] = q;
        }
    }
    let mut new_id = vec![usize::MAX; nodes];
    let mut kept = Vec::new();
    for &t in &order {
        if rep[t] == t {
            new_id[t] = kept.len();
            kept.push(t);
        }
    }
    let parent = kept
        .iter()
        .map(|&t| td.parent[t].map(|p| new_id[rep[p]]))
        .collect();
    let bags = kept.iter().map(|&t| std::mem::take(&mut bags[t])).collect();
    TreeDecomposition::from_parts(parent, bags)
}
