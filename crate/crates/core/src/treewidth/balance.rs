use serde::Serialize;

use super::minfill::compress;
use super::TreeDecomposition;

/// Binary tree decomposition of logarithmic depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedDecomposition {
    pub tree: TreeDecomposition,
    pub depth: usize,
}

impl BalancedDecomposition {
    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }

    pub fn width(&self) -> usize {
        self.tree.width()
    }

    pub fn root(&self) -> usize {
        self.tree.root()
    }
}

/// Depth envelope guaranteed by [`balance_binary`] for a tree with
/// `node_count` nodes.
pub fn depth_bound(node_count: usize) -> usize {
    let mut log = 0;
    while (1usize << log) < node_count + 1 {
        log += 1;
    }
    4 * log + 4
}

/// Rebuilds a valid decomposition as a binary tree of depth
/// `O(log nodes)` and width at most `4 * (width + 1) - 1`.
///
/// The tree is first compressed and made to have maximum degree three. Then
/// a component of the remaining tree is split at a node that is either its
/// centroid or, when the component hangs off three earlier split nodes, the
/// median of the three attachment points. The new bag is the chosen bag plus
/// the adhesion sets on every edge leaving the component.
pub fn balance_binary(td: &TreeDecomposition) -> BalancedDecomposition {
    let input_width = td.width();
    let compact = compress(td.clone());
    let vertices = compact
        .bags()
        .iter()
        .flatten()
        .map(|&x| x as usize + 1)
        .max()
        .unwrap_or(0);

    let (adj, bags) = binarize(&compact);
    let mut builder = Builder {
        adj: &adj,
        bags: &bags,
        removed: vec![false; bags.len()],
        parent: Vec::new(),
        out_bags: Vec::new(),
        scratch: Scratch::new(bags.len()),
    };
    builder.split(0, None);
    let tree = TreeDecomposition::from_parts(builder.parent, builder.out_bags);
    let depth = tree.depth();

    assert!(
        tree.width() < 4 * (input_width + 1),
        "balanced width {} exceeds 4 * ({input_width} + 1) - 1",
        tree.width()
    );
    assert!(
        (0..tree.node_count()).all(|t| tree.children(t).len() <= 2),
        "balanced decomposition is not binary"
    );
    assert!(
        depth <= depth_bound(tree.node_count()),
        "depth {depth} over bound for {} nodes",
        tree.node_count()
    );
    assert!(
        tree.node_count() <= 4 * vertices + 4,
        "{} nodes for {vertices} vertices",
        tree.node_count()
    );
    BalancedDecomposition { tree, depth }
}

/// Undirected tree of maximum degree three: a node with more than two
/// children keeps its first child and passes the rest down a chain of copies
/// of itself.
fn binarize(td: &TreeDecomposition) -> (Vec<Vec<usize>>, Vec<Vec<u32>>) {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); td.node_count()];
    let mut bags: Vec<Vec<u32>> = td.bags().to_vec();
    fn link(adj: &mut [Vec<usize>], a: usize, b: usize) {
        adj[a].push(b);
        adj[b].push(a);
    }
    for t in 0..td.node_count() {
        let kids = td.children(t);
        let mut holder = t;
        for (k, &c) in kids.iter().enumerate() {
            let left = kids.len() - k;
            if left >= 2 && k > 0 {
                let copy = adj.len();
                adj.push(Vec::new());
                bags.push(bags[t].clone());
                link(&mut adj, holder, copy);
                holder = copy;
            }
            link(&mut adj, holder, c);
        }
    }
    (adj, bags)
}

struct Scratch {
    mark: Vec<u32>,
    epoch: u32,
    size: Vec<usize>,
    up: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            mark: vec![0; n],
            epoch: 0,
            size: vec![0; n],
            up: vec![usize::MAX; n],
        }
    }
}

struct Builder<'a> {
    adj: &'a [Vec<usize>],
    bags: &'a [Vec<u32>],
    removed: Vec<bool>,
    parent: Vec<Option<usize>>,
    out_bags: Vec<Vec<u32>>,
    scratch: Scratch,
}

impl Builder<'_> {
    /// Nodes of the component containing `start` in breadth-first order, with
    /// `scratch.up` set to the search parent.
    fn component(&mut self, start: usize) -> Vec<usize> {
        let s = &mut self.scratch;
        s.epoch += 1;
        let mut order = vec![start];
        s.mark[start] = s.epoch;
        s.up[start] = usize::MAX;
        let mut k = 0;
        while k < order.len() {
            let x = order[k];
            k += 1;
            for &y in &self.adj[x] {
                if !self.removed[y] && s.mark[y] != s.epoch {
                    s.mark[y] = s.epoch;
                    s.up[y] = x;
                    order.push(y);
                }
            }
        }
        order
    }

    fn split(&mut self, start: usize, out_parent: Option<usize>) {
        let comp = self.component(start);
        let boundary: Vec<(usize, usize)> = comp
            .iter()
            .flat_map(|&s| {
                self.adj[s]
                    .iter()
                    .filter(|&&o| self.removed[o])
                    .map(move |&o| (s, o))
            })
            .collect();
        debug_assert!(boundary.len() <= 3);

        let pick = if boundary.len() >= 3 {
            self.median(&comp, boundary[0].0, boundary[1].0, boundary[2].0)
        } else {
            self.centroid(&comp)
        };

        let mut bag = self.bags[pick].clone();
        for &(s, o) in &boundary {
            bag.extend(intersect(&self.bags[s], &self.bags[o]));
        }
        let me = self.parent.len();
        self.parent.push(out_parent);
        self.out_bags.push(bag);
        self.removed[pick] = true;

        let starts: Vec<usize> = self.adj[pick]
            .iter()
            .copied()
            .filter(|&y| !self.removed[y])
            .collect();
        let mut holder = me;
        for (k, &y) in starts.iter().enumerate() {
            // A third child goes under a copy so the tree stays binary.
            if k == 1 && starts.len() == 3 {
                let copy = self.parent.len();
                self.parent.push(Some(me));
                self.out_bags.push(self.out_bags[me].clone());
                holder = copy;
            }
            self.split(y, Some(holder));
        }
    }

    fn centroid(&mut self, comp: &[usize]) -> usize {
        let total = comp.len();
        let s = &mut self.scratch;
        for &x in comp.iter().rev() {
            s.size[x] = 1;
        }
        for &x in comp.iter().rev() {
            let u = s.up[x];
            if u != usize::MAX {
                s.size[u] += s.size[x];
            }
        }
        for &x in comp {
            let mut largest = total - s.size[x];
            for &y in &self.adj[x] {
                if !self.removed[y] && s.up[y] == x {
                    largest = largest.max(s.size[y]);
                }
            }
            if 2 * largest <= total {
                return x;
            }
        }
        unreachable!("every tree has a centroid")
    }

    /// Node lying on all three paths between `a`, `b` and `c`.
    fn median(&mut self, comp: &[usize], a: usize, b: usize, c: usize) -> usize {
        // `component` rooted the search at comp[0]; depths follow from `up`.
        let s = &mut self.scratch;
        for &x in comp {
            let u = s.up[x];
            s.size[x] = if u == usize::MAX { 0 } else { s.size[u] + 1 };
        }
        let lca = |mut x: usize, mut y: usize, s: &Scratch| {
            while s.size[x] > s.size[y] {
                x = s.up[x];
            }
            while s.size[y] > s.size[x] {
                y = s.up[y];
            }
            while x != y {
                x = s.up[x];
                y = s.up[y];
            }
            x
        };
        let (ab, bc, ac) = (lca(a, b, s), lca(b, c, s), lca(a, c, s));
        // The median is the deepest of the three pairwise meeting points.
        [ab, bc, ac]
            .into_iter()
            .max_by_key(|&x| s.size[x])
            .expect("three candidates")
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
