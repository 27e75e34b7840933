//! Uniform spanning trees and their balanced binary overlay.
//!
//! A spanning tree drawn uniformly at random has two properties this
//! crate leans on: each graph edge appears with probability equal to
//! its effective resistance, and the expected number of tree edges cut
//! by a labeling equals the resistance-weighted cut size of the graph.
//! The tree is then flattened by a depth-first traversal and a complete
//! binary tree is laid over the visit order, padded with dummy leaves
//! up to a power of two. Distances in the overlay are at most twice its
//! depth, which is what makes polylogarithmic per-round work possible.

use rand::Rng;

use crate::graph::{Graph, Labeling};
use crate::{Error, Result};

/// Total random-walk steps allowed while sampling one tree.
/// Total random-walk steps allowed before a sampling run aborts.
pub const WALK_STEP_CAP: u64 = 10_000_000;

/// Spanning tree of a graph, edges in the order the sampler committed
/// them, endpoints low before high.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The tree as a validated graph, for path and resistance queries.
    pub fn to_graph(&self) -> Graph {
        Graph::build(self.n, &self.edges).expect("spanning tree is a valid graph")
    }

    /// Tree edges whose endpoints carry different labels.
    pub fn cut_size(&self, lab: &Labeling) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| lab.label(u) != lab.label(v))
            .count()
    }

    /// Cut edges of the tree with exactly one endpoint in class `k`.
    pub fn per_class_cut_size(&self, lab: &Labeling, k: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| {
                let (a, b) = (lab.label(u), lab.label(v));
                a != b && (a == k || b == k)
            })
            .count()
    }
}

/// Samples a spanning tree uniformly at random by loop-erased random
/// walks from each vertex toward the growing tree, rooted at vertex 1.
/// Fails with `WalkCap` if the walks exceed a global step budget.
pub fn sample_uniform_spanning_tree<R: Rng>(g: &Graph, rng: &mut R) -> Result<SpanningTree> {
    let n = g.n();
    let mut in_tree = vec![false; n + 1];
    let mut next = vec![0usize; n + 1];
    let mut edges = Vec::with_capacity(n - 1);
    in_tree[1] = true;
    let mut steps: u64 = 0;
    for start in 2..=n {
        if in_tree[start] {
            continue;
        }
        let mut u = start;
        while !in_tree[u] {
            steps += 1;
            if steps > WALK_STEP_CAP {
                return Err(Error::WalkCap(WALK_STEP_CAP));
            }
            let nbrs = g.neighbors(u);
            let (v, _) = nbrs[rng.gen_range(0..nbrs.len())];
            next[u] = v;
            u = v;
        }
        // The walk minus its loops survives in `next`; commit it.
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            let v = next[u];
            edges.push((u.min(v), u.max(v)));
            u = v;
        }
    }
    Ok(SpanningTree { n, edges })
}

/// First-visit order of a depth-first traversal from `root`, taking
/// neighbors in ascending index order.
pub fn linearize(t: &SpanningTree, root: usize) -> Vec<usize> {
    let g = t.to_graph();
    let mut order = Vec::with_capacity(t.n);
    let mut seen = vec![false; t.n + 1];
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        order.push(v);
        // Reverse push so the smallest neighbor is visited first.
        for &(w, _) in g.neighbors(v).iter().rev() {
            if !seen[w] {
                stack.push(w);
            }
        }
    }
    order
}

/// Complete binary tree over a vertex ordering.
///
/// With `n_pad` the order length rounded up to a power of two, leaves
/// occupy ids `1..=n_pad` left to right and internal vertices continue
/// bottom-up, the root being `2 * n_pad - 1`. Slots past the order
/// length are dummy leaves labeled 0; every internal vertex inherits
/// the label of its left child, so a label of 0 marks an all-dummy
/// subtree. Dummy-touching edges never count as cut edges.
#[derive(Debug, Clone)]
pub struct Bst {
    n: usize,
    n_pad: usize,
    leaf_of: Vec<usize>,
    vertex_at: Vec<usize>,
    labels: Vec<usize>,
}

impl Bst {
    /// Lays the overlay tree over `order`, which must list each graph
    /// vertex exactly once.
    pub fn build(order: &[usize], lab: &Labeling) -> Bst {
        let n = order.len();
        assert_eq!(n, lab.n(), "order must cover every vertex");
        let n_pad = n.next_power_of_two();
        let size = 2 * n_pad - 1;
        let mut leaf_of = vec![0usize; n + 1];
        let mut vertex_at = vec![0usize; n_pad + 1];
        for (slot0, &v) in order.iter().enumerate() {
            debug_assert!(leaf_of[v] == 0, "vertex repeated in order");
            leaf_of[v] = slot0 + 1;
            vertex_at[slot0 + 1] = v;
        }
        let mut labels = vec![0usize; size + 1];
        for slot in 1..=n_pad {
            let v = vertex_at[slot];
            labels[slot] = if v == 0 { 0 } else { lab.label(v) };
        }
        for w in (n_pad + 1)..=size {
            let (left, _) = Bst::children_at(n_pad, w);
            labels[w] = labels[left];
        }
        Bst {
            n,
            n_pad,
            leaf_of,
            vertex_at,
            labels,
        }
    }

    fn children_at(n_pad: usize, v: usize) -> (usize, usize) {
        debug_assert!(v > n_pad);
        (2 * (v - n_pad) - 1, 2 * (v - n_pad))
    }

    /// Graph vertices under the overlay, dummies excluded.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_pad(&self) -> usize {
        self.n_pad
    }

    /// Total overlay vertices, `2 * n_pad - 1`.
    pub fn size(&self) -> usize {
        2 * self.n_pad - 1
    }

    /// Edges on a leaf-to-root walk, `log2(n_pad)`.
    pub fn depth(&self) -> u32 {
        self.n_pad.trailing_zeros()
    }

    pub fn root(&self) -> usize {
        self.size()
    }

    pub fn parent(&self, w: usize) -> Option<usize> {
        debug_assert!(w >= 1 && w <= self.size());
        (w != self.root()).then(|| self.n_pad + (w + 1) / 2)
    }

    /// Children `(left, right)` of an internal vertex, `None` at leaves.
    pub fn children(&self, v: usize) -> Option<(usize, usize)> {
        (v > self.n_pad).then(|| Bst::children_at(self.n_pad, v))
    }

    /// Leaf id holding graph vertex `v`.
    pub fn leaf_of(&self, v: usize) -> usize {
        self.leaf_of[v]
    }

    /// Graph vertex at leaf `slot`, or 0 for a dummy.
    pub fn vertex_at(&self, slot: usize) -> usize {
        self.vertex_at[slot]
    }

    /// Label of an overlay vertex; 0 means dummy.
    pub fn label(&self, w: usize) -> usize {
        self.labels[w]
    }

    /// Overlay path between the leaves of two graph vertices, both
    /// endpoints included, through the lowest common ancestor.
    pub fn path(&self, i: usize, j: usize) -> Vec<usize> {
        let (a, b) = (self.leaf_of(i), self.leaf_of(j));
        assert!(a != 0 && b != 0, "both vertices must sit in the overlay");
        if a == b {
            return vec![a];
        }
        let mut up_a = vec![a];
        let mut up_b = vec![b];
        while *up_a.last().unwrap() != *up_b.last().unwrap() {
            // Ids grow strictly toward the root, so advancing the
            // smaller endpoint reaches the common ancestor.
            if up_a.last() < up_b.last() {
                let w = self.parent(*up_a.last().unwrap()).unwrap();
                up_a.push(w);
            } else {
                let w = self.parent(*up_b.last().unwrap()).unwrap();
                up_b.push(w);
            }
        }
        up_b.pop();
        up_a.extend(up_b.into_iter().rev());
        up_a
    }

    /// The overlay as a graph on its own vertex ids. Edge `w` connects
    /// each non-root vertex to its parent, in ascending id order.
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<_> = (1..self.size())
            .map(|w| (w, self.n_pad + (w + 1) / 2))
            .collect();
        Graph::build(self.size(), &edges).expect("overlay is a valid tree")
    }

    /// Overlay cut edges, both endpoints labeled and disagreeing.
    pub fn cut_size(&self) -> usize {
        (1..self.size())
            .filter(|&w| {
                let (a, b) = (self.labels[w], self.labels[self.n_pad + (w + 1) / 2]);
                a != 0 && b != 0 && a != b
            })
            .count()
    }

    /// Overlay cut edges with exactly one endpoint in class `k`.
    pub fn per_class_cut_size(&self, k: usize) -> usize {
        (1..self.size())
            .filter(|&w| {
                let (a, b) = (self.labels[w], self.labels[self.n_pad + (w + 1) / 2]);
                a != 0 && b != 0 && a != b && (a == k || b == k)
            })
            .count()
    }
}
