//! Perceptron on the balanced overlay tree with polylogarithmic
//! per-round work.
//!
//! Run on the overlay, the matrix Perceptron's weight state is fully
//! described by a sparse integer table F over unordered pairs of
//! overlay vertices: the prediction score for a pair is the sum of F
//! over pairs drawn from the leaf-to-leaf path, and a mistake only
//! changes entries between the path's endpoint leaves and the
//! off-path neighbors of path vertices. Since overlay paths have at
//! most 2 depth + 1 vertices, each round reads and writes O(depth^2)
//! entries.
//!
//! The prediction threshold is the squared overlay diameter, (2 depth)^2,
//! compared non-strictly. All scores are exact integers, which is what
//! lets the dense cross-check in the tests agree bit for bit.

use std::collections::HashMap;

use nalgebra::DVector;

use crate::laplacian::LaplacianPseudoinverse;
use crate::spanning::Bst;
use crate::Result;

/// Path of a pair through the overlay, with everything a round needs:
/// the path itself, and the update set S (endpoint leaves plus all
/// off-path neighbors) with its tags.
#[derive(Debug, Clone)]
pub struct PathContext {
    /// Overlay vertices from the leaf of i to the leaf of j.
    pub path: Vec<usize>,
    /// Update set: (overlay vertex, tag). Tags count positions along
    /// the path, 1-based; an off-path vertex borrows the tag of its
    /// unique neighbor on the path.
    pub update_set: Vec<(usize, i64)>,
}

/// The Perceptron itself: overlay, sparse score table, threshold.
#[derive(Debug, Clone)]
pub struct FastBstLearner {
    bst: Bst,
    scores: HashMap<(usize, usize), i64>,
    threshold: i64,
    mistake_count: usize,
}

impl FastBstLearner {
    pub fn new(bst: Bst) -> FastBstLearner {
        let d = i64::from(bst.depth());
        FastBstLearner {
            bst,
            scores: HashMap::new(),
            threshold: 4 * d * d,
            mistake_count: 0,
        }
    }

    pub fn bst(&self) -> &Bst {
        &self.bst
    }

    /// Non-strict comparison floor for the prediction score.
    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    /// Stored score for an unordered overlay pair; absent means zero.
    pub fn score_entry(&self, a: usize, b: usize) -> i64 {
        *self.scores.get(&key(a, b)).unwrap_or(&0)
    }

    pub fn nonzero_entries(&self) -> usize {
        self.scores.values().filter(|&&v| v != 0).count()
    }

    pub fn mistake_count(&self) -> usize {
        self.mistake_count
    }

    /// Builds the round context for a pair of graph vertices.
    pub fn context(&self, i: usize, j: usize) -> PathContext {
        let path = self.bst.path(i, j);
        let last = path.len() - 1;
        let mut tag_of = HashMap::new();
        for (pos, &v) in path.iter().enumerate() {
            tag_of.insert(v, (pos + 1) as i64);
        }
        // S keeps both endpoint leaves and every off-path neighbor;
        // interior path vertices drop out.
        let mut update_set = vec![(path[0], 1), (path[last], (last + 1) as i64)];
        for (pos, &v) in path.iter().enumerate() {
            let mut neighbors = Vec::new();
            if let Some(p) = self.bst.parent(v) {
                neighbors.push(p);
            }
            if let Some((l, r)) = self.bst.children(v) {
                neighbors.push(l);
                neighbors.push(r);
            }
            for w in neighbors {
                if !tag_of.contains_key(&w) {
                    // Off-path neighbor: inherits this path position.
                    update_set.push((w, (pos + 1) as i64));
                }
            }
        }
        update_set.sort_unstable();
        update_set.dedup();
        PathContext { path, update_set }
    }

    /// Score of a context: the table summed over unordered pairs of
    /// path vertices. Each past mistake contributes its one matching
    /// pair, so this equals the dense weight-instance inner product
    /// exactly. Also returns the number of entries read.
    pub fn score(&self, ctx: &PathContext) -> (i64, u64) {
        let mut total = 0i64;
        let mut reads = 0u64;
        for (a_idx, &a) in ctx.path.iter().enumerate() {
            for &b in &ctx.path[a_idx + 1..] {
                total += self.score_entry(a, b);
                reads += 1;
            }
        }
        (total, reads)
    }

    pub fn predict(&self, i: usize, j: usize) -> u8 {
        let ctx = self.context(i, j);
        u8::from(self.score(&ctx).0 >= self.threshold)
    }

    /// Predicts, then learns from the revealed label. Returns the
    /// prediction and the number of table entries read plus written.
    pub fn round(&mut self, i: usize, j: usize, y: u8) -> (u8, u64) {
        let ctx = self.context(i, j);
        let (total, mut touched) = self.score(&ctx);
        let yhat = u8::from(total >= self.threshold);
        if yhat != y {
            self.mistake_count += 1;
            let sign = 2 * i64::from(y) - 1;
            for (a_idx, &(a, fa)) in ctx.update_set.iter().enumerate() {
                for &(b, fb) in &ctx.update_set[a_idx + 1..] {
                    let d = fa - fb;
                    *self.scores.entry(key(a, b)).or_insert(0) += sign * d * d;
                    touched += 1;
                }
            }
        }
        (yhat, touched)
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    debug_assert!(a != b);
    (a.min(b), a.max(b))
}

/// Dense reference Perceptron on the overlay tree, keeping mistakes as
/// Laplacian pair vectors and evaluating the kernel exactly.
///
/// On a tree the bilinear form (e_a - e_b)' L+ (e_c - e_d) counts the
/// signed overlap of the two tree paths, an integer; each evaluation
/// is rounded and checked, so score and threshold meet in exact
/// integer arithmetic just like the sparse learner.
#[derive(Debug)]
pub struct DenseBstPerceptron {
    bst: Bst,
    lp: LaplacianPseudoinverse,
    threshold: i64,
    mistakes: Vec<(DVector<f64>, i64)>,
}

impl DenseBstPerceptron {
    pub fn new(bst: Bst) -> Result<DenseBstPerceptron> {
        let lp = LaplacianPseudoinverse::compute(&bst.to_graph())?;
        let d = i64::from(bst.depth());
        Ok(DenseBstPerceptron {
            bst,
            lp,
            threshold: 4 * d * d,
            mistakes: Vec::new(),
        })
    }

    fn score(&self, a: usize, b: usize) -> i64 {
        self.mistakes
            .iter()
            .map(|(v, sign)| {
                let cross = v[a - 1] - v[b - 1];
                let rounded = cross.round();
                debug_assert!(
                    (cross - rounded).abs() < 1e-6,
                    "tree kernel strayed from an integer: {cross}"
                );
                let c = rounded as i64;
                sign * c * c
            })
            .sum()
    }

    /// Predicts, then learns from the revealed label.
    pub fn round(&mut self, i: usize, j: usize, y: u8) -> u8 {
        let (a, b) = (self.bst.leaf_of(i), self.bst.leaf_of(j));
        let yhat = u8::from(self.score(a, b) >= self.threshold);
        if yhat != y {
            let sign = 2 * i64::from(y) - 1;
            self.mistakes.push((self.lp.pair_vector(a, b), sign));
        }
        yhat
    }

    pub fn mistake_count(&self) -> usize {
        self.mistakes.len()
    }
}
