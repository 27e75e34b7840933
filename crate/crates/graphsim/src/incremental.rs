//! Learners for an unknown graph revealed one path at a time.
//!
//! Each round discloses a walk between the queried pair. Edges whose
//! endpoints lie in different components of the forest built so far
//! are accepted, stored with endpoints ordered low before high and
//! numbered in disclosure order; everything else is discarded. The
//! instance for the round is the signed indicator of the forest path
//! between the pair: +1 where the path follows an edge's stored
//! orientation, -1 against it. Because the signs telescope, the inner
//! product of an instance with any class's cutset vector depends only
//! on the pair's endpoints, which makes similar and dissimilar rounds
//! exactly separable no matter which paths the adversary shows.
//!
//! On these instances run two learners: a Winnow warm-up over plain
//! path indicators (clusters must be connected in the revealed tree),
//! and the r-norm Perceptron over outer products of signed instances,
//! kept in dual form so its state stays a sparse integer map.

use std::collections::HashMap;

use crate::graph::{Graph, Labeling};
use crate::{Error, Result};

/// Spanning forest built from disclosed paths.
#[derive(Debug, Clone)]
pub struct IncrementalForest {
    n: usize,
    parent: Vec<usize>,
    rank: Vec<u8>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl IncrementalForest {
    pub fn new(n: usize) -> Result<IncrementalForest> {
        if n < 2 {
            return Err(Error::TooSmall { need: 2, got: n });
        }
        Ok(IncrementalForest {
            n,
            parent: (0..=n).collect(),
            rank: vec![0; n + 1],
            edges: Vec::new(),
            adj: vec![Vec::new(); n + 1],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Accepted edges, (low, high), in disclosure order. Edge index
    /// `e` lives at `edges()[e-1]`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_spanning(&self) -> bool {
        self.edges.len() == self.n - 1
    }

    fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            self.parent[v] = self.find(self.parent[v]);
        }
        self.parent[v]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    fn accept(&mut self, a: usize, b: usize) {
        let e = (a.min(b), a.max(b));
        self.edges.push(e);
        let idx = self.edges.len();
        self.adj[e.0].push((e.1, idx));
        self.adj[e.1].push((e.0, idx));
    }

    /// Feeds one disclosed walk into the forest and returns the signed
    /// instance of its endpoint pair. Every edge of the walk is
    /// examined in order and accepted iff it joins two components,
    /// even when the endpoints themselves are already connected; the
    /// instance is always read off the forest path, so any walk
    /// between the same endpoints yields the same instance once the
    /// relevant edges are known.
    pub fn ingest_path(&mut self, path: &[usize]) -> Result<PathInstance> {
        if path.len() < 2 {
            return Err(Error::Config("disclosed path needs two endpoints".into()));
        }
        for &v in path {
            if v < 1 || v > self.n {
                return Err(Error::VertexRange { v, n: self.n });
            }
        }
        if path.first() == path.last() {
            return Err(Error::Config("disclosed path endpoints coincide".into()));
        }
        for w in path.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Config("disclosed path repeats a vertex".into()));
            }
        }
        for w in path.windows(2) {
            if self.union(w[0], w[1]) {
                self.accept(w[0], w[1]);
            }
        }
        let (i, j) = (path[0], *path.last().unwrap());
        let walk = self
            .forest_path(i, j)
            .expect("walk endpoints are connected after ingestion");
        Ok(self.instance_along(&walk))
    }

    /// Unique forest path between two connected vertices.
    pub fn forest_path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if i == j {
            return Some(vec![i]);
        }
        let mut from = vec![0usize; self.n + 1];
        from[i] = i;
        let mut queue = std::collections::VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v] {
                if from[w] == 0 {
                    from[w] = v;
                    if w == j {
                        let mut path = vec![j];
                        let mut u = j;
                        while u != i {
                            u = from[u];
                            path.push(u);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn instance_along(&self, walk: &[usize]) -> PathInstance {
        let mut comps = Vec::with_capacity(walk.len() - 1);
        for w in walk.windows(2) {
            let (a, b) = (w[0], w[1]);
            let idx = self.adj[a]
                .iter()
                .find(|&&(nbr, _)| nbr == b)
                .expect("consecutive walk vertices share a forest edge")
                .1;
            // +1 when the walk follows the stored low-to-high direction.
            comps.push((idx, if a < b { 1i8 } else { -1i8 }));
        }
        comps.sort_unstable_by_key(|&(idx, _)| idx);
        PathInstance {
            i: walk[0],
            j: *walk.last().unwrap(),
            comps,
        }
    }

    /// Signed instance for a connected pair without feeding new edges.
    pub fn instance(&self, i: usize, j: usize) -> Option<PathInstance> {
        if i == j {
            return None;
        }
        let walk = self.forest_path(i, j)?;
        Some(self.instance_along(&walk))
    }

    /// Grows the forest to a spanning tree using edges of `g`, in edge
    /// index order. For tests and comparator construction when the
    /// disclosed paths never connected everything.
    pub fn complete_spanning(&mut self, g: &Graph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::Config("completion graph has the wrong size".into()));
        }
        for &(u, v) in g.edges() {
            if self.is_spanning() {
                break;
            }
            if self.union(u, v) {
                self.accept(u, v);
            }
        }
        if self.is_spanning() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }
}

/// Signed indicator of a forest path, sparse over edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathInstance {
    pub i: usize,
    pub j: usize,
    comps: Vec<(usize, i8)>,
}

impl PathInstance {
    /// Nonzero components as (edge index, sign), ascending indices.
    pub fn components(&self) -> &[(usize, i8)] {
        &self.comps
    }

    pub fn support_size(&self) -> usize {
        self.comps.len()
    }

    /// Edge indices alone, the plain indicator form.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.comps.iter().map(|&(idx, _)| idx)
    }

    /// Dense copy, index `e-1` holding the sign of edge `e`.
    pub fn dense(&self, dim: usize) -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for &(idx, sign) in &self.comps {
            x[idx - 1] = f64::from(sign);
        }
        x
    }
}

/// One cutset vector per class over the final tree's edges: entry e is
/// [label(low) = k] - [label(high) = k] for edge e = (low, high).
#[derive(Debug, Clone)]
pub struct CutsetComparator {
    u: Vec<Vec<i8>>,
}

/// Builds the per-class cutset vectors; the forest must be spanning.
pub fn build_comparator(f: &IncrementalForest, lab: &Labeling) -> Result<CutsetComparator> {
    if !f.is_spanning() {
        return Err(Error::Config(
            "comparator needs a spanning forest; complete it first".into(),
        ));
    }
    let u = (1..=lab.k())
        .map(|k| {
            f.edges()
                .iter()
                .map(|&(a, b)| i8::from(lab.label(a) == k) - i8::from(lab.label(b) == k))
                .collect()
        })
        .collect();
    Ok(CutsetComparator { u })
}

impl CutsetComparator {
    pub fn k(&self) -> usize {
        self.u.len()
    }

    pub fn vector(&self, k: usize) -> &[i8] {
        &self.u[k - 1]
    }

    /// Inner product with an instance; telescopes to
    /// [label(i) = k] - [label(j) = k].
    pub fn dot(&self, k: usize, x: &PathInstance) -> i64 {
        x.components()
            .iter()
            .map(|&(idx, sign)| i64::from(self.u[k - 1][idx - 1]) * i64::from(sign))
            .sum()
    }

    /// Sum of squared inner products over all classes: 0 for a
    /// same-class pair, 2 otherwise.
    pub fn separability(&self, x: &PathInstance) -> i64 {
        (1..=self.k()).map(|k| self.dot(k, x).pow(2)).sum()
    }

    /// Nonzero entries of class k's vector: that class's tree cut size.
    pub fn one_norm(&self, k: usize) -> usize {
        self.u[k - 1].iter().filter(|&&v| v != 0).count()
    }
}

/// The r-norm Perceptron of the unknown-graph regime, state kept in
/// the dual: an integer map over ordered pairs of edge indices that
/// accumulates signed outer products of mistaken instances. Primal
/// weights are derived on demand, so per-round work is the squared
/// path support plus the map size.
#[derive(Debug, Clone)]
pub struct RnormPerceptron {
    dim: usize,
    r: f64,
    theta: HashMap<(usize, usize), i64>,
    mistake_count: usize,
}

impl RnormPerceptron {
    /// `n` is the graph's vertex count; instances live in n-1
    /// dimensions and the exponent is r = 4 ln(n-1).
    pub fn new(n: usize) -> Result<RnormPerceptron> {
        if n < 3 {
            return Err(Error::TooSmall { need: 3, got: n });
        }
        Ok(RnormPerceptron {
            dim: n - 1,
            r: 4.0 * ((n - 1) as f64).ln(),
            theta: HashMap::new(),
            mistake_count: 0,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    fn theta_r_norm(&self) -> f64 {
        let max = self
            .theta
            .values()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0);
        if max == 0 {
            return 0.0;
        }
        let max = max as f64;
        let sum: f64 = self
            .theta
            .values()
            .filter(|&&v| v != 0)
            .map(|&v| (v.abs() as f64 / max).powf(self.r))
            .sum();
        max * sum.powf(1.0 / self.r)
    }

    /// Primal weight of one dual coordinate given the dual norm,
    /// factored to keep intermediate powers in range.
    fn primal(&self, theta: f64, norm: f64) -> f64 {
        if theta == 0.0 || norm == 0.0 {
            return 0.0;
        }
        theta.signum() * (theta.abs() / norm).powf(self.r - 1.0) * norm
    }

    /// Margin the score must reach: (r - 1) times the fourth power of
    /// the instance's r-norm, which for a support of size s is s^(4/r).
    pub fn threshold(&self, x: &PathInstance) -> f64 {
        (self.r - 1.0) * (x.support_size() as f64).powf(4.0 / self.r)
    }

    /// Prediction and the work counted for it: squared support plus
    /// the current dual map size.
    pub fn predict(&self, x: &PathInstance) -> (u8, u64) {
        let norm = self.theta_r_norm();
        let mut score = 0.0;
        for &(a, sa) in x.components() {
            for &(b, sb) in x.components() {
                if let Some(&t) = self.theta.get(&(a, b)) {
                    score += self.primal(t as f64, norm) * f64::from(sa) * f64::from(sb);
                }
            }
        }
        let work = (x.support_size() * x.support_size() + self.theta.len()) as u64;
        (u8::from(score >= self.threshold(x)), work)
    }

    /// Predicts, then learns from the revealed label.
    pub fn round(&mut self, x: &PathInstance, y: u8) -> (u8, u64) {
        let (yhat, work) = self.predict(x);
        if yhat != y {
            self.mistake_count += 1;
            let sign = i64::from(y) - i64::from(yhat);
            for &(a, sa) in x.components() {
                for &(b, sb) in x.components() {
                    *self.theta.entry((a, b)).or_insert(0) +=
                        sign * i64::from(sa) * i64::from(sb);
                }
            }
        }
        (yhat, work)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mistake_count(&self) -> usize {
        self.mistake_count
    }

    /// Stored dual coordinates, zeros included.
    pub fn theta_len(&self) -> usize {
        self.theta.len()
    }

    pub fn theta_nonzeros(&self) -> usize {
        self.theta.values().filter(|&&v| v != 0).count()
    }
}

/// Maps a dual vector to primal weights under exponent `r`:
/// w_a = sign(th_a) |th_a|^(r-1) / ||th||_r^(r-2).
pub fn primal_from_dual(theta: &[f64], r: f64) -> Vec<f64> {
    let max = theta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return vec![0.0; theta.len()];
    }
    let norm = max
        * theta
            .iter()
            .map(|v| (v.abs() / max).powf(r))
            .sum::<f64>()
            .powf(1.0 / r);
    theta
        .iter()
        .map(|&t| {
            if t == 0.0 {
                0.0
            } else {
                t.signum() * (t.abs() / norm).powf(r - 1.0) * norm
            }
        })
        .collect()
}

/// The inverse map, the gradient of half the squared s-norm with
/// s = r / (r - 1): th_a = sign(w_a) |w_a|^(s-1) ||w||_s^(2-s).
pub fn dual_from_primal(w: &[f64], r: f64) -> Vec<f64> {
    let s = r / (r - 1.0);
    let max = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return vec![0.0; w.len()];
    }
    let norm = max * w.iter().map(|v| (v.abs() / max).powf(s)).sum::<f64>().powf(1.0 / s);
    w.iter()
        .map(|&v| {
            if v == 0.0 {
                0.0
            } else {
                v.signum() * (v.abs() / norm).powf(s - 1.0) * norm
            }
        })
        .collect()
}

/// Winnow warm-up over plain path indicators. Valid when each class
/// spans a connected piece of the revealed tree.
#[derive(Debug, Clone)]
pub struct TreeWinnow {
    weights: Vec<f64>,
    threshold: f64,
    mistake_count: usize,
}

impl TreeWinnow {
    pub fn new(n: usize) -> Result<TreeWinnow> {
        if n < 2 {
            return Err(Error::TooSmall { need: 2, got: n });
        }
        Ok(TreeWinnow {
            weights: vec![1.0; n - 1],
            threshold: (n - 1) as f64,
            mistake_count: 0,
        })
    }

    fn score(&self, support: &[usize]) -> f64 {
        support.iter().map(|&e| self.weights[e - 1]).sum()
    }

    pub fn predict(&self, support: &[usize]) -> u8 {
        u8::from(self.score(support) >= self.threshold)
    }

    /// Predicts, then doubles path weights on a missed dissimilar pair
    /// and halves them on a missed similar one.
    pub fn round(&mut self, support: &[usize], y: u8) -> (u8, u64) {
        let yhat = self.predict(support);
        if yhat != y {
            self.mistake_count += 1;
            let factor = if y == 1 { 2.0 } else { 0.5 };
            for &e in support {
                self.weights[e - 1] *= factor;
            }
        }
        (yhat, support.len() as u64)
    }

    pub fn mistake_count(&self) -> usize {
        self.mistake_count
    }
}

/// r-norm Perceptron bundled with the forest it learns from.
#[derive(Debug, Clone)]
pub struct RnormLearner {
    forest: IncrementalForest,
    core: RnormPerceptron,
}

impl RnormLearner {
    pub fn new(n: usize) -> Result<RnormLearner> {
        Ok(RnormLearner {
            forest: IncrementalForest::new(n)?,
            core: RnormPerceptron::new(n)?,
        })
    }

    /// Ingests the disclosed walk, then runs one r-norm round on the
    /// resulting instance.
    pub fn round(&mut self, path: &[usize], y: u8) -> Result<(u8, u64)> {
        let x = self.forest.ingest_path(path)?;
        Ok(self.core.round(&x, y))
    }

    pub fn forest(&self) -> &IncrementalForest {
        &self.forest
    }

    pub fn core(&self) -> &RnormPerceptron {
        &self.core
    }
}

/// Tree Winnow bundled with the forest it learns from.
#[derive(Debug, Clone)]
pub struct TreeWinnowLearner {
    forest: IncrementalForest,
    core: TreeWinnow,
}

impl TreeWinnowLearner {
    pub fn new(n: usize) -> Result<TreeWinnowLearner> {
        Ok(TreeWinnowLearner {
            forest: IncrementalForest::new(n)?,
            core: TreeWinnow::new(n)?,
        })
    }

    pub fn round(&mut self, path: &[usize], y: u8) -> Result<(u8, u64)> {
        let x = self.forest.ingest_path(path)?;
        let support: Vec<usize> = x.support().collect();
        Ok(self.core.round(&support, y))
    }

    /// Ingests the walk and predicts without touching the weights.
    pub fn predict_path(&mut self, path: &[usize]) -> Result<u8> {
        let x = self.forest.ingest_path(path)?;
        let support: Vec<usize> = x.support().collect();
        Ok(self.core.predict(&support))
    }

    pub fn forest(&self) -> &IncrementalForest {
        &self.forest
    }

    pub fn core(&self) -> &TreeWinnow {
        &self.core
    }
}
