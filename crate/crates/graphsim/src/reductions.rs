//! Reductions between class prediction and similarity prediction.
//!
//! Three constructions. A master similarity predictor that wraps any
//! deterministic class learner: it keeps a weighted pool of
//! speculated training histories, votes over the predictors they
//! induce, and on each of its own mistakes replaces the histories
//! that voted wrongly with continuations covering every label
//! assignment the feedback allows. A prototype scheme going the other
//! way: it learns classes from a similarity learner by keeping one
//! prototype per discovered class and asking the base learner which
//! prototype the new pattern resembles. And a one-vs-rest lift that
//! stitches per-class binary predictors into a multiclass one.
//!
//! The pool construction is exponential by design; it is meant for
//! small pattern spaces and aborts cleanly at a configurable size
//! cap. Its guarantees are multiplicative: each master mistake
//! shrinks the total pool weight by at least (1 + beta) / 2 while
//! some history consistent with the hidden labeling survives, and
//! the two together price each master mistake at a bounded multiple
//! of the base learner's mistakes.

use std::collections::{HashMap, HashSet};

use crate::graph::Graph;
use crate::incremental::TreeWinnowLearner;
use crate::{Error, Result};

/// Weight retained by a replaced history's continuations, spread
/// evenly across them.
pub const BETA: f64 = 0.294;

/// Deterministic class learner trained by replaying a history of
/// (pattern, class) examples.
pub trait BaseClassifier {
    /// Class predicted for `x` after training on `history`.
    fn predict(&self, history: &[(usize, usize)], x: usize) -> usize;
}

/// Master mistakes bought per base mistake by the weight argument:
/// log(K(K-1)/beta) / log(2/(1+beta)), about 4.41 for two classes
/// and 6.93 for three.
pub fn mistakes_per_base_mistake(k: usize) -> f64 {
    ((k * (k - 1)) as f64 / BETA).log2() / (2.0 / (1.0 + BETA)).log2()
}

/// The coarser headline ceiling, 5 B log2 K.
pub fn master_mistake_bound(base_bound: f64, k: usize) -> f64 {
    5.0 * base_bound * (k as f64).log2()
}

struct PoolEntry {
    history: Vec<(usize, usize)>,
    weight: f64,
    memo: HashMap<usize, usize>,
}

/// Similarity predictor over a pool of speculated class histories.
pub struct MasterSim<B: BaseClassifier> {
    base: B,
    k: usize,
    pool_cap: usize,
    entries: Vec<PoolEntry>,
    mistake_count: usize,
}

impl<B: BaseClassifier> MasterSim<B> {
    /// Starts from the single empty history with weight 1.
    pub fn new(base: B, k: usize, pool_cap: usize) -> Result<MasterSim<B>> {
        if k < 2 {
            return Err(Error::Config("master pool needs at least 2 classes".into()));
        }
        if pool_cap == 0 {
            return Err(Error::Config("pool cap must be positive".into()));
        }
        Ok(MasterSim {
            base,
            k,
            pool_cap,
            entries: vec![PoolEntry {
                history: Vec::new(),
                weight: 1.0,
                memo: HashMap::new(),
            }],
            mistake_count: 0,
        })
    }

    fn memoized(base: &B, e: &mut PoolEntry, x: usize) -> usize {
        match e.memo.get(&x) {
            Some(&c) => c,
            None => {
                let c = base.predict(&e.history, x);
                e.memo.insert(x, c);
                c
            }
        }
    }

    /// Weighted vote over the pool: 0 when the same-class weight is
    /// at least the different-class weight, 1 otherwise.
    pub fn predict(&self, x1: usize, x2: usize) -> u8 {
        let mut same = 0.0;
        let mut diff = 0.0;
        for e in &self.entries {
            let c1 = e
                .memo
                .get(&x1)
                .copied()
                .unwrap_or_else(|| self.base.predict(&e.history, x1));
            let c2 = e
                .memo
                .get(&x2)
                .copied()
                .unwrap_or_else(|| self.base.predict(&e.history, x2));
            if c1 == c2 {
                same += e.weight;
            } else {
                diff += e.weight;
            }
        }
        u8::from(same < diff)
    }

    /// Votes, then on a mistake replaces every wrongly voting history
    /// with its continuations: all ordered distinct label pairs when
    /// the pair was actually dissimilar, all equal labels when it was
    /// similar, with the replaced weight scaled by `BETA` and split
    /// evenly. Histories that voted correctly are kept untouched.
    pub fn round(&mut self, x1: usize, x2: usize, y: u8) -> Result<(u8, u64)> {
        let MasterSim { base, entries, .. } = self;
        let mut same = 0.0;
        let mut diff = 0.0;
        let mut votes = Vec::with_capacity(entries.len());
        for e in entries.iter_mut() {
            let c1 = Self::memoized(base, e, x1);
            let c2 = Self::memoized(base, e, x2);
            votes.push(u8::from(c1 != c2));
            if c1 == c2 {
                same += e.weight;
            } else {
                diff += e.weight;
            }
        }
        let yhat = u8::from(same < diff);
        let work = self.entries.len() as u64;
        if yhat == y {
            return Ok((yhat, work));
        }
        self.mistake_count += 1;
        let mut next: Vec<PoolEntry> = Vec::new();
        let mut index: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        let push = |next: &mut Vec<PoolEntry>,
                        index: &mut HashMap<Vec<(usize, usize)>, usize>,
                        e: PoolEntry| {
            match index.get(&e.history) {
                Some(&i) => next[i].weight += e.weight,
                None => {
                    index.insert(e.history.clone(), next.len());
                    next.push(e);
                }
            }
        };
        for (e, vote) in self.entries.drain(..).zip(votes) {
            if vote == y {
                push(&mut next, &mut index, e);
                continue;
            }
            if y == 1 {
                let share = BETA / (self.k * (self.k - 1)) as f64;
                for a in 1..=self.k {
                    for b in 1..=self.k {
                        if a == b {
                            continue;
                        }
                        let mut history = e.history.clone();
                        history.extend([(x1, a), (x2, b)]);
                        push(
                            &mut next,
                            &mut index,
                            PoolEntry {
                                history,
                                weight: share * e.weight,
                                memo: HashMap::new(),
                            },
                        );
                    }
                }
            } else {
                let share = BETA / self.k as f64;
                for a in 1..=self.k {
                    let mut history = e.history.clone();
                    history.extend([(x1, a), (x2, a)]);
                    push(
                        &mut next,
                        &mut index,
                        PoolEntry {
                            history,
                            weight: share * e.weight,
                            memo: HashMap::new(),
                        },
                    );
                }
            }
        }
        self.entries = next;
        if self.entries.len() > self.pool_cap {
            return Err(Error::PoolCap(self.entries.len()));
        }
        Ok((yhat, work))
    }

    pub fn pool_len(&self) -> usize {
        self.entries.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// Weight of an exact history, if the pool holds it.
    pub fn history_weight(&self, history: &[(usize, usize)]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.history == history)
            .map(|e| e.weight)
    }

    pub fn mistake_count(&self) -> usize {
        self.mistake_count
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &B {
        &self.base
    }
}

/// Class predictor that votes over every labeling still consistent
/// with the history, majority per pattern, ties to the lowest class.
/// Usable when k^n stays enumerable.
#[derive(Debug, Clone)]
pub struct Halving {
    n: usize,
    k: usize,
    concepts: u64,
}

impl Halving {
    const CONCEPT_CAP: u64 = 1 << 20;

    pub fn new(n: usize, k: usize) -> Result<Halving> {
        if n < 1 || k < 1 {
            return Err(Error::Config("halving needs n and k positive".into()));
        }
        let concepts = (k as u64)
            .checked_pow(n as u32)
            .filter(|&c| c <= Halving::CONCEPT_CAP)
            .ok_or_else(|| {
                Error::Config(format!(
                    "halving needs k^n <= {}, got k={k} n={n}",
                    Halving::CONCEPT_CAP
                ))
            })?;
        Ok(Halving { n, k, concepts })
    }

    /// Worst-case mistakes over any example subsequence: log2(k^n).
    pub fn subsequential_bound(&self) -> f64 {
        (self.concepts as f64).log2()
    }

    fn class_of(&self, concept: u64, x: usize) -> usize {
        let mut c = concept;
        for _ in 1..x {
            c /= self.k as u64;
        }
        (c % self.k as u64) as usize + 1
    }
}

impl BaseClassifier for Halving {
    fn predict(&self, history: &[(usize, usize)], x: usize) -> usize {
        debug_assert!(x >= 1 && x <= self.n);
        let mut votes = vec![0u64; self.k];
        for concept in 0..self.concepts {
            if history
                .iter()
                .all(|&(v, c)| self.class_of(concept, v) == c)
            {
                votes[self.class_of(concept, x) - 1] += 1;
            }
        }
        // An inconsistent history leaves every count at zero; the
        // lowest-class tie rule then answers 1.
        let best = *votes.iter().max().unwrap();
        votes.iter().position(|&v| v == best).unwrap() + 1
    }
}

/// Similarity learner trained by replaying a history of labeled
/// pairs, 1 meaning dissimilar.
pub trait SimilarityBase {
    fn predict(&self, history: &[((usize, usize), u8)], pair: (usize, usize)) -> u8;
}

/// Tree Winnow as a replay similarity base: each call trains a fresh
/// learner on the history along shortest paths of `g`, then judges
/// the queried pair.
pub struct TreeWinnowSim {
    g: Graph,
}

impl TreeWinnowSim {
    pub fn new(g: Graph) -> TreeWinnowSim {
        TreeWinnowSim { g }
    }
}

impl SimilarityBase for TreeWinnowSim {
    fn predict(&self, history: &[((usize, usize), u8)], pair: (usize, usize)) -> u8 {
        // A pair of identical vertices is similar outright and has no
        // path to train or judge on.
        if pair.0 == pair.1 {
            return 0;
        }
        let mut learner =
            TreeWinnowLearner::new(self.g.n()).expect("graph vertex counts are valid");
        for &((a, b), y) in history {
            if a == b {
                continue;
            }
            learner
                .round(&self.g.shortest_path(a, b), y)
                .expect("shortest paths are valid walks");
        }
        learner
            .predict_path(&self.g.shortest_path(pair.0, pair.1))
            .expect("shortest paths are valid walks")
    }
}

/// Class learner built on a similarity base: one prototype per
/// discovered class, each round judged against all of them.
pub struct ClassFromSim<B: SimilarityBase> {
    base: B,
    prototypes: Vec<(usize, usize)>,
    history: Vec<((usize, usize), u8)>,
    mistake_count: usize,
}

impl<B: SimilarityBase> ClassFromSim<B> {
    pub fn new(base: B) -> ClassFromSim<B> {
        ClassFromSim {
            base,
            prototypes: Vec::new(),
            history: Vec::new(),
            mistake_count: 0,
        }
    }

    /// Base verdict per prototype for `x`: (class, judged label).
    pub fn judge(&self, x: usize) -> Vec<(usize, u8)> {
        self.prototypes
            .iter()
            .map(|&(p, class)| (class, self.base.predict(&self.history, (p, x))))
            .collect()
    }

    /// The lowest class judged similar to `x`, class 1 when none.
    pub fn predict(&self, x: usize) -> usize {
        self.judge(x)
            .iter()
            .filter(|&&(_, sim)| sim == 0)
            .map(|&(c, _)| c)
            .min()
            .unwrap_or(1)
    }

    /// Predicts, then on a mistake appends every prototype comparison
    /// with its true similarity to the history and enrolls `x` as a
    /// prototype when its class has none.
    pub fn round(&mut self, x: usize, class: usize) -> (usize, u64) {
        let predicted = self.predict(x);
        let work = (self.prototypes.len() + self.history.len()) as u64;
        if predicted != class {
            self.mistake_count += 1;
            for &(p, pc) in &self.prototypes {
                self.history.push(((p, x), u8::from(pc != class)));
            }
            if !self.prototypes.iter().any(|&(_, pc)| pc == class) {
                self.prototypes.push((x, class));
            }
        }
        (predicted, work)
    }

    pub fn prototypes(&self) -> &[(usize, usize)] {
        &self.prototypes
    }

    pub fn history(&self) -> &[((usize, usize), u8)] {
        &self.history
    }

    pub fn mistake_count(&self) -> usize {
        self.mistake_count
    }
}

/// Class learner induced by the prototype reduction over a Tree
/// Winnow base. Plugging it into the master construction closes the
/// loop in both directions: a similarity learner lifted to classes,
/// then back down to similarity.
pub struct ClassFromSimBase {
    g: Graph,
}

impl ClassFromSimBase {
    pub fn new(g: Graph) -> ClassFromSimBase {
        ClassFromSimBase { g }
    }
}

impl BaseClassifier for ClassFromSimBase {
    fn predict(&self, history: &[(usize, usize)], x: usize) -> usize {
        let mut cfs = ClassFromSim::new(TreeWinnowSim::new(self.g.clone()));
        for &(v, c) in history {
            cfs.round(v, c);
        }
        cfs.predict(x)
    }
}

/// Per-class binary predictor for the one-vs-rest lift.
pub trait VertexBinaryLearner {
    /// Whether the learner claims `v` for its class.
    fn claims(&self, v: usize) -> bool;
    /// Feedback: whether `v` truly belongs to the learner's class.
    fn observe(&mut self, v: usize, in_class: bool);
}

/// Claims exactly the vertices it has seen confirmed.
#[derive(Debug, Clone, Default)]
pub struct MemorizingBinary {
    positives: HashSet<usize>,
}

impl MemorizingBinary {
    pub fn new() -> MemorizingBinary {
        MemorizingBinary::default()
    }
}

impl VertexBinaryLearner for MemorizingBinary {
    fn claims(&self, v: usize) -> bool {
        self.positives.contains(&v)
    }

    fn observe(&mut self, v: usize, in_class: bool) {
        if in_class {
            self.positives.insert(v);
        }
    }
}

/// Multiclass predictor over one binary learner per seen class:
/// exactly one claimant wins, anything else falls back to class 1.
pub struct OneVsRest<L: VertexBinaryLearner, F: FnMut(usize) -> L> {
    spawn: F,
    learners: Vec<(usize, L)>,
    mistake_count: usize,
}

impl<L: VertexBinaryLearner, F: FnMut(usize) -> L> OneVsRest<L, F> {
    /// `spawn` builds the binary learner for a class on its first
    /// appearance in feedback.
    pub fn new(spawn: F) -> OneVsRest<L, F> {
        OneVsRest {
            spawn,
            learners: Vec::new(),
            mistake_count: 0,
        }
    }

    pub fn round(&mut self, v: usize, class: usize) -> (usize, u64) {
        let claimants: Vec<usize> = self
            .learners
            .iter()
            .filter(|(_, l)| l.claims(v))
            .map(|&(c, _)| c)
            .collect();
        let predicted = if claimants.len() == 1 { claimants[0] } else { 1 };
        if predicted != class {
            self.mistake_count += 1;
        }
        if !self.learners.iter().any(|&(c, _)| c == class) {
            self.learners.push((class, (self.spawn)(class)));
        }
        for (c, l) in self.learners.iter_mut() {
            l.observe(v, *c == class);
        }
        (predicted, self.learners.len() as u64)
    }

    pub fn classes_seen(&self) -> usize {
        self.learners.len()
    }

    pub fn mistake_count(&self) -> usize {
        self.mistake_count
    }
}
