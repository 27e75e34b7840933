//! Reductions between the similarity game and the classification
//! game: a weighted pool turns any class predictor into a similarity
//! predictor, and prototype comparisons turn any similarity predictor
//! back into a class predictor.
//!
//! Run with: cargo run --example similarity_reductions

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphsim::graph::{Graph, Labeling};
use graphsim::reductions::{
    master_mistake_bound, ClassFromSim, Halving, MasterSim, MemorizingBinary, OneVsRest,
    TreeWinnowSim,
};

fn main() -> graphsim::Result<()> {
    let truth = [1usize, 1, 2, 2, 3, 3];
    let n = truth.len();
    let class_of = |v: usize| truth[v - 1];

    // A halving learner over all 3^6 labelings, wrapped by the master
    // pool: every pool entry is a guessed history of class feedbacks,
    // reweighted whenever the pooled vote errs on a pair.
    let k = 3;
    let halving = Halving::new(n, k)?;
    let base_bound = halving.subsequential_bound();
    let mut master = MasterSim::new(halving, k, 1_000_000)?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut mistakes = 0;
    for _ in 0..300 {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=n);
        let y = u8::from(class_of(i) != class_of(j));
        let (yhat, _) = master.round(i, j, y)?;
        mistakes += usize::from(yhat != y);
    }
    println!("master pool over a halving base, {n} vertices, {k} classes:");
    println!("  mistakes          {mistakes}");
    println!("  bound             {:.1}", master_mistake_bound(base_bound, k));
    println!("  pool entries      {}", master.pool_len());
    println!("  remaining weight  {:.3e}", master.total_weight());
    println!();

    // The reverse direction on a path graph whose classes sit in
    // contiguous runs: judge a fresh vertex against one enrolled
    // prototype per class, answer with the first class judged
    // similar, and fall back to class 1.
    let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
    let g = Graph::build(n, &edges)?;
    let lab = Labeling::new(truth.to_vec())?;
    let mut cfs = ClassFromSim::new(TreeWinnowSim::new(g));
    let mut mistakes = 0;
    for round in 0..200 {
        let v = 1 + (round % n);
        let (chat, _) = cfs.round(v, lab.label(v));
        mistakes += usize::from(chat != lab.label(v));
    }
    println!("classes from similarity judgments on a 6-path:");
    println!("  mistakes   {mistakes}");
    println!("  prototypes {:?}", cfs.prototypes());
    println!();

    // The trivial multiclass baseline used as a sanity floor: one
    // memorizing binary learner per class, claims must be unanimous.
    let mut ovr = OneVsRest::new(|_class| MemorizingBinary::new());
    let mut mistakes = 0;
    for round in 0..100 {
        let v = 1 + (round % n);
        let (chat, _) = ovr.round(v, class_of(v));
        mistakes += usize::from(chat != class_of(v));
    }
    println!("one-vs-rest memorizers:");
    println!("  mistakes     {mistakes}");
    println!("  classes seen {}", ovr.classes_seen());
    Ok(())
}
