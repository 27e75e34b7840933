//! The sparse overlay learner against its dense mirror: identical
//! predictions round for round, with per-round work that stays
//! polylogarithmic in the number of vertices.
//!
//! Run with: cargo run --example fast_equivalence

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphsim::fast_bst::{DenseBstPerceptron, FastBstLearner};
use graphsim::graph::{Graph, Labeling};
use graphsim::harness;
use graphsim::spanning::{linearize, sample_uniform_spanning_tree, Bst};

fn main() -> graphsim::Result<()> {
    // A ring of four 8-cliques.
    let mut edges = Vec::new();
    for c in 0..4 {
        let base = 8 * c;
        for a in 1..=8 {
            for b in (a + 1)..=8 {
                edges.push((base + a, base + b));
            }
        }
        edges.push((base + 8, (8 * ((c + 1) % 4)) + 1));
    }
    let g = Graph::build(32, &edges)?;
    let labels: Vec<_> = (0..32).map(|v| v / 8 + 1).collect();
    let lab = Labeling::new(labels)?;

    // The packaged check drives both learners in lockstep.
    let report = harness::verify_equivalence(&g, &lab, 2000, 2, 3)?;
    println!("lockstep over {} rounds:", report.rounds);
    println!("  sparse mistakes {}", report.fast_mistakes);
    println!("  dense mistakes  {}", report.dense_mistakes);
    match report.divergence {
        None => println!("  predictions never diverged"),
        Some(t) => println!("  diverged at round {t} (this should not happen)"),
    }
    println!();

    // The same comparison by hand, to look at the work counter.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tree = sample_uniform_spanning_tree(&g, &mut rng)?;
    let bst = Bst::build(&linearize(&tree, 1), &lab);
    let budget = 6.0 * (bst.n_pad() as f64).log2().powi(2);
    let mut fast = FastBstLearner::new(bst.clone());
    let mut dense = DenseBstPerceptron::new(bst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_touched = 0;
    for _ in 0..2000 {
        let i = rng.gen_range(1..=32);
        let j = rng.gen_range(1..=32);
        let y = u8::from(lab.label(i) != lab.label(j));
        let (yhat, touched) = fast.round(i, j, y);
        assert_eq!(yhat, dense.round(i, j, y));
        max_touched = max_touched.max(touched);
    }
    println!("sparse state after 2000 rounds:");
    println!("  nonzero matrix entries {}", fast.nonzero_entries());
    println!("  max entries touched in a round {max_touched}");
    println!("  per-round ceiling, 6 x log2^2 of slot count = {budget:.0}");
    Ok(())
}
