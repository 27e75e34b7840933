//! The unknown-graph regime: the learner starts blind, each query
//! arrives with a connecting walk, and a forest of first-seen edges
//! turns walks into sparse instances the r-norm perceptron consumes.
//!
//! Run with: cargo run --example incremental_disclosure

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphsim::graph::{Graph, Labeling};
use graphsim::incremental::{build_comparator, IncrementalForest, RnormLearner};

fn main() -> graphsim::Result<()> {
    // Start on a 6-cycle nobody has shown the learner yet.
    let mut forest = IncrementalForest::new(6)?;

    // First walk from 1 to 4, the short way round.
    let x = forest.ingest_path(&[1, 2, 3, 4])?;
    println!("walk 1-2-3-4 accepted; forest has {} edges", forest.edge_count());
    println!("instance support: {:?}", x.components());

    // Second walk between the same endpoints, the long way round. The
    // forest keeps only edges joining new components, and the instance
    // still reads off the forest path, so it is the one seen before.
    let x2 = forest.ingest_path(&[1, 6, 5, 4])?;
    println!(
        "walk 1-6-5-4 accepted; forest has {} edges, spanning = {}",
        forest.edge_count(),
        forest.is_spanning()
    );
    assert_eq!(x2.components(), x.components());
    println!("same endpoints, same instance: {:?}", x2.components());
    println!();

    // Label the cycle in two arcs and check the cut comparator: its
    // alignment with any disclosed instance telescopes to the class
    // difference of the endpoints.
    let lab = Labeling::new(vec![1, 1, 1, 2, 2, 2])?;
    let cmp = build_comparator(&forest, &lab)?;
    for (i, j) in [(2, 3), (2, 5)] {
        let inst = forest.instance(i, j).unwrap();
        let y = u8::from(lab.label(i) != lab.label(j));
        println!(
            "pair ({i}, {j}): label distance {}, comparator separation {}",
            y,
            cmp.separability(&inst)
        );
    }
    println!();

    // Now the full game on a larger cycle: random pairs, walks along
    // the cycle, r-norm perceptron underneath.
    let n = 24;
    let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).chain([(n, 1)]).collect();
    let g = Graph::build(n, &edges)?;
    let labels: Vec<_> = (0..n).map(|v| if v < n / 2 { 1 } else { 2 }).collect();
    let lab = Labeling::new(labels)?;

    let mut learner = RnormLearner::new(n)?;
    println!("24-cycle, two arcs; exponent r = {:.3}", learner.core().r());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut mistakes = 0;
    for _ in 0..4000 {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=n);
        if i == j {
            continue;
        }
        let y = u8::from(lab.label(i) != lab.label(j));
        let (yhat, _) = learner.round(&g.shortest_path(i, j), y)?;
        mistakes += usize::from(yhat != y);
    }
    println!(
        "4000 rounds: {mistakes} mistakes, forest spanning = {}, dual support {}",
        learner.forest().is_spanning(),
        learner.core().theta_nonzeros()
    );
    Ok(())
}
