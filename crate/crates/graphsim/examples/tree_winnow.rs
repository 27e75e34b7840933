//! Multiplicative weights on an undisclosed tree: when the graph is a
//! tree every walk between two vertices covers the one true path, and
//! a Winnow over edge indicators pays only for cut edges.
//!
//! Run with: cargo run --example tree_winnow

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graphsim::graph::{Graph, Labeling};
use graphsim::incremental::TreeWinnowLearner;

fn main() -> graphsim::Result<()> {
    // A caterpillar: a 12-vertex spine with a leg on every other
    // vertex, labeled by spine half.
    let spine = 12;
    let mut edges: Vec<_> = (1..spine).map(|v| (v, v + 1)).collect();
    let mut next = spine + 1;
    for v in (1..=spine).step_by(2) {
        edges.push((v, next));
        next += 1;
    }
    let n = next - 1;
    let g = Graph::build(n, &edges)?;
    let labels: Vec<_> = (1..=n)
        .map(|v| {
            let anchor = if v <= spine { v } else { 1 + 2 * (v - spine - 1) };
            if anchor <= spine / 2 {
                1
            } else {
                2
            }
        })
        .collect();
    let lab = Labeling::new(labels)?;
    println!(
        "caterpillar tree: n = {n}, cut size {} (one spine edge)",
        g.cut_size(&lab)
    );

    let mut learner = TreeWinnowLearner::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mistakes = 0;
    let mut last_mistake_round = 0;
    for round in 1..=3000 {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=n);
        if i == j {
            continue;
        }
        let y = u8::from(lab.label(i) != lab.label(j));
        let (yhat, _) = learner.round(&g.shortest_path(i, j), y)?;
        if yhat != y {
            mistakes += 1;
            last_mistake_round = round;
        }
    }
    println!("3000 rounds: {mistakes} mistakes, last at round {last_mistake_round}");
    println!(
        "mistake budget grows as cut size times log n = {:.1}",
        g.cut_size(&lab) as f64 * (n as f64).log2()
    );
    println!();

    // Once converged the learner answers any pair without updating.
    let probes = [(1, spine), (spine + 1, n), (2, 3)];
    for (i, j) in probes {
        let y = u8::from(lab.label(i) != lab.label(j));
        let yhat = learner.predict_path(&g.shortest_path(i, j))?;
        println!("probe ({i:2}, {j:2}): truth {y}, prediction {yhat}");
    }
    Ok(())
}
