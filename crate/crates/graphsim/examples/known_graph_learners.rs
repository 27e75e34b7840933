//! The two matrix learners on a fully known graph, playing the
//! pair-similarity game until they survive a full pass over every
//! pair without a mistake.
//!
//! Run with: cargo run --example known_graph_learners

use graphsim::graph::{Graph, Labeling};
use graphsim::matrix::{reference_norm_formula, MatrixPerceptron, MatrixWinnow};

/// One pass over every ordered pair; returns mistakes made.
fn pass<F: FnMut(usize, usize, u8) -> u8>(n: usize, lab: &Labeling, mut round: F) -> usize {
    let mut wrong = 0;
    for i in 1..=n {
        for j in 1..=n {
            let y = u8::from(lab.label(i) != lab.label(j));
            if round(i, j, y) != y {
                wrong += 1;
            }
        }
    }
    wrong
}

fn main() -> graphsim::Result<()> {
    // A 10-cycle split into two arcs of five vertices.
    let n = 10;
    let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).chain([(n, 1)]).collect();
    let g = Graph::build(n, &edges)?;
    let lab = Labeling::new(vec![1, 1, 1, 1, 1, 2, 2, 2, 2, 2])?;
    let cut = g.cut_size(&lab);

    println!("10-cycle, two arcs of 5; cut size {cut}");
    println!("comparator squared norm = {}", reference_norm_formula(&g, &lab));
    println!();

    let mut perceptron = MatrixPerceptron::new(&g)?;
    let mut passes = 0;
    loop {
        passes += 1;
        if pass(n, &lab, |i, j, y| perceptron.round(i, j, y).0) == 0 {
            break;
        }
    }
    println!(
        "perceptron: clean after {passes} passes, {} mistakes",
        perceptron.mistake_count()
    );

    // Winnow needs the true cut size up front; in exchange its
    // mistake bound scales with the cut, not with its square.
    let mut winnow = MatrixWinnow::new(&g, cut)?;
    let mut passes = 0;
    loop {
        passes += 1;
        if pass(n, &lab, |i, j, y| winnow.round(i, j, y).0) == 0 {
            break;
        }
    }
    println!(
        "winnow:     clean after {passes} passes, {} mistakes (threshold {:.4})",
        winnow.mistake_count(),
        winnow.threshold()
    );
    Ok(())
}
