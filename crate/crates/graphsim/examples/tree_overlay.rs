//! From graph to spanning tree to balanced overlay: sample a uniform
//! spanning tree, linearize it depth-first, and hang the vertices off
//! a balanced binary tree whose paths the fast learner walks.
//!
//! Run with: cargo run --example tree_overlay

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use graphsim::graph::{Graph, Labeling};
use graphsim::spanning::{linearize, sample_uniform_spanning_tree, Bst};

fn main() -> graphsim::Result<()> {
    // A 4x5 grid, labeled in two vertical halves.
    let (rows, cols) = (4, 5);
    let at = |r: usize, c: usize| r * cols + c + 1;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    let g = Graph::build(rows * cols, &edges)?;
    let labels: Vec<_> = (0..rows)
        .flat_map(|_| (0..cols).map(|c| if c < cols / 2 { 1 } else { 2 }))
        .collect();
    let lab = Labeling::new(labels)?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tree = sample_uniform_spanning_tree(&g, &mut rng)?;
    let order = linearize(&tree, 1);
    let bst = Bst::build(&order, &lab);

    println!("grid {}x{}: n = {}, m = {}", rows, cols, g.n(), g.m());
    println!(
        "depth-first order: {}",
        order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    );
    println!(
        "overlay: {} leaf slots, {} nodes, depth {}",
        bst.n_pad(),
        bst.size(),
        bst.depth()
    );
    println!();

    // An overlay path touches two root-to-leaf spines, so its length
    // is logarithmic however far apart the endpoints sit.
    let (i, j) = (at(0, 0), at(rows - 1, cols - 1));
    let path = bst.path(i, j);
    println!("overlay path {i} -> {j} visits {} nodes", path.len());
    println!();

    // Cutting a tree edge separates classes once; hanging the tree off
    // the overlay re-cuts each boundary at most once per level.
    let inflation = (bst.n_pad() as f64).log2();
    println!("cut sizes, tree vs overlay (ceiling 2 * tree * log2 slots):");
    for k in 1..=2 {
        let t = tree.per_class_cut_size(&lab, k);
        let b = bst.per_class_cut_size(k);
        println!(
            "  class {k}: tree {t:2}  overlay {b:2}  ceiling {:.1}",
            2.0 * t as f64 * inflation
        );
    }
    Ok(())
}
