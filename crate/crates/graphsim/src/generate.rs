//! Seeded graph and labeling generators for experiments.
//!
//! Every generator is deterministic in the supplied RNG. Generators
//! that rely on luck (random inter-clique wiring, Erdős–Rényi draws,
//! labelings that must hit every class) resample up to a fixed cap
//! and then give up with an error instead of spinning forever.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, Labeling};
use crate::{Error, Result};

/// Attempts granted to rejection-sampling loops.
pub const RESAMPLE_CAP: usize = 10_000;

/// A generated graph plus the cluster assignment when the generator
/// has a natural one.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub clusters: Option<Vec<usize>>,
}

/// `p` cliques of `size` vertices wired by `q` random distinct
/// inter-clique edges, resampled until connected.
pub fn cliques<R: Rng>(p: usize, size: usize, q: usize, rng: &mut R) -> Result<Generated> {
    if p < 1 || size < 1 || p * size < 2 {
        return Err(Error::Config("cliques need at least two vertices".into()));
    }
    let inter_pairs = p * (p - 1) / 2 * size * size;
    if q > inter_pairs {
        return Err(Error::Config(format!(
            "q={q} exceeds the {inter_pairs} distinct inter-clique pairs"
        )));
    }
    let n = p * size;
    let cluster_of = |v: usize| (v - 1) / size + 1;
    let mut intra = Vec::new();
    for c in 0..p {
        let base = c * size;
        for a in 1..=size {
            for b in (a + 1)..=size {
                intra.push((base + a, base + b));
            }
        }
    }
    for _ in 0..RESAMPLE_CAP {
        let mut edges = intra.clone();
        let mut chosen = HashSet::new();
        while chosen.len() < q {
            let u = rng.gen_range(1..=n);
            let v = rng.gen_range(1..=n);
            if u != v && cluster_of(u) != cluster_of(v) {
                chosen.insert((u.min(v), u.max(v)));
            }
        }
        edges.extend(chosen.iter().copied());
        match Graph::build(n, &edges) {
            Ok(graph) => {
                return Ok(Generated {
                    graph,
                    clusters: Some((1..=n).map(cluster_of).collect()),
                })
            }
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResampleCap(RESAMPLE_CAP))
}

/// Four-neighbor grid, vertices numbered row by row.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows * cols < 2 {
        return Err(Error::Config("grid needs at least two vertices".into()));
    }
    let at = |r: usize, c: usize| (r - 1) * cols + c;
    let mut edges = Vec::new();
    for r in 1..=rows {
        for c in 1..=cols {
            if c < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    Graph::build(rows * cols, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooSmall { need: 3, got: n });
    }
    let edges: Vec<_> = (1..n).map(|v| (v, v + 1)).chain([(n, 1)]).collect();
    Graph::build(n, &edges)
}

/// Uniform random labeled tree via a Prüfer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooSmall { need: 2, got: n });
    }
    if n == 2 {
        return Graph::build(2, &[(1, 2)]);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves = std::collections::BinaryHeap::new();
    for v in 1..=n {
        if degree[v] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf always remains");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::build(n, &edges)
}

/// Erdős–Rényi G(n, p), resampled until connected.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooSmall { need: 2, got: n });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("edge probability {p} outside [0, 1]")));
    }
    for _ in 0..RESAMPLE_CAP {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        match Graph::build(n, &edges) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResampleCap(RESAMPLE_CAP))
}

/// Labels each vertex by its generator-provided cluster.
pub fn by_cluster(clusters: &[usize]) -> Result<Labeling> {
    Labeling::new(clusters.to_vec())
}

/// `k` connected regions grown by multi-source BFS from distinct
/// random roots; on a tree this cuts exactly k - 1 edges.
pub fn bfs_regions<R: Rng>(g: &Graph, k: usize, rng: &mut R) -> Result<Labeling> {
    let n = g.n();
    if k < 1 || k > n {
        return Err(Error::Config(format!("cannot grow {k} regions on {n} vertices")));
    }
    let mut roots: Vec<usize> = (1..=n).collect();
    roots.shuffle(rng);
    roots.truncate(k);
    let mut labels = vec![0usize; n + 1];
    let mut queue = std::collections::VecDeque::new();
    for (idx, &r) in roots.iter().enumerate() {
        labels[r] = idx + 1;
        queue.push_back(r);
    }
    while let Some(v) = queue.pop_front() {
        for &(w, _) in g.neighbors(v) {
            if labels[w] == 0 {
                labels[w] = labels[v];
                queue.push_back(w);
            }
        }
    }
    Labeling::new(labels[1..].to_vec())
}

/// Uniform labels resampled until all `k` classes appear.
pub fn random_labels<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<Labeling> {
    if k < 1 || k > n {
        return Err(Error::Config(format!("cannot place {k} classes on {n} vertices")));
    }
    for _ in 0..RESAMPLE_CAP {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=k)).collect();
        let mut present = vec![false; k];
        for &l in &labels {
            present[l - 1] = true;
        }
        if present.iter().all(|&p| p) {
            return Labeling::new(labels);
        }
    }
    Err(Error::ResampleCap(RESAMPLE_CAP))
}

fn param<'a>(params: &'a HashMap<String, String>, key: &str) -> Result<&'a str> {
    params
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Config(format!("generator parameter {key} is required")))
}

fn param_usize(params: &HashMap<String, String>, key: &str) -> Result<usize> {
    param(params, key)?
        .parse()
        .map_err(|_| Error::Config(format!("parameter {key} must be an integer")))
}

fn param_f64(params: &HashMap<String, String>, key: &str) -> Result<f64> {
    param(params, key)?
        .parse()
        .map_err(|_| Error::Config(format!("parameter {key} must be a number")))
}

fn reject_unknown(params: &HashMap<String, String>, known: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !known.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown generator parameter {key}")));
        }
    }
    Ok(())
}

/// Builds a graph from a CLI-style kind and `key=value` parameters.
pub fn generate_graph<R: Rng>(
    kind: &str,
    params: &HashMap<String, String>,
    rng: &mut R,
) -> Result<Generated> {
    match kind {
        "cliques" => {
            reject_unknown(params, &["p", "size", "q"])?;
            cliques(
                param_usize(params, "p")?,
                param_usize(params, "size")?,
                param_usize(params, "q")?,
                rng,
            )
        }
        "grid" => {
            reject_unknown(params, &["rows", "cols"])?;
            let g = grid(param_usize(params, "rows")?, param_usize(params, "cols")?)?;
            Ok(Generated { graph: g, clusters: None })
        }
        "cycle" => {
            reject_unknown(params, &["n"])?;
            let g = cycle(param_usize(params, "n")?)?;
            Ok(Generated { graph: g, clusters: None })
        }
        "random-tree" => {
            reject_unknown(params, &["n"])?;
            let g = random_tree(param_usize(params, "n")?, rng)?;
            Ok(Generated { graph: g, clusters: None })
        }
        "er" => {
            reject_unknown(params, &["n", "p"])?;
            let g = erdos_renyi(param_usize(params, "n")?, param_f64(params, "p")?, rng)?;
            Ok(Generated { graph: g, clusters: None })
        }
        other => Err(Error::Config(format!(
            "unknown graph generator {other:?}; choose cliques, grid, cycle, random-tree, or er"
        ))),
    }
}

/// Builds a labeling from a CLI-style kind: `by-cluster`,
/// `bfs-regions:K`, or `random:K`.
pub fn generate_labeling<R: Rng>(
    kind: &str,
    g: &Graph,
    clusters: Option<&[usize]>,
    rng: &mut R,
) -> Result<Labeling> {
    if kind == "by-cluster" {
        let clusters = clusters.ok_or_else(|| {
            Error::Config("by-cluster labels need a clustered generator (cliques)".into())
        })?;
        return by_cluster(clusters);
    }
    let (name, arg) = kind
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("labeling kind {kind:?} needs a :K suffix")))?;
    let k: usize = arg
        .parse()
        .map_err(|_| Error::Config(format!("class count in {kind:?} must be an integer")))?;
    match name {
        "bfs-regions" => bfs_regions(g, k, rng),
        "random" => random_labels(g.n(), k, rng),
        other => Err(Error::Config(format!(
            "unknown labeling kind {other:?}; choose by-cluster, bfs-regions:K, or random:K"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_cliques_and_a_bridge() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gen = cliques(2, 4, 1, &mut rng).unwrap();
        assert_eq!(gen.graph.n(), 8);
        assert_eq!(gen.graph.m(), 2 * 6 + 1);
        let clusters = gen.clusters.unwrap();
        let lab = by_cluster(&clusters).unwrap();
        assert_eq!(lab.k(), 2);
        assert_eq!(gen.graph.cut_size(&lab), 1);
    }

    #[test]
    fn clique_wiring_can_be_infeasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            cliques(1, 4, 1, &mut rng),
            Err(Error::Config(_))
        ));
        // Three cliques with one bridge can never connect.
        assert!(matches!(
            cliques(3, 3, 1, &mut rng),
            Err(Error::ResampleCap(_))
        ));
    }

    #[test]
    fn grid_shape() {
        let g = grid(3, 4).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.m(), 3 * 3 + 2 * 4);
        // Corner has two neighbors, interior four.
        assert_eq!(g.neighbors(1).len(), 2);
        assert_eq!(g.neighbors(6).len(), 4);
    }

    #[test]
    fn cycle_shape() {
        let g = cycle(8).unwrap();
        assert_eq!(g.m(), 8);
        assert!(g.neighbors(1).iter().any(|&(w, _)| w == 8));
        assert!(cycle(2).is_err());
    }

    #[test]
    fn random_trees_are_trees_and_deterministic() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_tree(17, &mut rng).unwrap();
            assert!(g.is_tree());
        }
        let a = random_tree(30, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = random_tree(30, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn er_connects_or_gives_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = erdos_renyi(20, 0.4, &mut rng).unwrap();
        assert_eq!(g.n(), 20);
        assert!(matches!(
            erdos_renyi(20, 0.0, &mut rng),
            Err(Error::ResampleCap(_))
        ));
    }

    #[test]
    fn bfs_regions_cut_k_minus_one_tree_edges() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_tree(24, &mut rng).unwrap();
            let lab = bfs_regions(&g, 3, &mut rng).unwrap();
            assert_eq!(lab.k(), 3);
            assert_eq!(g.cut_size(&lab), 2);
        }
    }

    #[test]
    fn bfs_regions_stay_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let gen = cliques(3, 4, 4, &mut rng).unwrap();
        let lab = bfs_regions(&gen.graph, 4, &mut rng).unwrap();
        // Each class induces a connected subgraph.
        for k in 1..=4 {
            let members: Vec<usize> =
                (1..=gen.graph.n()).filter(|&v| lab.label(v) == k).collect();
            let mut seen = std::collections::HashSet::from([members[0]]);
            let mut queue = vec![members[0]];
            while let Some(v) = queue.pop() {
                for &(w, _) in gen.graph.neighbors(v) {
                    if lab.label(w) == k && seen.insert(w) {
                        queue.push(w);
                    }
                }
            }
            assert_eq!(seen.len(), members.len(), "class {k} split");
        }
    }

    #[test]
    fn random_labels_cover_all_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lab = random_labels(10, 3, &mut rng).unwrap();
        assert_eq!(lab.k(), 3);
        let uniform = random_labels(10, 1, &mut rng).unwrap();
        let g = cycle(10).unwrap();
        assert_eq!(g.cut_size(&uniform), 0);
        assert!(random_labels(3, 5, &mut rng).is_err());
    }

    #[test]
    fn cli_dispatch_builds_and_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let params: HashMap<String, String> = [("n".to_string(), "9".to_string())].into();
        let gen = generate_graph("cycle", &params, &mut rng).unwrap();
        assert_eq!(gen.graph.m(), 9);
        let lab = generate_labeling("bfs-regions:2", &gen.graph, None, &mut rng).unwrap();
        assert_eq!(lab.k(), 2);
        assert!(generate_labeling("by-cluster", &gen.graph, None, &mut rng).is_err());
        assert!(generate_graph("mobius", &params, &mut rng).is_err());
        let mut bad = params.clone();
        bad.insert("extra".into(), "1".into());
        assert!(generate_graph("cycle", &bad, &mut rng).is_err());
        assert!(generate_labeling("random", &gen.graph, None, &mut rng).is_err());
    }
}
