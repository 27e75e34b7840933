//! Undirected labeled graphs.
//!
//! Vertices are `1..=n`. Edges are stored with endpoints ordered low
//! before high, and the edge index is the 1-based position in the input
//! order after removing duplicates. Graphs are validated on
//! construction: no self-loops, all endpoints in range, connected,
//! at least two vertices. Class labels are `1..=k` with every class
//! occupied, so `k` is always the number of distinct labels.

use crate::{Error, Result};

/// Connected undirected graph with stable edge indices.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds and validates a graph on vertices `1..=n`.
    ///
    /// Duplicate edges (in either orientation) collapse onto the first
    /// occurrence, so edge indices refer to the deduplicated list.
    pub fn build(n: usize, edge_list: &[(usize, usize)]) -> Result<Graph> {
        if n < 2 {
            return Err(Error::TooSmall { need: 2, got: n });
        }
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::new();
        for &(u, v) in edge_list {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for w in [u, v] {
                if w < 1 || w > n {
                    return Err(Error::VertexRange { v: w, n });
                }
            }
            let e = (u.min(v), u.max(v));
            if seen.insert(e) {
                edges.push(e);
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            adj[u - 1].push((v, idx + 1));
            adj[v - 1].push((u, idx + 1));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph { n, edges, adj };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Parses "u v" edge lines; `#` starts a comment, blank lines skip.
    /// The vertex count is the largest index mentioned.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected \"u v\", got {raw:?}"),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("trailing tokens in {raw:?}"),
                });
            }
            n = n.max(u).max(v);
            edges.push((u, v));
        }
        Graph::build(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (low, high) pairs; edge index `e` lives at `edges()[e-1]`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in ascending order, each with its edge index.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v - 1]
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() == self.n - 1
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![1usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in self.neighbors(v) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Shortest path from `i` to `j` as a vertex sequence, both ends
    /// included. Among equal-length paths, breadth-first search with
    /// ascending neighbor order picks the one with lexicographically
    /// smallest parents, so the result is deterministic.
    pub fn shortest_path(&self, i: usize, j: usize) -> Vec<usize> {
        assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n);
        if i == j {
            return vec![i];
        }
        let mut parent = vec![0usize; self.n];
        parent[i - 1] = i;
        let mut queue = std::collections::VecDeque::from([i]);
        'search: while let Some(v) = queue.pop_front() {
            for &(w, _) in self.neighbors(v) {
                if parent[w - 1] == 0 {
                    parent[w - 1] = v;
                    if w == j {
                        break 'search;
                    }
                    queue.push_back(w);
                }
            }
        }
        debug_assert!(parent[j - 1] != 0, "graph is connected");
        let mut path = vec![j];
        let mut v = j;
        while v != i {
            v = parent[v - 1];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Number of edges whose endpoints carry different labels.
    pub fn cut_size(&self, lab: &Labeling) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| lab.label(u) != lab.label(v))
            .count()
    }

    /// Cut edges with exactly one endpoint in class `k`. Summed over all
    /// classes this counts every cut edge twice.
    pub fn per_class_cut_size(&self, lab: &Labeling, k: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| {
                let (a, b) = (lab.label(u), lab.label(v));
                a != b && (a == k || b == k)
            })
            .count()
    }

    /// Cut edges whose endpoint classes are exactly `{a, b}`.
    pub fn class_pair_cut_size(&self, lab: &Labeling, a: usize, b: usize) -> usize {
        assert!(a != b);
        self.edges
            .iter()
            .filter(|&&(u, v)| {
                let (x, y) = (lab.label(u), lab.label(v));
                (x, y) == (a, b) || (x, y) == (b, a)
            })
            .count()
    }
}

/// Class assignment for every vertex, with labels `1..=k`.
#[derive(Debug, Clone)]
pub struct Labeling {
    labels: Vec<usize>,
    k: usize,
}

impl Labeling {
    /// Wraps a label vector, `labels[v-1]` being the class of `v`.
    /// Labels must cover `1..=k` for `k` the largest value present.
    pub fn new(labels: Vec<usize>) -> Result<Labeling> {
        if labels.is_empty() {
            return Err(Error::Config("empty labeling".into()));
        }
        let k = *labels.iter().max().unwrap();
        let mut present = vec![false; k];
        for &l in &labels {
            if l == 0 {
                return Err(Error::Config("class labels start at 1".into()));
            }
            present[l - 1] = true;
        }
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::Config(format!(
                "class {} is empty but class {k} is used",
                missing + 1
            )));
        }
        Ok(Labeling { labels, k })
    }

    /// Parses "v k" lines assigning class `k` to vertex `v`; `#` starts
    /// a comment. Every vertex `1..=n` must appear exactly once.
    pub fn parse(text: &str, n: usize) -> Result<Labeling> {
        let mut labels = vec![0usize; n];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected \"v k\", got {raw:?}"),
                })
            };
            let v = parse(it.next())?;
            let k = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("trailing tokens in {raw:?}"),
                });
            }
            if v < 1 || v > n {
                return Err(Error::VertexRange { v, n });
            }
            if labels[v - 1] != 0 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("vertex {v} labeled twice"),
                });
            }
            if k == 0 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "class labels start at 1".into(),
                });
            }
            labels[v - 1] = k;
        }
        if let Some(v) = labels.iter().position(|&l| l == 0) {
            return Err(Error::Config(format!("vertex {} has no label", v + 1)));
        }
        Labeling::new(labels)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of classes.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v - 1]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// 1 when the endpoints disagree, 0 when they agree.
    pub fn pair_label(&self, i: usize, j: usize) -> u8 {
        u8::from(self.label(i) != self.label(j))
    }
}

/// One observed vertex pair with its disagreement label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairExample {
    pub i: usize,
    pub j: usize,
    /// 1 when the classes of `i` and `j` differ.
    pub y: u8,
}

/// Proptest strategies shared by the module tests.
#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    /// Random connected graph: a random parent tree plus extra edges.
    pub(crate) fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n)
            .prop_flat_map(|n| {
                let parents: Vec<_> = (2..=n).map(|v| 1..v).collect();
                let extras = proptest::collection::vec((1..=n, 1..=n), 0..2 * n);
                (Just(n), parents, extras)
            })
            .prop_map(|(n, parents, extras)| {
                let mut edges: Vec<(usize, usize)> =
                    parents.iter().enumerate().map(|(i, &p)| (p, i + 2)).collect();
                edges.extend(extras.into_iter().filter(|&(u, v)| u != v));
                Graph::build(n, &edges).unwrap()
            })
    }

    /// A graph together with a labeling whose classes are contiguous.
    pub(crate) fn labeled_graph(max_n: usize) -> impl Strategy<Value = (Graph, Labeling)> {
        connected_graph(max_n)
            .prop_flat_map(|g| {
                let n = g.n();
                let raw = proptest::collection::vec(1..=n.min(4), n);
                (Just(g), raw)
            })
            .prop_map(|(g, mut raw)| {
                // Compress to contiguous classes keeping first-seen order.
                let mut next = 0;
                let mut map = std::collections::HashMap::new();
                for l in &mut raw {
                    let id = *map.entry(*l).or_insert_with(|| {
                        next += 1;
                        next
                    });
                    *l = id;
                }
                let lab = Labeling::new(raw).unwrap();
                (g, lab)
            })
    }
}
