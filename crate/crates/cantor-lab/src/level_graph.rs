//! Level graphs on the words of a fixed length.
//!
//! For a labelling family `θ` (one label per length, `|θ_k| = k`), two
//! words of length `n` are joined when they have the form `θ_k·0·w` and
//! `θ_k·1·w`. Each level then carries exactly `2^n - 1` edges and forms a
//! spanning tree of the `2^n` vertices, so repetition-free paths between
//! vertices are unique. The breadth-first ordering of a level rooted at
//! `θ_p·0` drives the reduction-table synthesizer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{dense_word, Word};

/// Which labelling family a level graph is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaSpec {
    /// `θ_k = 0^k`.
    Zeros,
    /// `θ_k` is the k-th member of the dense sequence.
    DenseSeq,
}

impl ThetaSpec {
    pub fn label(&self, k: u64) -> Word {
        match self {
            ThetaSpec::Zeros => Word::zeros(k as usize),
            ThetaSpec::DenseSeq => dense_word(k),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("length mismatch: |{0}| != |{1}|")]
    LengthMismatch(Word, Word),
}

/// Directed relation: `e = e'`, or `e = θ_k·0·w` and `e' = θ_k·1·w` for
/// some `k` and `w`. Requires equal lengths.
pub fn related(theta: ThetaSpec, e: &Word, e2: &Word) -> Result<bool, GraphError> {
    if e.len() != e2.len() {
        return Err(GraphError::LengthMismatch(e.clone(), e2.clone()));
    }
    if e == e2 {
        return Ok(true);
    }
    Ok(edge_level(theta, e, e2).is_some())
}

/// Symmetric closure of [`related`].
pub fn s_related(theta: ThetaSpec, e: &Word, e2: &Word) -> Result<bool, GraphError> {
    Ok(related(theta, e, e2)? || related(theta, e2, e)?)
}

/// The split position `k` witnessing a directed edge `e -> e2`, if any.
pub fn edge_level(theta: ThetaSpec, e: &Word, e2: &Word) -> Option<usize> {
    debug_assert_eq!(e.len(), e2.len());
    (0..e.len()).find(|&k| {
        e.bit(k) == 0
            && e2.bit(k) == 1
            && e.bits()[..k] == e2.bits()[..k]
            && e.bits()[k + 1..] == e2.bits()[k + 1..]
            && e.prefix(k) == theta.label(k as u64)
    })
}

/// One level of the graph: all words of length `n` plus its edge list.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    pub theta: ThetaSpec,
    pub n: usize,
    /// Directed edges `(lower, upper)`, generated from the `(k, w)` form.
    pub edges: Vec<(Word, Word)>,
}

impl LevelGraph {
    pub fn new(theta: ThetaSpec, n: usize) -> Self {
        let mut edges = Vec::with_capacity((1usize << n).saturating_sub(1));
        for k in 0..n {
            let label = theta.label(k as u64);
            for w in Word::all_of_len(n - k - 1) {
                let lower = label.extended(0).concat(&w);
                let upper = label.extended(1).concat(&w);
                edges.push((lower, upper));
            }
        }
        LevelGraph { theta, n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.n
    }

    /// Neighbour lists over vertex indices (a word of length `n` read as a
    /// binary number).
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (a, b) in &self.edges {
            let ia = word_to_index(a);
            let ib = word_to_index(b);
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count()
    }

    /// Breadth-first distances from a root vertex.
    fn bfs(&self, root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let adj = self.adjacency();
        let mut dist = vec![None; self.vertex_count()];
        let mut parent = vec![None; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[root] = Some(0);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }
}

fn word_to_index(w: &Word) -> usize {
    w.bits().iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

fn index_to_word(i: usize, n: usize) -> Word {
    Word::from_bits((0..n).rev().map(|j| ((i >> j) & 1) as u8)).unwrap()
}

/// The unique repetition-free path from `e` to `e2` in the level tree,
/// as its vertex sequence (so a trivial path has one vertex).
pub fn unique_path(theta: ThetaSpec, e: &Word, e2: &Word) -> Result<Vec<Word>, GraphError> {
    if e.len() != e2.len() {
        return Err(GraphError::LengthMismatch(e.clone(), e2.clone()));
    }
    let n = e.len();
    let graph = LevelGraph::new(theta, n);
    let (_, parent) = graph.bfs(word_to_index(e2));
    let mut path = vec![word_to_index(e)];
    while *path.last().unwrap() != word_to_index(e2) {
        let next = parent[*path.last().unwrap()].expect("level graph is connected");
        path.push(next);
    }
    Ok(path.into_iter().map(|i| index_to_word(i, n)).collect())
}

/// Outcome of the level-tree verification at one level.
#[derive(Clone, Debug, Serialize)]
pub struct TreeReport {
    pub theta: ThetaSpec,
    pub level: usize,
    pub edge_count: usize,
    pub connected: bool,
    pub single_change_ok: bool,
    /// First offending ordered pair for the single-change property, if any.
    pub first_violation: Option<(Word, Word)>,
}

impl TreeReport {
    pub fn pass(&self) -> bool {
        self.edge_count == self.expected_edges() && self.connected && self.single_change_ok
    }

    pub fn expected_edges(&self) -> usize {
        (1usize << self.level) - 1
    }
}

/// Verifies, at one level: the edge count is `2^n - 1`, the graph is
/// connected (hence a tree), and for every ordered pair `e != e2` the
/// maximal differing coordinate is changed exactly once along the unique
/// path while every other changed coordinate lies below it.
pub fn verify_level_tree(theta: ThetaSpec, n: usize) -> TreeReport {
    let graph = LevelGraph::new(theta, n);
    let edge_count = graph.edges.len();
    let connected = graph.is_connected();
    let mut single_change_ok = true;
    let mut first_violation = None;

    if connected {
        'outer: for e in Word::all_of_len(n) {
            let (_, parent) = graph.bfs(word_to_index(&e));
            for e2 in Word::all_of_len(n) {
                if e == e2 {
                    continue;
                }
                // reconstruct the path e2 -> e from the BFS tree rooted at e
                let mut path = vec![word_to_index(&e2)];
                while *path.last().unwrap() != word_to_index(&e) {
                    path.push(parent[*path.last().unwrap()].unwrap());
                }
                let words: Vec<Word> = path.iter().map(|&i| index_to_word(i, n)).collect();
                let l = (0..n).rev().find(|&i| e.bit(i) != e2.bit(i)).unwrap();
                let mut changes_at_l = 0usize;
                let mut ok = true;
                for pair in words.windows(2) {
                    let changed = (0..n).find(|&i| pair[0].bit(i) != pair[1].bit(i)).unwrap();
                    if changed == l {
                        changes_at_l += 1;
                    } else if changed > l {
                        ok = false;
                    }
                }
                if !(ok && changes_at_l == 1) {
                    single_change_ok = false;
                    first_violation = Some((e2, e));
                    break 'outer;
                }
            }
        }
    } else {
        single_change_ok = false;
    }

    TreeReport {
        theta,
        level: n,
        edge_count,
        connected,
        single_change_ok,
        first_violation,
    }
}

/// Orders the words of length `p + 1` by breadth-first distance from
/// `θ_p·0`: the root, then its neighbours with `θ_p·1` first, then each
/// further shell. Ties inside a shell are broken lexicographically, so
/// every prefix of the ordering induces a connected subgraph.
pub fn level_ordering(theta: ThetaSpec, p: u64) -> Vec<Word> {
    let n = p as usize + 1;
    let graph = LevelGraph::new(theta, n);
    let root = theta.label(p).extended(0);
    let second = theta.label(p).extended(1);
    let (dist, _) = graph.bfs(word_to_index(&root));

    let mut shells: Vec<Vec<Word>> = Vec::new();
    for (i, d) in dist.iter().enumerate() {
        let d = d.expect("level graph is connected");
        while shells.len() <= d {
            shells.push(Vec::new());
        }
        shells[d].push(index_to_word(i, n));
    }
    for shell in &mut shells {
        shell.sort();
    }
    // the distance-1 shell starts with θ_p·1
    if shells.len() > 1 {
        if let Some(pos) = shells[1].iter().position(|w| *w == second) {
            shells[1].remove(pos);
            shells[1].insert(0, second);
        }
    }
    shells.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_examples() {
        assert!(related(ThetaSpec::Zeros, &Word::parse("00"), &Word::parse("01")).unwrap());
        assert!(!related(ThetaSpec::Zeros, &Word::parse("10"), &Word::parse("01")).unwrap());
        let w = Word::parse("0110");
        assert!(related(ThetaSpec::DenseSeq, &w, &w).unwrap());
        assert!(related(ThetaSpec::Zeros, &Word::empty(), &Word::empty()).unwrap());
        assert!(matches!(
            related(ThetaSpec::Zeros, &Word::parse("0"), &Word::parse("00")),
            Err(GraphError::LengthMismatch(_, _))
        ));
    }

    #[test]
    fn path_examples() {
        let p = unique_path(ThetaSpec::Zeros, &Word::parse("10"), &Word::parse("11")).unwrap();
        assert_eq!(
            p,
            vec![
                Word::parse("10"),
                Word::parse("00"),
                Word::parse("01"),
                Word::parse("11")
            ]
        );
        let trivial = unique_path(ThetaSpec::DenseSeq, &Word::parse("011"), &Word::parse("011"));
        assert_eq!(trivial.unwrap().len(), 1);
        let direct = unique_path(ThetaSpec::Zeros, &Word::parse("00"), &Word::parse("01"));
        assert_eq!(direct.unwrap().len(), 2);
    }

    #[test]
    fn levels_are_spanning_trees() {
        for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
            for n in 0..=10usize {
                let g = LevelGraph::new(theta, n);
                assert_eq!(g.edges.len(), (1usize << n) - 1, "{:?} level {}", theta, n);
                assert!(g.is_connected(), "{:?} level {}", theta, n);
            }
        }
    }

    #[test]
    fn bfs_and_dfs_paths_agree() {
        // independent search: iterative DFS that tracks the current stack
        fn dfs_path(g: &LevelGraph, from: usize, to: usize) -> Vec<usize> {
            let adj = g.adjacency();
            let mut visited = vec![false; g.vertex_count()];
            let mut path = vec![from];
            let mut iters: Vec<usize> = vec![0];
            visited[from] = true;
            loop {
                let v = *path.last().unwrap();
                if v == to {
                    return path;
                }
                let i = *iters.last().unwrap();
                if i < adj[v].len() {
                    *iters.last_mut().unwrap() += 1;
                    let w = adj[v][i];
                    if !visited[w] {
                        visited[w] = true;
                        path.push(w);
                        iters.push(0);
                    }
                } else {
                    path.pop();
                    iters.pop();
                }
            }
        }
        for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
            for n in 0..=7usize {
                let g = LevelGraph::new(theta, n);
                for a in 0..g.vertex_count() {
                    for b in 0..g.vertex_count() {
                        let via_bfs: Vec<usize> = unique_path(
                            theta,
                            &index_to_word(a, n),
                            &index_to_word(b, n),
                        )
                        .unwrap()
                        .iter()
                        .map(word_to_index)
                        .collect();
                        assert_eq!(via_bfs, dfs_path(&g, a, b), "{:?} n={} {}->{}", theta, n, a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn single_change_property_holds_exhaustively() {
        for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
            for n in 0..=7usize {
                let report = verify_level_tree(theta, n);
                assert!(report.pass(), "{:?} at level {}: {:?}", theta, n, report);
            }
        }
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(
            level_ordering(ThetaSpec::Zeros, 1),
            vec![
                Word::parse("00"),
                Word::parse("01"),
                Word::parse("10"),
                Word::parse("11")
            ]
        );
        assert_eq!(
            level_ordering(ThetaSpec::Zeros, 0),
            vec![Word::parse("0"), Word::parse("1")]
        );
        let dense = level_ordering(ThetaSpec::DenseSeq, 1);
        assert_eq!(dense[0], Word::parse("00"));
        assert_eq!(dense[1], Word::parse("01"));
    }

    #[test]
    fn ordering_prefixes_are_connected() {
        for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
            for p in 0..=7u64 {
                let order = level_ordering(theta, p);
                assert_eq!(order.len(), 1usize << (p + 1));
                for m in 1..order.len() {
                    let attached = (0..m)
                        .any(|j| s_related(theta, &order[j], &order[m]).unwrap());
                    assert!(attached, "{:?} p={} position {}", theta, p, m);
                }
            }
        }
    }

    #[test]
    fn shell_sizes_never_skip() {
        for theta in [ThetaSpec::Zeros, ThetaSpec::DenseSeq] {
            for p in 0..=7u64 {
                let graph = LevelGraph::new(theta, p as usize + 1);
                let root = theta.label(p).extended(0);
                let (dist, _) = graph.bfs(word_to_index(&root));
                let max = dist.iter().map(|d| d.unwrap()).max().unwrap();
                for k in 0..max {
                    let size = dist.iter().filter(|d| d.unwrap() == k).count();
                    assert!(size > 0, "{:?} p={} empty shell {}", theta, p, k);
                }
            }
        }
    }
}
