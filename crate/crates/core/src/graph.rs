//! Simple undirected graphs, unordered pair sets, seeded randomness, and the
//! three random-graph samplers.
//!
//! Graphs are immutable once constructed: every public "mutation" returns a
//! new graph. Adjacency lives in fixed-width bitset rows so neighborhood
//! unions and intersections are word operations. Vertex labels are `0..n`.
//!
//! File formats:
//! * JSON: `{"n": 6, "edges": [[0,1],[2,5]]}` with each edge `u < v`, sorted
//!   lexicographically.
//! * Edge-list text: a header line `n <count>` followed by one `u v` line per
//!   edge; blank lines and `#` comments are ignored.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::{self, words_for, VertexSet, WORD_BITS};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

/// An undirected graph on vertices `0..n` with bitset adjacency rows.
///
/// Invariants: the adjacency matrix is symmetric with a zero diagonal, and
/// `edge_count` matches the stored rows. All constructors enforce `n >= 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    edges: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "graph needs at least one vertex");
        let words = words_for(n);
        Graph {
            n,
            words,
            edges: 0,
            rows: vec![0; n * words],
        }
    }

    /// Build a graph from explicit edges. Self-loops and out-of-range labels
    /// are domain errors; duplicate edges are idempotent.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_pair(u, v)?;
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    /// Cycle `C_n` (`n >= 3`).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.set_edge(v, (v + 1) % n, true);
        }
        g
    }

    /// Path on `n` vertices (`0-1-...-(n-1)`).
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 0..n.saturating_sub(1) {
            g.set_edge(v, v + 1, true);
        }
        g
    }

    /// Star with center `0` and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.set_edge(0, v, true);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        u != v && bitset::test_bit(self.row(u), v)
    }

    pub fn degree(&self, v: usize) -> usize {
        bitset::count(self.row(v))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Number of common neighbors `|N(u) ∩ N(v)|`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        bitset::and_count(self.row(u), self.row(v))
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bitset::iter_bits(self.row(v))
    }

    /// All edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Degree/edge summary.
    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n: self.n,
            edges: self.edges,
            max_degree: self.max_degree(),
            min_degree: self.min_degree(),
        }
    }

    /// Copy of this graph with edge `uv` present.
    pub fn with_edge_added(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        g.set_edge(u, v, true);
        Ok(g)
    }

    /// Copy of this graph with edge `uv` absent.
    pub fn with_edge_removed(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        g.set_edge(u, v, false);
        Ok(g)
    }

    /// Copy of this graph with every pair in `pairs` removed; pairs that are
    /// not edges are ignored.
    pub fn with_pairs_removed(&self, pairs: &PairSet) -> Result<Graph> {
        let mut g = self.clone();
        for (u, v) in pairs.iter() {
            g.check_pair(u, v)?;
            g.set_edge(u, v, false);
        }
        Ok(g)
    }

    /// Adjacency row of `v` as bitset words.
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words
    }

    /// Closed neighborhood rows `N[v] = N(v) ∪ {v}`, flattened.
    pub(crate) fn closed_rows(&self) -> Vec<u64> {
        let mut closed = self.rows.clone();
        for v in 0..self.n {
            bitset::set_bit(&mut closed[v * self.words..(v + 1) * self.words], v);
        }
        closed
    }

    /// In-place edge insertion for incremental construction (process runner);
    /// the public API stays immutable.
    pub(crate) fn add_edge_mut(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.set_edge(u, v, true);
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::domain(format!("self-loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::domain(format!(
                "vertex pair ({u}, {v}) out of range for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let present = bitset::test_bit(self.row(u), v);
        if present == on {
            return;
        }
        let w = self.words;
        if on {
            bitset::set_bit(&mut self.rows[u * w..(u + 1) * w], v);
            bitset::set_bit(&mut self.rows[v * w..(v + 1) * w], u);
            self.edges += 1;
        } else {
            bitset::clear_bit(&mut self.rows[u * w..(u + 1) * w], v);
            bitset::clear_bit(&mut self.rows[v * w..(v + 1) * w], u);
            self.edges -= 1;
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Degree and edge-count summary of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub min_degree: usize,
}

// ---------------------------------------------------------------------------
// PairSet
// ---------------------------------------------------------------------------

/// A set of distinct unordered vertex pairs.
///
/// Pairs are normalized to `u < v` and need not be edges of any particular
/// graph; range checks happen where a pair set meets a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn new() -> Self {
        PairSet::default()
    }

    /// Insert a pair; returns whether it was new. `u == v` is a domain error.
    pub fn insert(&mut self, u: usize, v: usize) -> Result<bool> {
        if u == v {
            return Err(Error::domain(format!("pair ({u}, {u}) is a self-loop")));
        }
        Ok(self.pairs.insert((u.min(v), u.max(v))))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = PairSet::new();
        for (u, v) in pairs {
            set.insert(u, v)?;
        }
        Ok(set)
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&(u.min(v), u.max(v)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in sorted order, each as `(u, v)` with `u < v`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

// ---------------------------------------------------------------------------
// RandomSource
// ---------------------------------------------------------------------------

/// A reproducible randomness handle: a 64-bit seed plus a stream index.
///
/// The same `(seed, stream)` always yields the same generator; distinct
/// stream indices under one seed yield independent streams. Replicate `i` of
/// an experiment uses stream `i` — that is the only splitting rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
}

impl RandomSource {
    /// Source for `(seed, stream 0)`.
    pub fn new(seed: u64) -> Self {
        RandomSource { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        RandomSource { seed, stream }
    }

    /// The same seed on a different stream.
    pub fn stream(&self, index: u64) -> Self {
        RandomSource {
            seed: self.seed,
            stream: index,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream
    }

    /// Instantiate the generator for this (seed, stream).
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Number of unordered pairs on `n` vertices.
pub(crate) fn pair_count(n: usize) -> u64 {
    n as u64 * (n as u64 - 1) / 2
}

/// The `idx`-th pair in lexicographic `(u, v)`, `u < v` order.
pub(crate) fn pair_from_index(n: usize, idx: u64) -> (usize, usize) {
    debug_assert!(idx < pair_count(n));
    // Row u starts at base(u) = u*n - u(u+1)/2; invert by solving the
    // quadratic and correcting for rounding.
    let nf = n as f64;
    let mut u = ((2.0 * nf - 1.0 - ((2.0 * nf - 1.0).powi(2) - 8.0 * idx as f64).sqrt()) / 2.0)
        .floor()
        .max(0.0) as usize;
    let base = |u: u64| u * n as u64 - u * (u + 1) / 2;
    while u > 0 && base(u as u64) > idx {
        u -= 1;
    }
    while base(u as u64 + 1) <= idx {
        u += 1;
    }
    let v = u + 1 + (idx - base(u as u64)) as usize;
    (u, v)
}

/// Sample `G(n, p)`: every pair is an edge independently with probability
/// `p`, drawn in fixed `u < v` lexicographic order.
///
/// # Panics
/// Panics if `p` is not in `[0, 1]`.
pub fn sample_gnp(n: usize, p: f64, src: RandomSource) -> Graph {
    let mut rng = src.rng();
    sample_gnp_with(&mut rng, n, p)
}

/// `G(n, p)` sampler drawing from a caller-supplied generator; used when one
/// stream must produce several graphs in sequence.
pub fn sample_gnp_with<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    assert!(
        p.is_finite() && (0.0..=1.0).contains(&p),
        "edge probability must lie in [0, 1], got {p}"
    );
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// Sample `G(n, m)`: a uniformly random graph with exactly `m` edges, via a
/// partial Fisher–Yates shuffle over the `C(n, 2)` pair indices.
pub fn sample_gnm(n: usize, m: u64, src: RandomSource) -> Result<Graph> {
    assert!(n >= 1, "graph needs at least one vertex");
    let total = pair_count(n);
    if m > total {
        return Err(Error::domain(format!(
            "m = {m} exceeds the {total} pairs available on n = {n} vertices"
        )));
    }
    let mut rng = src.rng();
    // Sparse Fisher-Yates: swap targets are materialized only when touched.
    let mut moved: HashMap<u64, u64> = HashMap::new();
    let mut g = Graph::empty(n);
    for i in 0..m {
        let j = rng.random_range(i..total);
        let picked = moved.get(&j).copied().unwrap_or(j);
        let displaced = moved.get(&i).copied().unwrap_or(i);
        moved.insert(j, displaced);
        let (u, v) = pair_from_index(n, picked);
        g.set_edge(u, v, true);
    }
    debug_assert_eq!(g.edge_count() as u64, m);
    Ok(g)
}

/// Uniformly random edge process: all `C(n, 2)` pairs in random order. The
/// graph formed by the first `m` entries is distributed as `G(n, m)`.
pub fn process_stream(n: usize, src: RandomSource) -> Vec<(usize, usize)> {
    assert!(n >= 1, "graph needs at least one vertex");
    let total = pair_count(n);
    let mut rng = src.rng();
    let mut indices: Vec<u64> = (0..total).collect();
    indices.shuffle(&mut rng);
    indices
        .into_iter()
        .map(|idx| pair_from_index(n, idx))
        .collect()
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// On-disk graph encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    EdgeList,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Serialize to the JSON format (edges normalized to `u < v`, sorted).
pub fn to_json_string(g: &Graph) -> String {
    let file = GraphFile {
        n: g.n(),
        edges: g.edges(),
    };
    serde_json::to_string(&file).expect("graph serialization cannot fail")
}

/// Parse the JSON format, rejecting self-loops, out-of-range labels, and
/// duplicate edges.
pub fn from_json_str(text: &str) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::format(format!("graph json: {e}")))?;
    build_checked(file.n, &file.edges)
}

/// Serialize to the edge-list text format.
pub fn to_edge_list_string(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parse the edge-list text format (header `n <count>`, one `u v` line per
/// edge, `#` comments and blank lines ignored).
pub fn from_edge_list_str(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::format("edge list: missing 'n <count>' header"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|e| Error::format(format!("edge list header: {e}")))?,
        _ => {
            return Err(Error::format(format!(
                "edge list: expected 'n <count>' header, got '{header}'"
            )))
        }
    };
    let mut edges = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(Error::format(format!(
                "edge list: expected 'u v', got '{line}'"
            )));
        };
        let u = u
            .parse::<usize>()
            .map_err(|e| Error::format(format!("edge list: {e} in '{line}'")))?;
        let v = v
            .parse::<usize>()
            .map_err(|e| Error::format(format!("edge list: {e} in '{line}'")))?;
        edges.push((u, v));
    }
    build_checked(n, &edges)
}

fn build_checked(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    if n < 1 {
        return Err(Error::format("graph file: n must be at least 1"));
    }
    let mut g = Graph::empty(n);
    for &(u, v) in edges {
        if u == v {
            return Err(Error::format(format!("graph file: self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::format(format!(
                "graph file: edge ({u}, {v}) out of range for n = {n}"
            )));
        }
        if g.has_edge(u, v) {
            return Err(Error::format(format!(
                "graph file: duplicate edge ({u}, {v})"
            )));
        }
        g.set_edge(u, v, true);
    }
    Ok(g)
}

/// Read a graph, sniffing the format: content starting with `{` is JSON,
/// anything else is edge-list text.
pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim_start().starts_with('{') {
        from_json_str(&text)
    } else {
        from_edge_list_str(&text)
    }
}

/// Write a graph in the requested format.
pub fn write_graph(path: impl AsRef<Path>, g: &Graph, format: GraphFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        GraphFormat::Json => {
            let mut s = to_json_string(g);
            s.push('\n');
            s
        }
        GraphFormat::EdgeList => to_edge_list_string(g),
    };
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Convenience: vertex set sized for this graph.
impl Graph {
    pub fn vertex_set(&self, members: impl IntoIterator<Item = usize>) -> VertexSet {
        VertexSet::from_members(self.n, members)
    }
}

/// Check the structural invariants (symmetry, zero diagonal, edge count);
/// used by tests and debug assertions.
pub fn check_invariants(g: &Graph) -> bool {
    let mut edges = 0;
    for u in 0..g.n() {
        if bitset::test_bit(g.row(u), u) {
            return false;
        }
        let tail = g.n() % WORD_BITS;
        if tail != 0 && g.row(u).last().copied().unwrap_or(0) >> tail != 0 {
            return false;
        }
        for v in (u + 1)..g.n() {
            let forward = bitset::test_bit(g.row(u), v);
            let backward = bitset::test_bit(g.row(v), u);
            if forward != backward {
                return false;
            }
            edges += usize::from(forward);
        }
    }
    edges == g.edge_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_index_roundtrip() {
        for n in [2usize, 3, 5, 64, 65, 201] {
            let mut seen = std::collections::HashSet::new();
            for idx in 0..pair_count(n) {
                let (u, v) = pair_from_index(n, idx);
                assert!(u < v && v < n, "n={n} idx={idx} -> ({u},{v})");
                assert!(seen.insert((u, v)));
            }
            assert_eq!(seen.len() as u64, pair_count(n));
        }
    }

    #[test]
    fn structured_graphs() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.has_edge(4, 0));
        assert_eq!(c5.stats().max_degree, 2);

        let p4 = Graph::path(4);
        assert_eq!(p4.edge_count(), 3);
        assert_eq!(p4.min_degree(), 1);

        let s5 = Graph::star(5);
        assert_eq!(s5.degree(0), 4);
        assert_eq!(s5.stats().min_degree, 1);

        let k4 = Graph::complete(4);
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.common_neighbors(0, 1), 2);

        for g in [&c5, &p4, &s5, &k4] {
            assert!(check_invariants(g));
        }
    }

    #[test]
    fn common_neighbors_excludes_endpoints() {
        // In C4 adjacent vertices share no neighbor, opposite vertices two.
        let c4 = Graph::cycle(4);
        assert_eq!(c4.common_neighbors(0, 1), 0);
        assert_eq!(c4.common_neighbors(0, 2), 2);
    }

    #[test]
    fn immutable_updates() {
        let g = Graph::path(3);
        let h = g.with_edge_added(0, 2).unwrap();
        assert!(!g.has_edge(0, 2));
        assert!(h.has_edge(0, 2));
        let back = h.with_edge_removed(0, 2).unwrap();
        assert_eq!(back, g);
        assert!(g.with_edge_added(1, 1).is_err());
        assert!(g.with_edge_added(0, 3).is_err());
    }

    #[test]
    fn pair_set_normalizes() {
        let mut a = PairSet::new();
        assert!(a.insert(3, 1).unwrap());
        assert!(!a.insert(1, 3).unwrap());
        assert!(a.contains(3, 1) && a.contains(1, 3));
        assert!(a.insert(2, 2).is_err());
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![(1, 3)]);
    }

    #[test]
    fn gnp_deterministic_per_stream() {
        let src = RandomSource::new(7);
        let a = sample_gnp(20, 0.4, src);
        let b = sample_gnp(20, 0.4, src);
        assert_eq!(a, b);
        let c = sample_gnp(20, 0.4, src.stream(1));
        assert_ne!(a, c, "distinct streams should diverge");
    }

    #[test]
    fn gnp_extremes() {
        let src = RandomSource::new(1);
        assert_eq!(sample_gnp(9, 0.0, src).edge_count(), 0);
        assert_eq!(sample_gnp(9, 1.0, src).edge_count(), 36);
    }

    #[test]
    fn gnm_exact_edge_count_and_range() {
        let src = RandomSource::new(3);
        for m in [0u64, 1, 7, 36] {
            let g = sample_gnm(9, m, src).unwrap();
            assert_eq!(g.edge_count() as u64, m);
            assert!(check_invariants(&g));
        }
        assert!(matches!(
            sample_gnm(9, 37, src),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gnm_unbiased_smoke() {
        // Every pair should appear roughly equally often across seeds.
        let mut hits = [[0u32; 4]; 4];
        for seed in 0..2000 {
            let g = sample_gnm(4, 2, RandomSource::new(seed)).unwrap();
            for (u, v) in g.edges() {
                hits[u][v] += 1;
            }
        }
        for u in 0..4 {
            for v in (u + 1)..4 {
                // Expected 2000 * 2/6 = 666 per pair.
                assert!(
                    (500..850).contains(&hits[u][v]),
                    "pair ({u},{v}) hit {} times",
                    hits[u][v]
                );
            }
        }
    }

    #[test]
    fn process_stream_is_a_permutation() {
        let seq = process_stream(8, RandomSource::new(11));
        assert_eq!(seq.len() as u64, pair_count(8));
        let distinct: std::collections::HashSet<_> = seq.iter().copied().collect();
        assert_eq!(distinct.len(), seq.len());
        for &(u, v) in &seq {
            assert!(u < v && v < 8);
        }
        assert_eq!(seq, process_stream(8, RandomSource::new(11)));
    }

    #[test]
    fn json_roundtrip() {
        let g = sample_gnp(13, 0.5, RandomSource::new(5));
        let text = to_json_string(&g);
        let back = from_json_str(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(from_json_str("{\"n\": 3}").is_err());
        assert!(from_json_str("{\"n\": 3, \"edges\": [[0,0]]}").is_err());
        assert!(from_json_str("{\"n\": 3, \"edges\": [[0,5]]}").is_err());
        assert!(from_json_str("{\"n\": 3, \"edges\": [[0,1],[1,0]]}").is_err());
        assert!(from_json_str("{\"n\": 0, \"edges\": []}").is_err());
    }

    #[test]
    fn edge_list_roundtrip_and_comments() {
        let g = Graph::cycle(5);
        let text = to_edge_list_string(&g);
        assert!(text.starts_with("n 5\n"));
        let back = from_edge_list_str(&text).unwrap();
        assert_eq!(g, back);

        let commented = "# a cycle\nn 3\n\n0 1\n1 2\n# done\n0 2\n";
        assert_eq!(from_edge_list_str(commented).unwrap(), Graph::complete(3));
        assert!(from_edge_list_str("0 1\n").is_err());
        assert!(from_edge_list_str("n 3\n0\n").is_err());
        assert!(from_edge_list_str("n 3\n0 1 2\n").is_err());
    }

    proptest! {
        #[test]
        fn sampled_graphs_satisfy_invariants(seed in 0u64..500, n in 1usize..40, p in 0.0f64..=1.0) {
            let g = sample_gnp(n, p, RandomSource::new(seed));
            prop_assert!(check_invariants(&g));
        }

        #[test]
        fn gnm_matches_requested_edges(seed in 0u64..200, n in 2usize..24) {
            let total = pair_count(n);
            let m = seed % (total + 1);
            let g = sample_gnm(n, m, RandomSource::new(seed)).unwrap();
            prop_assert_eq!(g.edge_count() as u64, m);
            prop_assert!(check_invariants(&g));
        }

        #[test]
        fn json_roundtrip_random(seed in 0u64..200, n in 1usize..20) {
            let g = sample_gnp(n, 0.5, RandomSource::new(seed));
            prop_assert_eq!(from_json_str(&to_json_string(&g)).unwrap(), g);
        }
    }
}
