//! Exact domination: the domination number, dominating-set counting and
//! enumeration, per-vertex membership counts, and pairwise overlap profiles.
//!
//! Two engines share the bitset machinery:
//!
//! * a branch-and-bound search for the domination number that branches on an
//!   undominated vertex's closed neighborhood (fewest dominator options
//!   first), prunes with `ceil(undominated / (max_degree + 1))`, and is
//!   bounded above by a greedy cover;
//! * a lexicographic `k`-subset enumerator with coverage pruning that streams
//!   every dominating `k`-set to a visitor, optionally forcing one vertex in
//!   and one vertex out — the workhorse behind counts, damage tables, and
//!   overlap profiles.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bitset::{self, VertexSet};
use crate::error::{Error, Result};
use crate::graph::Graph;

// ---------------------------------------------------------------------------
// Public types
// ---------------------------------------------------------------------------

/// All minimum dominating sets, up to a cap.
#[derive(Clone, Debug)]
pub struct MinimumSets {
    /// The domination number the sets realize.
    pub gamma: usize,
    /// Minimum dominating sets in lexicographic order (at most the cap).
    pub sets: Vec<VertexSet>,
    /// True when more sets existed beyond the cap.
    pub truncated: bool,
}

/// Counts of ordered pairs of dominating `r`-sets by intersection size:
/// `counts[i]` is the number of ordered pairs `(D, D')` with `|D ∩ D'| = i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    pub r: usize,
    /// Length `r + 1`; diagonal pairs make `counts[r]` equal the set count.
    pub counts: Vec<u64>,
}

/// Summary of the minimum-domination landscape of one graph.
#[derive(Clone, Debug)]
pub struct DominationReport {
    pub gamma: usize,
    /// Number of minimum dominating sets.
    pub x_gamma: u64,
    /// Requested extra counts `k -> X_k`.
    pub counts: BTreeMap<usize, u64>,
    /// Enumerated minimum sets, when requested.
    pub min_sets: Option<MinimumSets>,
}

/// Work limits for dominating-set enumeration.
///
/// `max_sets` caps how many sets are *visited*; exceeding it is reported as
/// truncation. `max_nodes` caps the search-tree size itself and exceeding it
/// is a capacity error (no partial results).
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub max_sets: u64,
    pub max_nodes: u64,
}

impl EnumLimits {
    /// Cap the number of visited sets only.
    pub fn sets(max_sets: u64) -> Self {
        EnumLimits {
            max_sets,
            max_nodes: u64::MAX,
        }
    }

    /// No limits at all.
    pub fn unbounded() -> Self {
        EnumLimits {
            max_sets: u64::MAX,
            max_nodes: u64::MAX,
        }
    }

    pub fn new(max_sets: u64, max_nodes: u64) -> Self {
        EnumLimits {
            max_sets,
            max_nodes,
        }
    }
}

// ---------------------------------------------------------------------------
// Dominating-set test
// ---------------------------------------------------------------------------

/// Whether `set` dominates `g`: every vertex is in `set` or adjacent to it.
///
/// # Panics
/// Panics if the set's capacity differs from `g.n()`.
pub fn is_dominating(g: &Graph, set: &VertexSet) -> bool {
    assert_eq!(set.capacity(), g.n(), "set capacity must match graph order");
    let words = g.words_per_row();
    let mut cover = vec![0u64; words];
    let closed = g.closed_rows();
    for v in set.iter() {
        for (c, w) in cover.iter_mut().zip(&closed[v * words..(v + 1) * words]) {
            *c |= w;
        }
    }
    bitset::count(&cover) == g.n()
}

// ---------------------------------------------------------------------------
// Branch-and-bound domination number
// ---------------------------------------------------------------------------

struct Solver {
    n: usize,
    words: usize,
    closed: Vec<u64>,
    closed_size: Vec<u32>,
    /// Per vertex: closed neighborhood sorted by descending degree, then by
    /// ascending index — the branching candidate order.
    candidates: Vec<Vec<u32>>,
    max_degree: usize,
    // Search state.
    cover_arena: Vec<u64>,
    banned: Vec<u64>,
    ban_trail: Vec<u32>,
    chosen: Vec<usize>,
}

impl Solver {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let words = g.words_per_row();
        let closed = g.closed_rows();
        let degree: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
        let closed_size: Vec<u32> = degree.iter().map(|d| d + 1).collect();
        let candidates = (0..n)
            .map(|v| {
                let mut opts: Vec<u32> =
                    bitset::iter_bits(&closed[v * words..(v + 1) * words])
                        .map(|w| w as u32)
                        .collect();
                opts.sort_by_key(|&w| (std::cmp::Reverse(degree[w as usize]), w));
                opts
            })
            .collect();
        Solver {
            n,
            words,
            closed,
            closed_size,
            candidates,
            max_degree: g.max_degree(),
            cover_arena: Vec::new(),
            banned: vec![0; words],
            ban_trail: Vec::new(),
            chosen: Vec::new(),
        }
    }

    /// Greedy cover: repeatedly take the vertex covering the most
    /// still-undominated vertices (ties to the lowest index).
    fn greedy(&self) -> Vec<usize> {
        let mut cover = vec![0u64; self.words];
        let mut members = Vec::new();
        while bitset::count(&cover) < self.n {
            let mut best = usize::MAX;
            let mut best_gain = 0usize;
            for v in 0..self.n {
                let row = &self.closed[v * self.words..(v + 1) * self.words];
                let gain: usize = row
                    .iter()
                    .zip(&cover)
                    .map(|(r, c)| (r & !c).count_ones() as usize)
                    .sum();
                if gain > best_gain {
                    best_gain = gain;
                    best = v;
                }
            }
            debug_assert!(best != usize::MAX);
            members.push(best);
            let row = &self.closed[best * self.words..(best + 1) * self.words];
            for (c, r) in cover.iter_mut().zip(row) {
                *c |= r;
            }
        }
        members
    }

    /// Find any dominating set of size at most `budget`, or prove none exists.
    fn find_within(&mut self, budget: usize) -> Option<Vec<usize>> {
        self.cover_arena = vec![0; (budget + 1) * self.words];
        self.banned.iter_mut().for_each(|w| *w = 0);
        self.ban_trail.clear();
        self.chosen.clear();
        if self.search(0, budget) {
            Some(self.chosen.clone())
        } else {
            None
        }
    }

    fn search(&mut self, depth: usize, budget: usize) -> bool {
        let cover = &self.cover_arena[depth * self.words..(depth + 1) * self.words];
        let covered = bitset::count(cover);
        if covered == self.n {
            return true;
        }
        if depth == budget {
            return false;
        }
        let undominated = self.n - covered;
        if undominated > (budget - depth) * (self.max_degree + 1) {
            return false;
        }
        // Branch vertex: undominated with the fewest dominator options.
        let mut branch = usize::MAX;
        let mut branch_size = u32::MAX;
        for wi in 0..self.words {
            let mut bits = !self.cover_arena[depth * self.words + wi];
            if wi == self.words - 1 && self.n % 64 != 0 {
                bits &= (1u64 << (self.n % 64)) - 1;
            }
            while bits != 0 {
                let v = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.closed_size[v] < branch_size {
                    branch_size = self.closed_size[v];
                    branch = v;
                }
            }
        }
        debug_assert!(branch != usize::MAX);

        let trail_mark = self.ban_trail.len();
        let mut found = false;
        for ci in 0..self.candidates[branch].len() {
            let w = self.candidates[branch][ci] as usize;
            if bitset::test_bit(&self.banned, w) {
                continue;
            }
            for i in 0..self.words {
                self.cover_arena[(depth + 1) * self.words + i] =
                    self.cover_arena[depth * self.words + i] | self.closed[w * self.words + i];
            }
            self.chosen.push(w);
            if self.search(depth + 1, budget) {
                found = true;
                break;
            }
            self.chosen.pop();
            // The sibling subtrees already covered every solution through w.
            bitset::set_bit(&mut self.banned, w);
            self.ban_trail.push(w as u32);
        }
        while self.ban_trail.len() > trail_mark {
            let w = self.ban_trail.pop().unwrap();
            bitset::clear_bit(&mut self.banned, w as usize);
        }
        found
    }
}

/// The domination number, by iterative deepening between the degree lower
/// bound `ceil(n / (max_degree + 1))` and a greedy upper bound.
pub fn gamma_exact(g: &Graph) -> usize {
    let mut solver = Solver::new(g);
    let greedy = solver.greedy();
    debug_assert!(is_dominating(g, &g.vertex_set(greedy.iter().copied())));
    let lower = g.n().div_ceil(g.max_degree() + 1);
    for budget in lower..greedy.len() {
        if solver.find_within(budget).is_some() {
            return budget;
        }
    }
    greedy.len()
}

/// A dominating set of size at most `budget`, if one exists.
pub fn has_dominating_set_within(g: &Graph, budget: usize) -> Option<VertexSet> {
    let mut solver = Solver::new(g);
    let greedy = solver.greedy();
    if greedy.len() <= budget {
        return Some(g.vertex_set(greedy));
    }
    solver
        .find_within(budget)
        .map(|members| g.vertex_set(members))
}

// ---------------------------------------------------------------------------
// Dominating k-set enumeration
// ---------------------------------------------------------------------------

struct Enumerator<'v> {
    n: usize,
    words: usize,
    closed: Vec<u64>,
    /// `dead[s]`: vertices whose last potential dominator is below `s`; once
    /// the scan position passes it, such an uncovered vertex is hopeless.
    dead: Vec<u64>,
    max_degree: usize,
    /// Vertices the scan may not pick (forced-in and forced-out vertices).
    unselectable: Vec<u64>,
    /// Number of selectable vertices in `[s, n)`.
    avail_suffix: Vec<u32>,
    limits: EnumLimits,
    nodes: u64,
    found: u64,
    truncated: bool,
    members: Vec<usize>,
    mask: Vec<u64>,
    cover_arena: Vec<u64>,
    visit: &'v mut dyn FnMut(&[u64], &[usize]),
}

/// Outcome of an enumeration pass.
#[derive(Clone, Copy, Debug)]
pub(crate) struct EnumOutcome {
    pub sets: u64,
    pub truncated: bool,
}

/// Stream every dominating `k`-set of `g` (optionally containing `include`
/// and avoiding `exclude`) to `visit` as `(bitmask words, members)`.
///
/// Sets are produced in lexicographic order of their scanned part; members
/// are listed in pick order (the forced vertex, if any, first). Exceeding
/// `limits.max_sets` stops the stream and reports truncation; exceeding
/// `limits.max_nodes` is a capacity error.
pub(crate) fn enumerate_dominating_sets(
    g: &Graph,
    k: usize,
    include: Option<usize>,
    exclude: Option<usize>,
    limits: EnumLimits,
    visit: &mut dyn FnMut(&[u64], &[usize]),
) -> Result<EnumOutcome> {
    let n = g.n();
    let words = g.words_per_row();
    debug_assert!(include.is_none_or(|v| v < n));
    debug_assert!(exclude.is_none_or(|v| v < n));
    debug_assert!(include.is_none() || include != exclude);

    let closed = g.closed_rows();
    let mut last_coverer = vec![0usize; n];
    for v in 0..n {
        let row = &closed[v * words..(v + 1) * words];
        last_coverer[v] = bitset::iter_bits(row).last().expect("closed row nonempty");
    }
    let mut dead = vec![0u64; (n + 1) * words];
    for s in 0..n {
        let (prev, next) = dead.split_at_mut((s + 1) * words);
        next[..words].copy_from_slice(&prev[s * words..]);
        for v in 0..n {
            if last_coverer[v] == s {
                bitset::set_bit(&mut next[..words], v);
            }
        }
    }

    let mut unselectable = vec![0u64; words];
    if let Some(v) = include {
        bitset::set_bit(&mut unselectable, v);
    }
    if let Some(v) = exclude {
        bitset::set_bit(&mut unselectable, v);
    }
    let mut avail_suffix = vec![0u32; n + 1];
    for s in (0..n).rev() {
        let selectable = !bitset::test_bit(&unselectable, s);
        avail_suffix[s] = avail_suffix[s + 1] + u32::from(selectable);
    }

    let mut mask = vec![0u64; words];
    let mut members = Vec::with_capacity(k);
    let mut cover_arena = vec![0u64; (k + 1) * words];
    let mut remaining = k;
    if let Some(v) = include {
        if k == 0 {
            return Ok(EnumOutcome {
                sets: 0,
                truncated: false,
            });
        }
        bitset::set_bit(&mut mask, v);
        members.push(v);
        cover_arena[..words].copy_from_slice(&closed[v * words..(v + 1) * words]);
        remaining = k - 1;
    }

    let mut enumerator = Enumerator {
        n,
        words,
        closed,
        dead,
        max_degree: g.max_degree(),
        unselectable,
        avail_suffix,
        limits,
        nodes: 0,
        found: 0,
        truncated: false,
        members,
        mask,
        cover_arena,
        visit,
    };
    enumerator.search(0, remaining, 0)?;
    Ok(EnumOutcome {
        sets: enumerator.found,
        truncated: enumerator.truncated,
    })
}

/// `Ok(true)` means "stop the stream" (set cap reached).
impl Enumerator<'_> {
    fn search(&mut self, start: usize, left: usize, depth: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::capacity(format!(
                "dominating-set enumeration exceeded {} search nodes",
                self.limits.max_nodes
            )));
        }
        let cover = &self.cover_arena[depth * self.words..(depth + 1) * self.words];
        if left == 0 {
            if bitset::count(cover) == self.n {
                if self.found == self.limits.max_sets {
                    self.truncated = true;
                    return Ok(true);
                }
                self.found += 1;
                (self.visit)(&self.mask, &self.members);
            }
            return Ok(false);
        }
        if (self.avail_suffix[start] as usize) < left {
            return Ok(false);
        }
        let covered = bitset::count(cover);
        if self.n - covered > left * (self.max_degree + 1) {
            return Ok(false);
        }
        // A vertex that is uncovered and whose dominators all lie before
        // `start` can never be covered by later picks.
        let dead_row = &self.dead[start * self.words..(start + 1) * self.words];
        if bitset::any_and_not(dead_row, cover) {
            return Ok(false);
        }
        for v in start..self.n {
            if bitset::test_bit(&self.unselectable, v) {
                continue;
            }
            for i in 0..self.words {
                self.cover_arena[(depth + 1) * self.words + i] = self.cover_arena
                    [depth * self.words + i]
                    | self.closed[v * self.words + i];
            }
            bitset::set_bit(&mut self.mask, v);
            self.members.push(v);
            let stop = self.search(v + 1, left - 1, depth + 1)?;
            self.members.pop();
            bitset::clear_bit(&mut self.mask, v);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

// ---------------------------------------------------------------------------
// Public counting / enumeration API
// ---------------------------------------------------------------------------

/// `X_k`: the number of dominating `k`-sets.
pub fn count_dominating_sets(g: &Graph, k: usize) -> u64 {
    let outcome = enumerate_dominating_sets(
        g,
        k,
        None,
        None,
        EnumLimits::unbounded(),
        &mut |_, _| {},
    )
    .expect("unbounded enumeration cannot hit a capacity limit");
    outcome.sets
}

/// All minimum dominating sets, stopping (with a flag) after `cap` sets.
pub fn enumerate_min_sets(g: &Graph, cap: u64) -> MinimumSets {
    let gamma = gamma_exact(g);
    let mut sets = Vec::new();
    let outcome = enumerate_dominating_sets(
        g,
        gamma,
        None,
        None,
        EnumLimits::sets(cap),
        &mut |mask, _| sets.push(VertexSet::from_words(g.n(), mask)),
    )
    .expect("set-capped enumeration cannot hit the node limit");
    MinimumSets {
        gamma,
        sets,
        truncated: outcome.truncated,
    }
}

/// `Z_v` for every vertex: the number of dominating `r`-sets containing `v`.
pub fn z_per_vertex(g: &Graph, r: usize) -> Vec<u64> {
    let mut z = vec![0u64; g.n()];
    enumerate_dominating_sets(
        g,
        r,
        None,
        None,
        EnumLimits::unbounded(),
        &mut |_, members| {
            for &v in members {
                z[v] += 1;
            }
        },
    )
    .expect("unbounded enumeration cannot hit a capacity limit");
    z
}

/// Pairwise intersection profile `W_i` of the dominating `r`-sets: counts of
/// ordered pairs (including diagonal pairs) by intersection size.
///
/// The enumeration is capped at `cap` sets; overflowing it is a capacity
/// error and no partial profile is returned.
pub fn intersection_profile(g: &Graph, r: usize, cap: u64) -> Result<IntersectionProfile> {
    let words = g.words_per_row();
    let mut masks: Vec<u64> = Vec::new();
    let outcome = enumerate_dominating_sets(
        g,
        r,
        None,
        None,
        EnumLimits::sets(cap),
        &mut |mask, _| masks.extend_from_slice(mask),
    )?;
    if outcome.truncated {
        return Err(Error::capacity(format!(
            "intersection profile needs more than {cap} dominating sets"
        )));
    }
    let sets = outcome.sets as usize;
    let mut counts = vec![0u64; r + 1];
    for a in 0..sets {
        let row_a = &masks[a * words..(a + 1) * words];
        for b in 0..sets {
            let row_b = &masks[b * words..(b + 1) * words];
            counts[bitset::and_count(row_a, row_b)] += 1;
        }
    }
    Ok(IntersectionProfile { r, counts })
}

/// Assemble a [`DominationReport`]: `gamma`, `X_gamma`, any extra requested
/// counts, and (optionally) the enumerated minimum sets.
pub fn domination_report(
    g: &Graph,
    extra_counts: &[usize],
    enumerate_cap: Option<u64>,
) -> DominationReport {
    let gamma = gamma_exact(g);
    let x_gamma = count_dominating_sets(g, gamma);
    let mut counts = BTreeMap::new();
    for &k in extra_counts {
        counts.insert(k, count_dominating_sets(g, k));
    }
    let min_sets = enumerate_cap.map(|cap| enumerate_min_sets(g, cap));
    DominationReport {
        gamma,
        x_gamma,
        counts,
        min_sets,
    }
}
