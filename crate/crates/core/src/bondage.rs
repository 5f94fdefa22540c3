//! Bondage numbers: classical upper bounds, the exact value by subset
//! search, and the damage calculus that certifies lower bounds.
//!
//! The *bondage number* `b(G)` is the smallest number of edges whose removal
//! raises the domination number (infinite for edgeless graphs, where no
//! removal can). Upper bounds come cheap (degree bounds per edge, or the
//! count of minimum dominating sets when a per-set witness exists). The lower
//! bound is certified through *damage*: removing the directed pair `→uv`
//! charges each size-`r` dominating set `D` of `G + uv` with `v ∈ D, u ∉ D`
//! a weight `1/j`, where `j` counts `u`'s dominators in `D`. The destroyed
//! count `Y_A` never exceeds the summed damage `Z_A`, so if the `a` largest
//! per-edge damages sum below the number of minimum dominating sets, some
//! minimum set survives every `a`-edge removal — certifying `b(G) > a`.
//!
//! Damage values are exact rationals throughout; the certification
//! comparisons must never be subject to rounding.

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bitset;
use crate::domination::{
    enumerate_dominating_sets, gamma_exact, has_dominating_set_within, z_per_vertex, EnumLimits,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, PairSet};

/// Exact damage value: a sum of reciprocals `1/j` with `j ≤ r`.
pub type Damage = Ratio<i128>;

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// A bondage value or bound that may be infinite (edgeless graphs only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    Finite(u64),
    Infinite,
}

impl Bound {
    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Bound::Finite(x) => Some(*x),
            Bound::Infinite => None,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Finite(x) => write!(f, "{x}"),
            Bound::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(x) => serializer.serialize_u64(*x),
            Bound::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

/// Outcome of the minimum-set-count upper bound: the count only bounds the
/// bondage number when every minimum set has a deletable witness edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinDomCount {
    /// Every minimum dominating set has an outside vertex with exactly one
    /// dominator, so `b ≤ X_γ`.
    Bound(u64),
    /// Some minimum set has no such witness; the count proves nothing.
    Inapplicable,
    /// Edgeless graph (`b = ∞` convention).
    Infinite,
}

impl Serialize for MinDomCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MinDomCount::Bound(x) => serializer.serialize_u64(*x),
            MinDomCount::Inapplicable => serializer.serialize_str("inapplicable"),
            MinDomCount::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

/// `min over edges xy of deg(x) + deg(y) − 1`; infinite for edgeless graphs.
pub fn fink_bauer_bound(g: &Graph) -> Bound {
    g.edges()
        .iter()
        .map(|&(u, v)| (g.degree(u) + g.degree(v) - 1) as u64)
        .min()
        .map_or(Bound::Infinite, Bound::Finite)
}

/// `min over edges xy of deg(x) + deg(y) − 1 − |N(x) ∩ N(y)|`; infinite for
/// edgeless graphs. Never exceeds the plain degree bound.
pub fn hartnell_rall_bound(g: &Graph) -> Bound {
    g.edges()
        .iter()
        .map(|&(u, v)| (g.degree(u) + g.degree(v) - 1 - g.common_neighbors(u, v)) as u64)
        .min()
        .map_or(Bound::Infinite, Bound::Finite)
}

/// The minimum-dominating-set count `X_γ` as a bondage upper bound, verified:
/// every minimum set must have an outside vertex with exactly one dominator
/// (deleting that edge kills the set). Without a witness for every set the
/// count proves nothing and `Inapplicable` is returned.
pub fn min_dom_count_bound(g: &Graph) -> MinDomCount {
    if g.edge_count() == 0 {
        return MinDomCount::Infinite;
    }
    let gamma = gamma_exact(g);
    let mut x = 0u64;
    let mut all_witnessed = true;
    enumerate_dominating_sets(g, gamma, None, None, EnumLimits::unbounded(), &mut |mask,
                                                                                   _| {
        x += 1;
        let mut witnessed = false;
        for u in 0..g.n() {
            if !bitset::test_bit(mask, u) && bitset::and_count(g.row(u), mask) == 1 {
                witnessed = true;
                break;
            }
        }
        all_witnessed &= witnessed;
    })
    .expect("unbounded enumeration cannot hit a capacity limit");
    debug_assert!(x >= 1);
    if all_witnessed {
        MinDomCount::Bound(x)
    } else {
        MinDomCount::Inapplicable
    }
}

// ---------------------------------------------------------------------------
// Damage of a directed pair
// ---------------------------------------------------------------------------

/// Damage of one directed pair `→uv`, with its per-`j` breakdown.
///
/// `counts[j]` is the number of size-`r` dominating sets `D` of `G + uv` with
/// `v ∈ D`, `u ∉ D`, and exactly `j` of `u`'s `G + uv`-neighbors in `D`
/// (`counts[0]` is always zero: `v` itself is such a neighbor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedDamage {
    pub u: usize,
    pub v: usize,
    pub r: usize,
    pub counts: Vec<u64>,
    /// `Σ_j counts[j] / j`.
    pub z: Damage,
}

impl DirectedDamage {
    fn from_counts(u: usize, v: usize, r: usize, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), r + 1);
        debug_assert_eq!(counts[0], 0);
        let z = weigh(&counts, 1, r);
        DirectedDamage { u, v, r, counts, z }
    }

    /// Split at threshold `l` into `(light, heavy)`: light damage comes from
    /// well-dominated configurations `j > l`, heavy damage from `j ≤ l`.
    /// The parts always sum back to `z`.
    pub fn split(&self, l: usize) -> (Damage, Damage) {
        let heavy = weigh(&self.counts, 1, l.min(self.r));
        let light = weigh(&self.counts, l + 1, self.r);
        debug_assert_eq!(light + heavy, self.z);
        (light, heavy)
    }
}

/// `Σ_{j=lo..=hi} counts[j] / j` as an exact rational.
fn weigh(counts: &[u64], lo: usize, hi: usize) -> Damage {
    let mut total = Damage::from_integer(0);
    for j in lo.max(1)..=hi.min(counts.len().saturating_sub(1)) {
        if counts[j] > 0 {
            total += Damage::new(counts[j] as i128, j as i128);
        }
    }
    total
}

fn check_damage_args(g: &Graph, u: usize, v: usize, r: usize) -> Result<()> {
    if u == v {
        return Err(Error::domain(format!(
            "damage pair must join distinct vertices, got ({u}, {v})"
        )));
    }
    if u >= g.n() || v >= g.n() {
        return Err(Error::domain(format!(
            "damage pair ({u}, {v}) out of range for n = {}",
            g.n()
        )));
    }
    if r < 1 || r > g.n() {
        return Err(Error::domain(format!(
            "set size r = {r} out of range 1..={}",
            g.n()
        )));
    }
    Ok(())
}

/// Damage `Z_{→uv}` at set size `r`: enumerate the size-`r` dominating sets
/// of `G + uv` containing `v` but not `u`, and charge each `1/j` for its `j`
/// dominators of `u`. The pair need not be an edge of `G`.
pub fn damage_directed(g: &Graph, u: usize, v: usize, r: usize) -> Result<DirectedDamage> {
    check_damage_args(g, u, v, r)?;
    let plus = g.with_edge_added(u, v)?;
    let mut counts = vec![0u64; r + 1];
    enumerate_dominating_sets(
        &plus,
        r,
        Some(v),
        Some(u),
        EnumLimits::unbounded(),
        &mut |mask, _| {
            let j = bitset::and_count(plus.row(u), mask);
            debug_assert!(j >= 1, "v is a dominator of u in G + uv");
            counts[j] += 1;
        },
    )
    .expect("unbounded enumeration cannot hit a capacity limit");
    Ok(DirectedDamage::from_counts(u, v, r, counts))
}

/// `(light, heavy)` damage of `→uv` at threshold `l`.
pub fn damage_split(g: &Graph, u: usize, v: usize, r: usize, l: usize) -> Result<(Damage, Damage)> {
    Ok(damage_directed(g, u, v, r)?.split(l))
}

/// `Y_A`: how many size-`r` dominating sets of `G` stop dominating once the
/// pairs of `A` are deleted (pairs that are not edges change nothing).
pub fn y_destroyed(g: &Graph, pairs: &PairSet, r: usize) -> Result<u64> {
    if r < 1 || r > g.n() {
        return Err(Error::domain(format!(
            "set size r = {r} out of range 1..={}",
            g.n()
        )));
    }
    let stripped = g.with_pairs_removed(pairs)?;
    let words = g.words_per_row();
    let closed = stripped.closed_rows();
    let mut destroyed = 0u64;
    let mut cover = vec![0u64; words];
    enumerate_dominating_sets(g, r, None, None, EnumLimits::unbounded(), &mut |_, members| {
        cover.iter_mut().for_each(|w| *w = 0);
        for &d in members {
            for (c, w) in cover.iter_mut().zip(&closed[d * words..(d + 1) * words]) {
                *c |= w;
            }
        }
        if bitset::count(&cover) < g.n() {
            destroyed += 1;
        }
    })
    .expect("unbounded enumeration cannot hit a capacity limit");
    Ok(destroyed)
}

// ---------------------------------------------------------------------------
// Whole-graph damage scan (edges only, one enumeration)
// ---------------------------------------------------------------------------

/// Per-edge damages of a graph from a single enumeration of its size-`r`
/// dominating sets. For an edge `uv`, `G + uv = G`, so one pass serves every
/// directed edge; the same pass collects `X_r`, per-vertex `Z_v`, and the
/// min-set witness flag.
struct EdgeScan {
    r: usize,
    x: u64,
    z_v: Vec<u64>,
    /// Prefix offsets into `nbrs` per vertex.
    offsets: Vec<usize>,
    /// Concatenated ascending neighbor lists.
    nbrs: Vec<u32>,
    /// `counts[slot * r + (j − 1)]` for slot `(u → v)` = dominating sets with
    /// `v ∈ D`, `u ∉ D`, `|N(u) ∩ D| = j`.
    counts: Vec<u64>,
    all_witnessed: bool,
}

impl EdgeScan {
    fn run(g: &Graph, r: usize, max_sets: u64) -> Result<EdgeScan> {
        let n = g.n();
        let mut offsets = vec![0usize; n + 1];
        let mut nbrs: Vec<u32> = Vec::with_capacity(2 * g.edge_count());
        for u in 0..n {
            offsets[u] = nbrs.len();
            nbrs.extend(g.neighbors(u).map(|v| v as u32));
        }
        offsets[n] = nbrs.len();

        let mut counts = vec![0u64; nbrs.len() * r];
        let mut z_v = vec![0u64; n];
        let mut all_witnessed = true;
        let outcome = enumerate_dominating_sets(
            g,
            r,
            None,
            None,
            EnumLimits::sets(max_sets),
            &mut |mask, members| {
                for &d in members {
                    z_v[d] += 1;
                }
                let mut witnessed = false;
                for u in 0..n {
                    if bitset::test_bit(mask, u) {
                        continue;
                    }
                    let j = bitset::and_count(g.row(u), mask);
                    debug_assert!(j >= 1, "outside vertices of a dominating set are dominated");
                    witnessed |= j == 1;
                    for (rank, &v) in nbrs[offsets[u]..offsets[u + 1]].iter().enumerate() {
                        if bitset::test_bit(mask, v as usize) {
                            counts[(offsets[u] + rank) * r + (j - 1)] += 1;
                        }
                    }
                }
                all_witnessed &= witnessed;
            },
        )?;
        if outcome.truncated {
            return Err(Error::capacity(format!(
                "damage scan needs more than {max_sets} dominating sets"
            )));
        }
        Ok(EdgeScan {
            r,
            x: outcome.sets,
            z_v,
            offsets,
            nbrs,
            counts,
            all_witnessed,
        })
    }

    fn slot(&self, u: usize, v: usize) -> usize {
        let list = &self.nbrs[self.offsets[u]..self.offsets[u + 1]];
        let rank = list
            .binary_search(&(v as u32))
            .expect("v must be a neighbor of u");
        self.offsets[u] + rank
    }

    /// Damage of the directed edge `→uv` (`v ∈ D` side).
    fn directed(&self, u: usize, v: usize) -> DirectedDamage {
        let slot = self.slot(u, v);
        let mut counts = vec![0u64; self.r + 1];
        counts[1..].copy_from_slice(&self.counts[slot * self.r..(slot + 1) * self.r]);
        DirectedDamage::from_counts(u, v, self.r, counts)
    }

    /// Total (undirected) damage of edge `uv`: `Z_{→uv} + Z_{→vu}`.
    fn edge_damage(&self, u: usize, v: usize) -> Damage {
        self.directed(u, v).z + self.directed(v, u).z
    }
}

// ---------------------------------------------------------------------------
// Damage table
// ---------------------------------------------------------------------------

/// Both directed damages of one unordered pair.
#[derive(Clone, Debug)]
pub struct PairDamage {
    pub u: usize,
    pub v: usize,
    /// `Z_{→uv}` (the `v ∈ D` direction).
    pub forward: DirectedDamage,
    /// `Z_{→vu}` (the `u ∈ D` direction).
    pub backward: DirectedDamage,
}

impl PairDamage {
    /// Undirected pair damage `Z_uv = Z_{→uv} + Z_{→vu}`.
    pub fn total(&self) -> Damage {
        self.forward.z + self.backward.z
    }
}

/// Exact damage bookkeeping for a whole graph at set size `r`.
#[derive(Clone, Debug)]
pub struct DamageTable {
    pub r: usize,
    /// Heavy/light threshold used when rendering splits.
    pub threshold: usize,
    /// Number of dominating `r`-sets of the graph itself.
    pub x: u64,
    /// Per-vertex membership counts `Z_v` over the graph's own `r`-sets.
    pub z_v: Vec<u64>,
    /// Per-pair damages, sorted by `(u, v)`.
    pub entries: Vec<PairDamage>,
}

/// Damage table at set size `r` (default: the domination number) and split
/// threshold `threshold`. With `all_pairs` the table covers every vertex
/// pair (each non-edge `uv` evaluated in `G + uv`); otherwise edges only,
/// computed in a single enumeration pass.
pub fn damage_table(
    g: &Graph,
    r: Option<usize>,
    threshold: usize,
    all_pairs: bool,
) -> Result<DamageTable> {
    let r = match r {
        Some(r) => {
            if r < 1 || r > g.n() {
                return Err(Error::domain(format!(
                    "set size r = {r} out of range 1..={}",
                    g.n()
                )));
            }
            r
        }
        None => gamma_exact(g),
    };
    let (entries, x, z_v) = if all_pairs {
        let mut entries = Vec::new();
        for u in 0..g.n() {
            for v in (u + 1)..g.n() {
                entries.push(PairDamage {
                    u,
                    v,
                    forward: damage_directed(g, u, v, r)?,
                    backward: damage_directed(g, v, u, r)?,
                });
            }
        }
        (
            entries,
            crate::domination::count_dominating_sets(g, r),
            z_per_vertex(g, r),
        )
    } else {
        let scan = EdgeScan::run(g, r, u64::MAX)?;
        let entries = g
            .edges()
            .into_iter()
            .map(|(u, v)| PairDamage {
                u,
                v,
                forward: scan.directed(u, v),
                backward: scan.directed(v, u),
            })
            .collect();
        (entries, scan.x, scan.z_v)
    };
    Ok(DamageTable {
        r,
        threshold,
        x,
        z_v,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Bondage results
// ---------------------------------------------------------------------------

/// Which computation produced a [`BondageResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BondageMode {
    Exact,
    Bounds,
    Certify,
}

/// Evidence behind a certified lower bound `b > certified`.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Number of minimum dominating sets that must all be destroyed.
    pub x_gamma: u64,
    /// Certified strict lower bound: `b > certified`.
    pub certified: u64,
    /// The `certified + 1` largest per-edge damages (all edges if fewer),
    /// as exact rationals.
    pub top_damages: Vec<String>,
}

/// Outcome of a bondage computation: the exact value, classical upper
/// bounds, and/or a certified lower bound.
#[derive(Clone, Debug)]
pub struct BondageResult {
    pub mode: BondageMode,
    pub gamma: usize,
    /// Exact bondage number when determined (`Infinite` iff edgeless).
    pub b: Option<Bound>,
    /// Strict lower bound `b > b_gt` when the exact value was not reached
    /// (search limit, or certification).
    pub b_gt: Option<u64>,
    pub fink_bauer: Bound,
    pub hartnell_rall: Bound,
    pub min_dom_count: MinDomCount,
    pub certificate: Option<Certificate>,
}

impl Serialize for BondageResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let extra = usize::from(self.b.is_some())
            + usize::from(self.b_gt.is_some())
            + usize::from(self.certificate.is_some());
        let mut s = serializer.serialize_struct("BondageResult", 5 + extra)?;
        s.serialize_field("mode", &self.mode)?;
        s.serialize_field("gamma", &self.gamma)?;
        if let Some(b) = &self.b {
            s.serialize_field("b", b)?;
        }
        if let Some(b_gt) = &self.b_gt {
            s.serialize_field("b_gt", b_gt)?;
        }
        s.serialize_field("fink_bauer", &self.fink_bauer)?;
        s.serialize_field("hartnell_rall", &self.hartnell_rall)?;
        s.serialize_field("min_dom_count", &self.min_dom_count)?;
        if let Some(cert) = &self.certificate {
            s.serialize_field("certificate", cert)?;
        }
        s.end()
    }
}

fn edgeless_result(g: &Graph, mode: BondageMode) -> BondageResult {
    BondageResult {
        mode,
        gamma: g.n(),
        b: Some(Bound::Infinite),
        b_gt: None,
        fink_bauer: Bound::Infinite,
        hartnell_rall: Bound::Infinite,
        min_dom_count: MinDomCount::Infinite,
        certificate: None,
    }
}

/// The three upper bounds without any subset search.
pub fn bondage_bounds(g: &Graph) -> BondageResult {
    if g.edge_count() == 0 {
        return edgeless_result(g, BondageMode::Bounds);
    }
    BondageResult {
        mode: BondageMode::Bounds,
        gamma: gamma_exact(g),
        b: None,
        b_gt: None,
        fink_bauer: fink_bauer_bound(g),
        hartnell_rall: hartnell_rall_bound(g),
        min_dom_count: min_dom_count_bound(g),
        certificate: None,
    }
}

/// Exact bondage number by iterative deepening over removal-set sizes
/// `a = 1..=min(limit, m, fink_bauer)`: the first `a` for which some
/// `a`-edge removal leaves no dominating set of size `γ(G)` is `b(G)`.
///
/// With `prune` on, removal sets whose summed damage stays below the
/// minimum-set count are skipped without solving: destroyed sets never
/// outnumber the damage, so a minimum set survives. If the limit exhausts
/// before success the result reports `b > limit` instead of a value.
pub fn bondage_exact(g: &Graph, limit: Option<u64>, prune: bool) -> BondageResult {
    if g.edge_count() == 0 {
        return edgeless_result(g, BondageMode::Exact);
    }
    let gamma = gamma_exact(g);
    let fink_bauer = fink_bauer_bound(g);
    let edges = g.edges();
    let m = edges.len() as u64;
    let cap = limit
        .unwrap_or(u64::MAX)
        .min(m)
        .min(fink_bauer.finite().expect("edges exist"));

    // Per-edge damages and the set count for the pruning rule.
    let pruning: Option<(Vec<Damage>, Damage)> = if prune {
        let scan = EdgeScan::run(g, gamma, u64::MAX).expect("uncapped scan cannot overflow");
        let damages = edges
            .iter()
            .map(|&(u, v)| scan.edge_damage(u, v))
            .collect();
        Some((damages, Damage::from_integer(scan.x as i128)))
    } else {
        None
    };

    let mut found: Option<u64> = None;
    let mut removal = PairSet::new();
    'deepening: for a in 1..=cap {
        let mut chosen = vec![0usize; a as usize];
        if search_removals(
            g,
            gamma,
            &edges,
            pruning.as_ref(),
            &mut chosen,
            0,
            0,
            &mut removal,
        ) {
            found = Some(a);
            break 'deepening;
        }
    }

    BondageResult {
        mode: BondageMode::Exact,
        gamma,
        b: found.map(Bound::Finite),
        b_gt: if found.is_none() { Some(cap) } else { None },
        fink_bauer,
        hartnell_rall: hartnell_rall_bound(g),
        min_dom_count: min_dom_count_bound(g),
        certificate: None,
    }
}

/// Lexicographic scan over `|chosen|`-subsets of `edges`; true once some
/// removal raises the domination number.
#[allow(clippy::too_many_arguments)]
fn search_removals(
    g: &Graph,
    gamma: usize,
    edges: &[(usize, usize)],
    pruning: Option<&(Vec<Damage>, Damage)>,
    chosen: &mut [usize],
    depth: usize,
    start: usize,
    scratch: &mut PairSet,
) -> bool {
    if depth == chosen.len() {
        if let Some((damages, x)) = pruning {
            let total: Damage = chosen.iter().map(|&i| damages[i]).sum();
            if total < *x {
                // Destroyed sets are bounded by total damage; some minimum
                // dominating set survives this removal.
                return false;
            }
        }
        *scratch = PairSet::from_pairs(chosen.iter().map(|&i| edges[i]))
            .expect("edge endpoints are distinct");
        let stripped = g
            .with_pairs_removed(scratch)
            .expect("edges are in range");
        return has_dominating_set_within(&stripped, gamma).is_none();
    }
    let left = chosen.len() - depth - 1;
    for i in start..edges.len() - left {
        chosen[depth] = i;
        if search_removals(g, gamma, edges, pruning, chosen, depth + 1, i + 1, scratch) {
            return true;
        }
    }
    false
}

/// Certified strict lower bound on the bondage number from per-edge damages:
/// the largest `a` whose `a` biggest damages sum below the minimum-set count
/// `X_γ` proves `b > a` (every `a`-removal leaves a surviving minimum set).
///
/// `cap` bounds the dominating-set enumeration; exceeding it is a capacity
/// error.
pub fn certified_lower_bound(g: &Graph, cap: u64) -> Result<BondageResult> {
    if g.edge_count() == 0 {
        return Ok(edgeless_result(g, BondageMode::Certify));
    }
    let gamma = gamma_exact(g);
    let scan = EdgeScan::run(g, gamma, cap)?;
    let mut damages: Vec<Damage> = g
        .edges()
        .iter()
        .map(|&(u, v)| scan.edge_damage(u, v))
        .collect();
    damages.sort_unstable_by(|a, b| b.cmp(a));

    let x = Damage::from_integer(scan.x as i128);
    let mut certified = 0u64;
    let mut running = Damage::from_integer(0);
    for damage in &damages {
        running += *damage;
        if running < x {
            certified += 1;
        } else {
            break;
        }
    }
    // Removing every edge always destroys all X sets, so certification can
    // never reach the full edge set.
    debug_assert!((certified as usize) < damages.len());

    let top = damages
        .iter()
        .take(certified as usize + 1)
        .map(|d| d.to_string())
        .collect();
    Ok(BondageResult {
        mode: BondageMode::Certify,
        gamma,
        b: None,
        b_gt: Some(certified),
        fink_bauer: fink_bauer_bound(g),
        hartnell_rall: hartnell_rall_bound(g),
        min_dom_count: if scan.all_witnessed {
            MinDomCount::Bound(scan.x)
        } else {
            MinDomCount::Inapplicable
        },
        certificate: Some(Certificate {
            x_gamma: scan.x,
            certified,
            top_damages: top,
        }),
    })
}

/// `Z_A`: summed damage of a pair set, each pair contributing both
/// directions.
pub fn damage_of_pairs(g: &Graph, pairs: &PairSet, r: usize) -> Result<Damage> {
    let mut total = Damage::from_integer(0);
    for (u, v) in pairs.iter() {
        total += damage_directed(g, u, v, r)?.z;
        total += damage_directed(g, v, u, r)?.z;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{process_stream, sample_gnp, RandomSource};

    fn damage_ratio(num: i128, den: i128) -> Damage {
        Damage::new(num, den)
    }

    #[test]
    fn degree_bounds_on_small_graphs() {
        assert_eq!(fink_bauer_bound(&Graph::complete(2)), Bound::Finite(1));
        assert_eq!(fink_bauer_bound(&Graph::cycle(4)), Bound::Finite(3));
        assert_eq!(fink_bauer_bound(&Graph::empty(5)), Bound::Infinite);

        assert_eq!(hartnell_rall_bound(&Graph::complete(3)), Bound::Finite(2));
        assert_eq!(hartnell_rall_bound(&Graph::complete(4)), Bound::Finite(3));
        assert_eq!(hartnell_rall_bound(&Graph::cycle(4)), Bound::Finite(3));
        assert_eq!(hartnell_rall_bound(&Graph::empty(1)), Bound::Infinite);
    }

    #[test]
    fn hartnell_rall_never_exceeds_fink_bauer() {
        for seed in 0..50 {
            let g = sample_gnp(10, 0.5, RandomSource::new(seed));
            match (hartnell_rall_bound(&g), fink_bauer_bound(&g)) {
                (Bound::Finite(hr), Bound::Finite(fb)) => assert!(hr <= fb),
                (Bound::Infinite, Bound::Infinite) => {}
                other => panic!("bounds disagree on finiteness: {other:?}"),
            }
        }
    }

    #[test]
    fn min_dom_count_cases() {
        assert_eq!(min_dom_count_bound(&Graph::complete(2)), MinDomCount::Bound(2));
        assert_eq!(min_dom_count_bound(&Graph::star(4)), MinDomCount::Bound(1));
        assert_eq!(min_dom_count_bound(&Graph::empty(4)), MinDomCount::Infinite);
        // C4: the diagonal minimum set {0, 2} leaves both outside vertices
        // with two dominators each, so no single edge removal kills it.
        assert_eq!(min_dom_count_bound(&Graph::cycle(4)), MinDomCount::Inapplicable);
    }

    #[test]
    fn directed_damage_examples() {
        // Triangle at r = 1: only D = {v}, with j = 1.
        let k3 = Graph::complete(3);
        let d = damage_directed(&k3, 0, 1, 1).unwrap();
        assert_eq!(d.z, damage_ratio(1, 1));
        assert_eq!(d.counts, vec![0, 1]);

        // Path u - w with isolated v: adding uv, the only dominating pair
        // holding v but not u is {v, w}, and u gains both as dominators.
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let d = damage_directed(&g, 0, 2, 2).unwrap();
        assert_eq!(d.z, damage_ratio(1, 2));
        assert_eq!(d.counts, vec![0, 0, 1]);

        // No qualifying set at all.
        let d = damage_directed(&Graph::empty(3), 0, 1, 1).unwrap();
        assert_eq!(d.z, damage_ratio(0, 1));
    }

    #[test]
    fn damage_argument_errors() {
        let g = Graph::complete(3);
        assert!(damage_directed(&g, 1, 1, 1).is_err());
        assert!(damage_directed(&g, 0, 3, 1).is_err());
        assert!(damage_directed(&g, 0, 1, 0).is_err());
        assert!(damage_directed(&g, 0, 1, 4).is_err());
    }

    #[test]
    fn split_partitions_damage() {
        let k3 = Graph::complete(3);
        let d = damage_directed(&k3, 0, 1, 1).unwrap();
        assert_eq!(d.split(0), (damage_ratio(1, 1), damage_ratio(0, 1)));
        assert_eq!(d.split(1), (damage_ratio(0, 1), damage_ratio(1, 1)));

        for seed in 0..20 {
            let g = sample_gnp(8, 0.4, RandomSource::new(seed));
            let r = gamma_exact(&g);
            let d = damage_directed(&g, 0, 1, r).unwrap();
            for l in 0..=r {
                let (light, heavy) = d.split(l);
                assert_eq!(light + heavy, d.z, "seed {seed}, l = {l}");
            }
            let (light, heavy) = d.split(0);
            assert_eq!(heavy, damage_ratio(0, 1));
            assert_eq!(light, d.z);
            let (light, heavy) = d.split(r);
            assert_eq!(light, damage_ratio(0, 1));
            assert_eq!(heavy, d.z);
        }
    }

    #[test]
    fn destroyed_count_cases() {
        let k2 = Graph::complete(2);
        let empty = PairSet::new();
        assert_eq!(y_destroyed(&k2, &empty, 1).unwrap(), 0);
        let bridge = PairSet::from_pairs([(0, 1)]).unwrap();
        assert_eq!(y_destroyed(&k2, &bridge, 1).unwrap(), 2);

        // Deleting non-edges changes nothing.
        let g = Graph::cycle(5);
        let non_edges = PairSet::from_pairs([(0, 2), (1, 3)]).unwrap();
        assert_eq!(y_destroyed(&g, &non_edges, 2).unwrap(), 0);
    }

    #[test]
    fn destroyed_never_exceeds_damage() {
        for seed in 0..40 {
            let n = 6 + (seed as usize % 3);
            let g = sample_gnp(n, 0.45, RandomSource::new(1000 + seed));
            // Random pair sets from a shuffled pair universe, edges or not.
            let universe = process_stream(n, RandomSource::new(2000 + seed));
            let take = 1 + (seed as usize % 4);
            let pairs = PairSet::from_pairs(universe[..take].iter().copied()).unwrap();
            for r in [gamma_exact(&g), (gamma_exact(&g) + 1).min(n)] {
                let y = y_destroyed(&g, &pairs, r).unwrap();
                let z = damage_of_pairs(&g, &pairs, r).unwrap();
                assert!(
                    Damage::from_integer(y as i128) <= z,
                    "seed {seed}, r {r}: Y = {y} > Z = {z}"
                );
            }
        }
    }

    #[test]
    fn single_pass_scan_matches_per_pair_damage() {
        for seed in 0..25 {
            let g = sample_gnp(9, 0.4, RandomSource::new(seed));
            if g.edge_count() == 0 {
                continue;
            }
            let r = gamma_exact(&g);
            let table = damage_table(&g, Some(r), 0, false).unwrap();
            for entry in &table.entries {
                let fwd = damage_directed(&g, entry.u, entry.v, r).unwrap();
                let bwd = damage_directed(&g, entry.v, entry.u, r).unwrap();
                assert_eq!(entry.forward, fwd, "seed {seed}");
                assert_eq!(entry.backward, bwd, "seed {seed}");
            }
        }
    }

    #[test]
    fn all_pairs_table_covers_non_edges() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let table = damage_table(&g, Some(2), 0, true).unwrap();
        assert_eq!(table.entries.len(), 3);
        let entry = table
            .entries
            .iter()
            .find(|e| (e.u, e.v) == (0, 2))
            .unwrap();
        assert_eq!(entry.forward.z, damage_ratio(1, 2));
    }

    #[test]
    fn bondage_exact_on_known_graphs() {
        assert_eq!(
            bondage_exact(&Graph::complete(2), None, true).b,
            Some(Bound::Finite(1))
        );
        assert_eq!(
            bondage_exact(&Graph::complete(4), None, true).b,
            Some(Bound::Finite(2))
        );
        let expected_cycle = [(4, 3), (5, 2), (6, 2), (7, 3), (8, 2), (9, 2)];
        for (n, b) in expected_cycle {
            assert_eq!(
                bondage_exact(&Graph::cycle(n), None, true).b,
                Some(Bound::Finite(b)),
                "C_{n}"
            );
        }
        assert_eq!(
            bondage_exact(&Graph::empty(3), None, true).b,
            Some(Bound::Infinite)
        );
    }

    #[test]
    fn prune_does_not_change_results() {
        for seed in 0..30 {
            let g = sample_gnp(7, 0.45, RandomSource::new(seed));
            let pruned = bondage_exact(&g, None, true);
            let plain = bondage_exact(&g, None, false);
            assert_eq!(pruned.b, plain.b, "seed {seed}");
            assert_eq!(pruned.b_gt, plain.b_gt, "seed {seed}");
        }
    }

    #[test]
    fn limit_exhaustion_reports_strict_bound() {
        let c4 = Graph::cycle(4); // b = 3
        let res = bondage_exact(&c4, Some(2), true);
        assert_eq!(res.b, None);
        assert_eq!(res.b_gt, Some(2));
    }

    #[test]
    fn certificate_cases() {
        // K2: the only edge damages both singletons fully, nothing certified.
        let res = certified_lower_bound(&Graph::complete(2), 1_000).unwrap();
        let cert = res.certificate.unwrap();
        assert_eq!(cert.certified, 0);
        assert_eq!(cert.x_gamma, 2);
        assert_eq!(cert.top_damages, vec!["2".to_string()]);

        // C6: X = 3, every edge has total damage 2, so one removal is safe.
        let res = certified_lower_bound(&Graph::cycle(6), 1_000).unwrap();
        assert_eq!(res.b_gt, Some(1));
        let cert = res.certificate.unwrap();
        assert_eq!(cert.x_gamma, 3);
        assert_eq!(cert.top_damages, vec!["2".to_string(), "2".to_string()]);
    }

    #[test]
    fn certification_is_sound_versus_exact() {
        for seed in 0..40 {
            let g = sample_gnp(7, 0.5, RandomSource::new(3000 + seed));
            if g.edge_count() == 0 {
                continue;
            }
            let exact = bondage_exact(&g, None, true);
            let cert = certified_lower_bound(&g, 1_000_000).unwrap();
            let b = exact.b.unwrap();
            if let Bound::Finite(b) = b {
                assert!(
                    cert.b_gt.unwrap() < b,
                    "seed {seed}: certified {} not below b = {b}",
                    cert.b_gt.unwrap()
                );
                for bound in [exact.fink_bauer, exact.hartnell_rall] {
                    assert!(Bound::Finite(b) <= bound, "seed {seed}");
                }
                if let MinDomCount::Bound(x) = exact.min_dom_count {
                    assert!(b <= x, "seed {seed}: b = {b} above min-set count {x}");
                }
            }
        }
    }

    #[test]
    fn scan_capacity_error() {
        let g = Graph::complete(8);
        assert!(matches!(
            certified_lower_bound(&g, 2),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn result_serialization_shapes() {
        let edgeless = bondage_exact(&Graph::empty(2), None, true);
        let json = serde_json::to_value(&edgeless).unwrap();
        assert_eq!(json["b"], serde_json::json!("infinity"));
        assert_eq!(json["min_dom_count"], serde_json::json!("infinity"));

        let k2 = bondage_exact(&Graph::complete(2), None, true);
        let json = serde_json::to_value(&k2).unwrap();
        assert_eq!(json["b"], serde_json::json!(1));
        assert_eq!(json["mode"], serde_json::json!("exact"));
        assert_eq!(json["min_dom_count"], serde_json::json!(2));
        assert!(json.get("b_gt").is_none());
    }
}
