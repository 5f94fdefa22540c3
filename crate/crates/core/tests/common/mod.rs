//! Naive reference implementations for the oracle-equivalence suites.
//!
//! Everything here works on explicit `u32` vertex masks (so `n <= 16` only)
//! and derives adjacency through `Graph::neighbors` alone — none of the
//! solver machinery under test is reused.

use bondlab::graph::Graph;

/// Closed-neighborhood masks `N[v]` as plain integers.
pub fn closed_masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= 16, "naive oracles are for tiny graphs");
    (0..g.n())
        .map(|v| {
            let mut mask = 1u32 << v;
            for u in g.neighbors(v) {
                mask |= 1 << u;
            }
            mask
        })
        .collect()
}

fn dominates(closed: &[u32], full: u32, set: u32) -> bool {
    let mut covered = 0u32;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        covered |= closed[v];
        rest &= rest - 1;
    }
    covered == full
}

/// Domination number by scanning all `2^n` vertex subsets.
pub fn naive_gamma(g: &Graph) -> usize {
    let closed = closed_masks(g);
    let full = (1u32 << g.n()) - 1;
    (0u32..1 << g.n())
        .filter(|&set| dominates(&closed, full, set))
        .map(|set| set.count_ones() as usize)
        .min()
        .expect("the full vertex set always dominates")
}

/// `X_k` by scanning all `2^n` vertex subsets.
pub fn naive_count(g: &Graph, k: usize) -> u64 {
    let closed = closed_masks(g);
    let full = (1u32 << g.n()) - 1;
    (0u32..1 << g.n())
        .filter(|&set| set.count_ones() as usize == k && dominates(&closed, full, set))
        .count() as u64
}

/// Bondage number by scanning edge subsets in increasing size: the smallest
/// number of edges whose removal raises the domination number. `None` for
/// edgeless graphs (where no removal can ever raise it).
pub fn naive_bondage(g: &Graph) -> Option<u64> {
    let edges = g.edges();
    let m = edges.len();
    if m == 0 {
        return None;
    }
    let gamma = naive_gamma(g);
    for size in 1..=m {
        for subset in 0u32..1 << m {
            if subset.count_ones() as usize != size {
                continue;
            }
            let kept: Vec<(usize, usize)> = edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| subset & (1 << i) == 0)
                .map(|(_, &e)| e)
                .collect();
            let reduced = Graph::from_edges(g.n(), kept).expect("edges came from g");
            if naive_gamma(&reduced) > gamma {
                return Some(size as u64);
            }
        }
    }
    unreachable!("removing every edge leaves an edgeless graph with gamma = n > gamma(g)")
}
