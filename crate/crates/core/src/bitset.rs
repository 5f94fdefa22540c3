//! Fixed-width bitsets over vertex indices.
//!
//! `VertexSet` is the public set type used for dominating sets and vertex
//! masks. Hot solver loops operate on raw `&[u64]` word slices via the free
//! helpers at the bottom of this module.

pub(crate) const WORD_BITS: usize = 64;

/// Number of 64-bit words needed to hold `n` bits.
#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// A set of vertices drawn from `0..capacity`, stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    capacity: usize,
    words: Vec<u64>,
}

impl VertexSet {
    /// Empty set over the vertex range `0..capacity`.
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            capacity,
            words: vec![0; words_for(capacity)],
        }
    }

    /// Set containing every vertex in `0..capacity`.
    pub fn full(capacity: usize) -> Self {
        let mut set = VertexSet::new(capacity);
        for w in 0..set.words.len() {
            set.words[w] = !0;
        }
        set.trim_tail();
        set
    }

    /// Build a set from an iterator of members.
    ///
    /// # Panics
    /// Panics if a member is `>= capacity`.
    pub fn from_members(capacity: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut set = VertexSet::new(capacity);
        for v in members {
            set.insert(v);
        }
        set
    }

    pub(crate) fn from_words(capacity: usize, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), words_for(capacity));
        VertexSet {
            capacity,
            words: words.to_vec(),
        }
    }

    /// Vertex range bound; members are always `< capacity()`.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.capacity, "vertex {v} out of range");
        self.words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.capacity, "vertex {v} out of range");
        self.words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Whether the set contains all of `0..capacity`.
    pub fn is_full(&self) -> bool {
        self.len() == self.capacity
    }

    /// In-place union with another set of the same capacity.
    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.capacity, other.capacity, "capacity mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Size of the intersection with another set of the same capacity.
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        assert_eq!(self.capacity, other.capacity, "capacity mismatch");
        and_count(&self.words, &other.words)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Members collected into a vector, in increasing order.
    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The set encoded as a lowercase hex integer (bit `v` set iff vertex `v`
    /// is a member); the empty set prints as `"0"`.
    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        for &w in self.words.iter().rev() {
            if out.is_empty() {
                if w != 0 {
                    out = format!("{w:x}");
                }
            } else {
                out.push_str(&format!("{w:016x}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Clear any bits at positions `>= capacity` in the last word.
    fn trim_tail(&mut self) {
        let tail = self.capacity % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1 << tail) - 1;
            }
        }
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// ---------------------------------------------------------------------------
// Raw word-slice helpers for solver hot paths.
// ---------------------------------------------------------------------------

/// Popcount of `a & b`.
#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

/// Popcount of `a`.
#[inline]
pub(crate) fn count(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

/// Whether any bit of `a & !b` is set (i.e. `a` is not a subset of `b`).
#[inline]
pub(crate) fn any_and_not(a: &[u64], b: &[u64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).any(|(x, y)| x & !y != 0)
}

/// Test a single bit.
#[inline]
pub(crate) fn test_bit(words: &[u64], v: usize) -> bool {
    words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
}

/// Set a single bit.
#[inline]
pub(crate) fn set_bit(words: &mut [u64], v: usize) {
    words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
}

/// Clear a single bit.
#[inline]
pub(crate) fn clear_bit(words: &mut [u64], v: usize) {
    words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
}

/// Iterate indices of set bits in increasing order.
#[inline]
pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut bits = w;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD_BITS + b)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_contains() {
        let mut s = VertexSet::new(100);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(63);
        s.insert(64);
        s.insert(99);
        assert_eq!(s.len(), 4);
        assert!(s.contains(0) && s.contains(63) && s.contains(64) && s.contains(99));
        assert!(!s.contains(50));
        s.remove(63);
        assert!(!s.contains(63));
        assert_eq!(s.members(), vec![0, 64, 99]);
    }

    #[test]
    fn full_respects_capacity() {
        for n in [1, 63, 64, 65, 130] {
            let s = VertexSet::full(n);
            assert_eq!(s.len(), n);
            assert!(s.is_full());
        }
    }

    #[test]
    fn hex_rendering() {
        let mut s = VertexSet::new(70);
        assert_eq!(s.to_hex(), "0");
        s.insert(0);
        s.insert(4);
        assert_eq!(s.to_hex(), "11");
        s.insert(68);
        assert_eq!(s.to_hex(), "100000000000000011");
    }

    #[test]
    fn union_and_intersection() {
        let a = VertexSet::from_members(10, [1, 2, 3]);
        let b = VertexSet::from_members(10, [3, 4]);
        assert_eq!(a.intersection_len(&b), 1);
        let mut c = a.clone();
        c.union_with(&b);
        assert_eq!(c.members(), vec![1, 2, 3, 4]);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn insert_out_of_range_panics() {
        VertexSet::new(5).insert(5);
    }
}
