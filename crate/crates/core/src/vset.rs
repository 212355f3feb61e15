//! Bitset of vertex ids. Every graph in this crate has at most 64 vertices,
//! so a set of vertices is a single machine word.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Vertex identifier. Vertices of a graph on `n` vertices are `0..n`.
pub type Vertex = u32;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: Vertex) -> bool {
        (v as usize) < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: Vertex) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: Vertex) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element.
    pub fn first(self) -> Option<Vertex> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros())
        }
    }

    /// Elements in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted element lists.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// All subsets of `self` with exactly `r` elements, in lexicographic order
    /// of their sorted element lists.
    pub fn subsets(self, r: usize) -> Subsets {
        Subsets::new(self.to_vec(), r)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Lexicographic enumeration of r-combinations of a sorted pool.
pub struct Subsets {
    pool: Vec<Vertex>,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(pool: Vec<Vertex>, r: usize) -> Self {
        let done = r > pool.len();
        Subsets {
            idx: (0..r).collect(),
            pool,
            done,
        }
    }
}

impl Iterator for Subsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if self.done {
            return None;
        }
        let out: VertexSet = self.idx.iter().map(|&i| self.pool[i]).collect();
        let r = self.idx.len();
        let n = self.pool.len();
        // advance to the next combination
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - r + i {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient as f64 (exact for the small arguments used here).
pub fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    let mut acc = 1.0f64;
    for i in 0..r {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
