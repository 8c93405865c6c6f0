//! Bit-level subsets of a ground set of at most [`MAX_ELEMENTS`] elements.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use crate::error::{Error, Result};

/// Hard cap on ground-set size; every subset fits one machine word and a full
/// rank table has at most 2^16 entries.
pub const MAX_ELEMENTS: usize = 16;

/// A subset of a ground set, bit `i` standing for the element at position `i`.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        Subset(((1u64 << n) - 1) as u32)
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    #[inline]
    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// Complement relative to a ground set of size `n`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0) & Subset::full(n)
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> Submasks {
        Submasks {
            universe: self.0,
            next: Some(0),
        }
    }

    /// Compares sorted element lists lexicographically (a proper prefix comes
    /// first).
    pub fn lex_cmp(self, other: Subset) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// All `k`-element subsets of `self`, lexicographic by element list.
    pub fn k_subsets(self, k: usize) -> KSubsets {
        let elems: Vec<usize> = self.iter().collect();
        KSubsets::new(elems, k)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for Subset {
    type Output = Subset;
    #[inline]
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    #[inline]
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl BitXor for Subset {
    type Output = Subset;
    #[inline]
    fn bitxor(self, rhs: Subset) -> Subset {
        Subset(self.0 ^ rhs.0)
    }
}

impl Sub for Subset {
    type Output = Subset;
    #[inline]
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl Not for Subset {
    type Output = Subset;
    #[inline]
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

pub struct Submasks {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = Subset;
    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            Some((cur.wrapping_sub(self.universe)) & self.universe)
        };
        Some(Subset(cur))
    }
}

/// `k`-subsets of a fixed list of elements; positions advance like an odometer
/// on the last index first, so the order is lexicographic by position list.
pub struct KSubsets {
    elems: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl KSubsets {
    fn new(elems: Vec<usize>, k: usize) -> Self {
        let done = k > elems.len();
        KSubsets {
            idx: (0..k).collect(),
            elems,
            done,
        }
    }
}

impl Iterator for KSubsets {
    type Item = Subset;
    fn next(&mut self) -> Option<Subset> {
        if self.done {
            return None;
        }
        let out = Subset::from_indices(self.idx.iter().map(|&i| self.elems[i]));
        let k = self.idx.len();
        let n = self.elems.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Ordered, pairwise-distinct element labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_ELEMENTS {
            return Err(Error::GroundSetSize {
                got: labels.len(),
                max: MAX_ELEMENTS,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels })
    }

    /// Ground set `prefix0, prefix1, ...` of size `n`.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self> {
        let width = if n > 10 { 2 } else { 1 };
        GroundSet::new((0..n).map(|i| format!("{prefix}{i:0width$}")))
    }

    /// Ground set `a, b, c, ...` of size `n`.
    pub fn letters(n: usize) -> Result<Self> {
        GroundSet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn mask<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Subset> {
        labels
            .into_iter()
            .try_fold(Subset::EMPTY, |m, l| Ok(m.with(self.index_of(l.as_ref())?)))
    }

    pub fn names(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Labels of the elements in `keep`, in ground order.
    pub fn restrict(&self, keep: Subset) -> GroundSet {
        GroundSet {
            labels: self.names(keep),
        }
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.labels).finish()
    }
}

/// Re-index `mask` after the elements of `removed` are dropped from the ground
/// set (surviving elements keep their relative order).
pub fn compress(mask: Subset, removed: Subset) -> Subset {
    let mut out = 0u32;
    let mut pos = 0;
    let mut rest = !removed.0;
    let mut i = 0;
    while rest != 0 && i < 32 {
        if rest & 1 == 1 {
            if mask.contains(i) {
                out |= 1 << pos;
            }
            pos += 1;
        }
        rest >>= 1;
        i += 1;
    }
    Subset(out)
}

/// Inverse of [`compress`] for a ground set of size `n`.
pub fn expand(mask: Subset, removed: Subset, n: usize) -> Subset {
    let mut out = Subset::EMPTY;
    let mut pos = 0;
    for i in 0..n {
        if !removed.contains(i) {
            if mask.contains(pos) {
                out = out.with(i);
            }
            pos += 1;
        }
    }
    out
}
