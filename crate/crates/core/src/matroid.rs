//! Immutable matroid values over small ground sets.
//!
//! A [`Matroid`] stores its basis family and, derived from it once at
//! construction, a full rank table with one byte per subset of the ground set.
//! Every other query (closure, circuits, flats, minors, duality) is answered
//! from the rank table. Derived families are memoised behind [`OnceLock`], so
//! values are cheap to clone and safe to share across threads.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::canonical::{self, CanonicalForm};
use crate::error::{Error, Result};
use crate::subset::{GroundSet, Subset};

struct Inner {
    ground: GroundSet,
    rank: usize,
    bases: Vec<Subset>,
    ranks: Box<[u8]>,
    circuits: OnceLock<Vec<Subset>>,
    flats: OnceLock<Vec<Subset>>,
    canonical: OnceLock<CanonicalForm>,
}

#[derive(Clone)]
pub struct Matroid(Arc<Inner>);

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.0.ground == other.0.ground && self.0.bases == other.0.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground", &self.0.ground)
            .field("rank", &self.0.rank)
            .field("bases", &self.0.bases.len())
            .finish()
    }
}

/// Independent sets are exactly the subsets of bases; rank of `X` is the size
/// of a largest independent subset of `X`.
fn rank_table_from_bases(n: usize, bases: &[Subset]) -> Vec<u8> {
    let size = 1usize << n;
    let mut indep = vec![false; size];
    for b in bases {
        indep[b.index()] = true;
    }
    for m in (1..size).rev() {
        if indep[m] {
            let mut rest = m;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                indep[m ^ bit] = true;
                rest ^= bit;
            }
        }
    }
    let mut ranks = vec![0u8; size];
    for m in 1..size {
        ranks[m] = if indep[m] {
            m.count_ones() as u8
        } else {
            let mut best = 0;
            let mut rest = m;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                best = best.max(ranks[m ^ bit]);
                rest ^= bit;
            }
            best
        };
    }
    ranks
}

/// Checks that `ranks` is a matroid rank function: normalised, unit-increasing
/// and locally submodular (which, with unit increase, is equivalent to
/// submodularity).
pub(crate) fn check_rank_table(n: usize, ranks: &[u8]) -> Result<()> {
    if ranks.len() != 1 << n {
        return Err(Error::NotAMatroid(format!(
            "rank table has {} entries, expected {}",
            ranks.len(),
            1usize << n
        )));
    }
    if ranks[0] != 0 {
        return Err(Error::NotAMatroid(
            "rank of the empty set is not zero".into(),
        ));
    }
    let full = (1usize << n) - 1;
    for x in 0..=full {
        let rx = ranks[x];
        let out = full & !x;
        let mut rest = out;
        while rest != 0 {
            let e = rest & rest.wrapping_neg();
            rest ^= e;
            let re = ranks[x | e];
            if re < rx || re > rx + 1 {
                return Err(Error::NotAMatroid(format!(
                    "rank is not unit-increasing at {:?} + {:?}",
                    Subset(x as u32),
                    Subset(e as u32)
                )));
            }
            let mut rest2 = rest;
            while rest2 != 0 {
                let f = rest2 & rest2.wrapping_neg();
                rest2 ^= f;
                let lhs = u16::from(ranks[x | e]) + u16::from(ranks[x | f]);
                if lhs < u16::from(ranks[x | e | f]) + u16::from(rx) {
                    return Err(Error::NotAMatroid(format!(
                        "submodularity fails at {:?} with {:?}, {:?}",
                        Subset(x as u32),
                        Subset(e as u32),
                        Subset(f as u32)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn bases_from_rank_table(n: usize, ranks: &[u8]) -> (usize, Vec<Subset>) {
    let r = ranks[(1usize << n) - 1] as usize;
    let bases = Subset::full(n)
        .k_subsets(r)
        .filter(|b| ranks[b.index()] as usize == r)
        .collect::<Vec<_>>();
    let mut bases = bases;
    bases.sort();
    (r, bases)
}

impl Matroid {
    fn from_parts(ground: GroundSet, rank: usize, bases: Vec<Subset>, ranks: Vec<u8>) -> Self {
        Matroid(Arc::new(Inner {
            ground,
            rank,
            bases,
            ranks: ranks.into_boxed_slice(),
            circuits: OnceLock::new(),
            flats: OnceLock::new(),
            canonical: OnceLock::new(),
        }))
    }

    /// Builds a matroid from its basis family, validating every axiom.
    pub fn from_bases(ground: GroundSet, bases: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let n = ground.len();
        let mut bases: Vec<Subset> = bases.into_iter().collect();
        bases.sort();
        bases.dedup();
        let Some(first) = bases.first() else {
            return Err(Error::NotAMatroid("empty basis family".into()));
        };
        let r = first.len();
        let full = ground.full();
        for b in &bases {
            if !b.is_subset(full) {
                return Err(Error::NotAMatroid(format!(
                    "basis {b:?} is not contained in the ground set"
                )));
            }
            if b.len() != r {
                return Err(Error::NotAMatroid(format!(
                    "bases have different sizes ({} and {})",
                    r,
                    b.len()
                )));
            }
        }
        let ranks = rank_table_from_bases(n, &bases);
        check_rank_table(n, &ranks)?;
        Ok(Matroid::from_parts(ground, r, bases, ranks))
    }

    /// Builds a matroid from bases given as label lists.
    pub fn from_basis_labels<S: AsRef<str>>(
        ground: GroundSet,
        bases: impl IntoIterator<Item = impl IntoIterator<Item = S>>,
    ) -> Result<Self> {
        let masks = bases
            .into_iter()
            .map(|b| ground.mask(b))
            .collect::<Result<Vec<_>>>()?;
        Matroid::from_bases(ground, masks)
    }

    /// Builds a matroid from a full rank table (`ranks[X]` for every mask `X`),
    /// validating the rank axioms.
    pub fn from_rank_table(ground: GroundSet, ranks: Vec<u8>) -> Result<Self> {
        check_rank_table(ground.len(), &ranks)?;
        Ok(Matroid::from_rank_table_unchecked(ground, ranks))
    }

    /// For rank tables derived from a matroid by operations known to preserve
    /// the axioms (minors, duals, relabelling).
    pub(crate) fn from_rank_table_unchecked(ground: GroundSet, ranks: Vec<u8>) -> Self {
        let (r, bases) = bases_from_rank_table(ground.len(), &ranks);
        Matroid::from_parts(ground, r, bases, ranks)
    }

    #[inline]
    pub fn ground(&self) -> &GroundSet {
        &self.0.ground
    }

    #[inline]
    pub fn labels(&self) -> &[String] {
        self.0.ground.labels()
    }

    #[inline]
    pub fn label(&self, i: usize) -> &str {
        self.ground().label(i)
    }

    pub fn len(&self) -> usize {
        self.0.ground.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.ground.is_empty()
    }

    #[inline]
    pub fn full(&self) -> Subset {
        self.0.ground.full()
    }

    /// Rank of the whole matroid.
    #[inline]
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    #[inline]
    pub fn corank(&self) -> usize {
        self.len() - self.0.rank
    }

    /// Bases, sorted by mask value.
    pub fn bases(&self) -> &[Subset] {
        &self.0.bases
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.0.ranks
    }

    #[inline]
    pub fn rank_of(&self, x: Subset) -> usize {
        self.0.ranks[x.index()] as usize
    }

    pub fn mask<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Subset> {
        self.0.ground.mask(labels)
    }

    pub fn names(&self, x: Subset) -> Vec<String> {
        self.0.ground.names(x)
    }

    pub fn is_basis(&self, x: Subset) -> bool {
        self.0.bases.binary_search(&x).is_ok()
    }

    #[inline]
    pub fn is_independent(&self, x: Subset) -> bool {
        self.rank_of(x) == x.len()
    }

    pub fn is_circuit(&self, x: Subset) -> bool {
        !x.is_empty()
            && self.rank_of(x) + 1 == x.len()
            && x.iter().all(|e| self.is_independent(x.without(e)))
    }

    pub fn closure(&self, x: Subset) -> Subset {
        let r = self.rank_of(x);
        let mut cl = x;
        for e in (self.full() - x).iter() {
            if self.rank_of(x.with(e)) == r {
                cl = cl.with(e);
            }
        }
        cl
    }

    pub fn is_flat(&self, x: Subset) -> bool {
        let r = self.rank_of(x);
        (self.full() - x)
            .iter()
            .all(|e| self.rank_of(x.with(e)) > r)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank_of(Subset::singleton(e)) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.rank_of(self.full().without(e)) < self.rank()
    }

    pub fn loops(&self) -> Subset {
        self.closure(Subset::EMPTY)
    }

    pub fn coloops(&self) -> Subset {
        Subset::from_indices((0..self.len()).filter(|&e| self.is_coloop(e)))
    }

    /// Minimal dependent sets, sorted by size then mask.
    pub fn circuits(&self) -> &[Subset] {
        self.0.circuits.get_or_init(|| {
            let mut out: Vec<Subset> = self
                .full()
                .subsets()
                .filter(|&x| self.is_circuit(x))
                .collect();
            out.sort_by_key(|c| (c.len(), c.0));
            out
        })
    }

    /// Complements of hyperplanes, sorted by size then mask.
    pub fn cocircuits(&self) -> Vec<Subset> {
        let n = self.len();
        let mut out: Vec<Subset> = self
            .hyperplanes()
            .into_iter()
            .map(|h| h.complement(n))
            .collect();
        out.sort_by_key(|c| (c.len(), c.0));
        out
    }

    /// All flats, sorted by rank then mask.
    pub fn flats(&self) -> &[Subset] {
        self.0.flats.get_or_init(|| {
            let mut out: Vec<Subset> = self.full().subsets().filter(|&x| self.is_flat(x)).collect();
            out.sort_by_key(|f| (self.rank_of(*f), f.0));
            out
        })
    }

    pub fn flats_of_rank(&self, k: usize) -> impl Iterator<Item = Subset> + '_ {
        self.flats()
            .iter()
            .copied()
            .filter(move |&f| self.rank_of(f) == k)
    }

    pub fn hyperplanes(&self) -> Vec<Subset> {
        match self.rank() {
            0 => Vec::new(),
            r => self.flats_of_rank(r - 1).collect(),
        }
    }

    /// Rank-2 flats.
    pub fn lines(&self) -> Vec<Subset> {
        self.flats_of_rank(2).collect()
    }

    /// 3-element circuits.
    pub fn triangles(&self) -> Vec<Subset> {
        self.circuits()
            .iter()
            .copied()
            .filter(|c| c.len() == 3)
            .collect()
    }

    /// 3-element cocircuits.
    pub fn triads(&self) -> Vec<Subset> {
        self.cocircuits()
            .into_iter()
            .filter(|c| c.len() == 3)
            .collect()
    }

    /// Number of rank-1 flats contained in `x`.
    pub fn point_count(&self, x: Subset) -> usize {
        let loops = self.loops();
        let mut seen = Subset::EMPTY;
        let mut count = 0;
        for e in (x - loops).iter() {
            if !seen.contains(e) {
                seen = seen | self.closure(Subset::singleton(e));
                count += 1;
            }
        }
        count
    }

    pub fn is_simple(&self) -> bool {
        self.loops().is_empty()
            && (0..self.len()).all(|e| self.closure(Subset::singleton(e)) == Subset::singleton(e))
    }

    pub fn dual(&self) -> Matroid {
        let n = self.len();
        let full = self.full();
        let r = self.rank();
        let ranks: Vec<u8> = (0..1u32 << n)
            .map(|x| {
                let x = Subset(x);
                (x.len() + self.rank_of(full - x) - r) as u8
            })
            .collect();
        Matroid::from_rank_table_unchecked(self.ground().clone(), ranks)
    }

    /// `M / contract \ delete`; the sets must be disjoint and leave at least
    /// one element.
    pub fn minor(&self, contract: Subset, delete: Subset) -> Result<Matroid> {
        if !contract.is_disjoint(delete) {
            return Err(Error::DisjointnessViolated);
        }
        let full = self.full();
        let keep = full - contract - delete;
        if keep.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        Ok(self.minor_unchecked(contract, keep))
    }

    /// Contract `contract` and restrict to `keep` (disjoint, nonempty).
    pub(crate) fn minor_unchecked(&self, contract: Subset, keep: Subset) -> Matroid {
        let ground = self.ground().restrict(keep);
        let ranks = minor_rank_table(self.rank_table(), contract, keep);
        Matroid::from_rank_table_unchecked(ground, ranks)
    }

    pub fn delete(&self, x: Subset) -> Result<Matroid> {
        self.minor(Subset::EMPTY, x)
    }

    pub fn contract(&self, x: Subset) -> Result<Matroid> {
        self.minor(x, Subset::EMPTY)
    }

    pub fn restrict(&self, x: Subset) -> Result<Matroid> {
        self.minor(Subset::EMPTY, self.full() - x)
    }

    /// Same matroid with the element at position `i` moved to position
    /// `perm[i]` and labelled `labels[perm[i]]`.
    pub fn permuted(&self, perm: &[usize], labels: GroundSet) -> Result<Matroid> {
        if perm.len() != self.len() || labels.len() != self.len() {
            return Err(Error::BadParameters("permutation length mismatch".into()));
        }
        let mut seen = Subset::EMPTY;
        for &p in perm {
            if p >= self.len() || seen.contains(p) {
                return Err(Error::BadParameters("not a permutation".into()));
            }
            seen = seen.with(p);
        }
        let bases = self.bases().iter().map(|b| map_subset(*b, perm));
        let mut bases: Vec<Subset> = bases.collect();
        bases.sort();
        let n = self.len();
        let mut ranks = vec![0u8; 1 << n];
        for x in Subset::full(n).subsets() {
            ranks[map_subset(x, perm).index()] = self.rank_of(x) as u8;
        }
        Ok(Matroid::from_parts(labels, self.rank(), bases, ranks))
    }

    /// Same matroid with new labels (positions unchanged).
    pub fn relabeled(&self, labels: GroundSet) -> Result<Matroid> {
        let id: Vec<usize> = (0..self.len()).collect();
        self.permuted(&id, labels)
    }

    /// Deletes loops and all but the lexicographically least label of each
    /// parallel class. Returns the simple matroid and, for every non-loop
    /// label of `self`, the label representing its class.
    pub fn simplify(&self) -> Result<(Matroid, Vec<(String, String)>)> {
        let loops = self.loops();
        if loops == self.full() {
            return Err(Error::AllLoops);
        }
        let mut keep = Subset::EMPTY;
        let mut map = Vec::new();
        let mut seen = Subset::EMPTY;
        for e in (self.full() - loops).iter() {
            if seen.contains(e) {
                continue;
            }
            let class = self.closure(Subset::singleton(e)) - loops;
            seen = seen | class;
            let rep = class
                .iter()
                .min_by(|&a, &b| self.labels()[a].cmp(&self.labels()[b]))
                .expect("nonempty class");
            keep = keep.with(rep);
            for x in class.iter() {
                map.push((self.labels()[x].clone(), self.labels()[rep].clone()));
            }
        }
        map.sort();
        Ok((self.restrict(keep)?, map))
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        self.0
            .canonical
            .get_or_init(|| canonical::canonical_form(self))
    }

    /// A bijection (position in `self` to position in `other`) carrying bases
    /// onto bases, decided by comparing canonical forms.
    pub fn isomorphism(&self, other: &Matroid) -> Option<Vec<usize>> {
        let a = self.canonical_form();
        let b = other.canonical_form();
        if a.bytes() != b.bytes() {
            return None;
        }
        // a.labeling[i] and b.labeling[i] occupy canonical position i in both.
        let mut map = vec![0; self.len()];
        for (pa, pb) in a.labeling().iter().zip(b.labeling()) {
            map[*pa] = *pb;
        }
        Some(map)
    }

    pub fn is_isomorphic(&self, other: &Matroid) -> bool {
        self.isomorphism(other).is_some()
    }

    pub fn to_document(&self, name: &str) -> MatroidDocument {
        let mut bases: Vec<Vec<usize>> = self.bases().iter().map(|b| b.iter().collect()).collect();
        bases.sort();
        MatroidDocument {
            name: name.to_string(),
            ground: self.labels().to_vec(),
            rank: self.rank(),
            bases: bases
                .into_iter()
                .map(|b| b.into_iter().map(|i| self.labels()[i].clone()).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &MatroidDocument) -> Result<Matroid> {
        let ground = GroundSet::new(doc.ground.iter().cloned())?;
        let m = Matroid::from_basis_labels(ground, doc.bases.iter())?;
        if m.rank() != doc.rank {
            return Err(Error::NotAMatroid(format!(
                "declared rank {} but bases have size {}",
                doc.rank,
                m.rank()
            )));
        }
        if m.bases().len() != doc.bases.len() {
            return Err(Error::NotAMatroid("repeated basis".into()));
        }
        Ok(m)
    }
}

/// `ranks'[Y] = r(Y' ∪ C) - r(C)` where `Y'` is `Y` re-indexed into the host.
pub(crate) fn minor_rank_table(ranks: &[u8], contract: Subset, keep: Subset) -> Vec<u8> {
    let positions: Vec<u32> = keep.iter().map(|i| 1u32 << i).collect();
    let m = positions.len();
    let rc = ranks[contract.index()];
    let mut host = vec![0u32; 1 << m];
    let mut out = vec![0u8; 1 << m];
    host[0] = contract.0;
    out[0] = 0;
    for y in 1usize..(1 << m) {
        let low = y.trailing_zeros() as usize;
        host[y] = host[y & (y - 1)] | positions[low];
        out[y] = ranks[host[y] as usize] - rc;
    }
    out
}

#[inline]
pub(crate) fn map_subset(x: Subset, perm: &[usize]) -> Subset {
    let mut out = Subset::EMPTY;
    for i in x.iter() {
        out = out.with(perm[i]);
    }
    out
}

/// JSON matroid document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidDocument {
    pub name: String,
    pub ground: Vec<String>,
    pub rank: usize,
    pub bases: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(r: usize, n: usize) -> Matroid {
        let g = GroundSet::letters(n).unwrap();
        Matroid::from_bases(g, Subset::full(n).k_subsets(r)).unwrap()
    }

    #[test]
    fn uniform_ranks() {
        let u = uniform(2, 5);
        assert_eq!(u.rank_of(u.mask(["a", "b", "c"]).unwrap()), 2);
        assert_eq!(u.rank_of(Subset::EMPTY), 0);
        assert_eq!(u.closure(u.mask(["a"]).unwrap()), u.mask(["a"]).unwrap());
        assert_eq!(u.circuits().len(), 10);
        assert!(u.circuits().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn closure_of_empty_is_loops() {
        let g = GroundSet::letters(3).unwrap();
        let m = Matroid::from_basis_labels(g, [["a"], ["b"]]).unwrap();
        assert_eq!(m.loops(), m.mask(["c"]).unwrap());
        assert_eq!(m.closure(Subset::EMPTY), m.mask(["c"]).unwrap());
    }

    #[test]
    fn rejects_non_matroid() {
        let g = GroundSet::letters(4).unwrap();
        // {a,b} and {c,d} alone violate basis exchange.
        let err = Matroid::from_basis_labels(g, [["a", "b"], ["c", "d"]]);
        assert!(matches!(err, Err(Error::NotAMatroid(_))));
    }

    #[test]
    fn rejects_mixed_sizes() {
        let g = GroundSet::letters(3).unwrap();
        let err = Matroid::from_basis_labels(g, vec![vec!["a", "b"], vec!["c"]]);
        assert!(matches!(err, Err(Error::NotAMatroid(_))));
    }

    #[test]
    fn dual_of_uniform() {
        let u = uniform(2, 5);
        let d = u.dual();
        assert_eq!(d, uniform(3, 5));
        assert_eq!(d.dual(), u);
    }

    #[test]
    fn delete_everything_is_an_error() {
        let u = uniform(2, 5);
        assert!(matches!(u.delete(u.full()), Err(Error::EmptyGroundSet)));
        assert!(matches!(
            u.minor(Subset(1), Subset(1)),
            Err(Error::DisjointnessViolated)
        ));
    }

    #[test]
    fn simplify_drops_loop_and_parallel_copies() {
        let g = GroundSet::new(["p", "a", "l", "b"]).unwrap();
        // a and p parallel, l a loop, b independent of a.
        let m = Matroid::from_basis_labels(g, [["a", "b"], ["p", "b"]]).unwrap();
        let (s, map) = m.simplify().unwrap();
        assert_eq!(s.labels(), &["a".to_string(), "b".to_string()]);
        assert!(s.is_simple());
        assert!(map.contains(&("p".to_string(), "a".to_string())));
        assert!(!map.iter().any(|(x, _)| x == "l"));

        let (same, _) = s.simplify().unwrap();
        assert_eq!(same, s);
    }

    #[test]
    fn simplify_all_loops() {
        let g = GroundSet::letters(2).unwrap();
        let m = Matroid::from_bases(g, [Subset::EMPTY]).unwrap();
        assert!(matches!(m.simplify(), Err(Error::AllLoops)));
    }

    #[test]
    fn document_roundtrip_is_byte_stable() {
        let u = uniform(2, 4);
        let doc = u.to_document("U24");
        let s1 = serde_json::to_string(&doc).unwrap();
        let back = Matroid::from_document(&serde_json::from_str(&s1).unwrap()).unwrap();
        assert_eq!(back, u);
        assert_eq!(serde_json::to_string(&back.to_document("U24")).unwrap(), s1);
    }

    #[test]
    fn document_with_wrong_rank_rejected() {
        let mut doc = uniform(2, 4).to_document("x");
        doc.rank = 3;
        assert!(Matroid::from_document(&doc).is_err());
    }
}
