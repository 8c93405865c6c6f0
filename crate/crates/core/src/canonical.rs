//! Canonical forms and isomorphism testing.
//!
//! Elements are first partitioned by label-independent invariants, then the
//! partition is refined against the circuit hypergraph until it is equitable.
//! Remaining ties are broken by individualising elements one at a time; each
//! leaf of that search tree is a full ordering of the ground set, and the
//! canonical form is the lexicographically least sorted basis encoding over
//! all leaves. Automorphisms discovered at equal leaves prune sibling branches
//! that lie in the same orbit.

use crate::matroid::Matroid;
use crate::subset::Subset;

/// Canonical byte string plus the element ordering that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
    labeling: Vec<usize>,
}

impl CanonicalForm {
    /// Equal iff the matroids are isomorphic.
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// `labeling()[i]` is the element placed at canonical position `i`.
    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-element invariant: loop/coloop status, parallel-class size, number of
/// triangles and triads through the element, and the sizes of all circuits
/// through it.
pub fn element_invariants(m: &Matroid) -> Vec<u64> {
    let n = m.len();
    let triads = m.triads();
    let mut by_size = vec![vec![0u64; n.max(3) + 1]; n];
    for c in m.circuits() {
        for e in c.iter() {
            by_size[e][c.len()] += 1;
        }
    }
    (0..n)
        .map(|e| {
            let parallel = if m.is_loop(e) {
                0
            } else {
                (m.closure(Subset::singleton(e)) - m.loops()).len() as u64
            };
            let tri_count = by_size[e][3];
            let triad_count = triads.iter().filter(|t| t.contains(e)).count() as u64;
            let mut h = mix(0, m.is_loop(e) as u64);
            h = mix(h, m.is_coloop(e) as u64);
            h = mix(h, parallel);
            h = mix(h, tri_count);
            h = mix(h, triad_count);
            for &c in &by_size[e] {
                h = mix(h, c);
            }
            h
        })
        .collect()
}

fn circuits_by_element(m: &Matroid) -> Vec<Vec<Subset>> {
    let mut out = vec![Vec::new(); m.len()];
    for &c in m.circuits() {
        for e in c.iter() {
            out[e].push(c);
        }
    }
    out
}

fn initial_cells(n: usize, inv: &[u64]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| (inv[e], e));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for e in order {
        match cells.last_mut() {
            Some(cell) if inv[cell[0]] == inv[e] => cell.push(e),
            _ => cells.push(vec![e]),
        }
    }
    cells
}

/// Splits cells until every element of a cell sees the same multiset of
/// (circuit size, cells of the other circuit members).
fn refine(cells: &mut Vec<Vec<usize>>, by_elem: &[Vec<Subset>], n: usize) {
    let mut cell_of = vec![0usize; n];
    let mut scratch: Vec<usize> = Vec::with_capacity(n);
    loop {
        for (i, cell) in cells.iter().enumerate() {
            for &e in cell {
                cell_of[e] = i;
            }
        }
        let mut changed = false;
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(u64, usize)> = cell
                .iter()
                .map(|&e| {
                    let mut keys: Vec<u64> = by_elem[e]
                        .iter()
                        .map(|c| {
                            scratch.clear();
                            scratch.extend(c.without(e).iter().map(|f| cell_of[f]));
                            scratch.sort_unstable();
                            scratch
                                .iter()
                                .fold(mix(0, c.len() as u64), |h, &x| mix(h, x as u64))
                        })
                        .collect();
                    keys.sort_unstable();
                    (keys.iter().fold(0u64, |h, &k| mix(h, k)), e)
                })
                .collect();
            sigs.sort_unstable();
            let before = next.len();
            let mut prev = None;
            for (sig, e) in sigs {
                if prev == Some(sig) {
                    next.last_mut().unwrap().push(e);
                } else {
                    next.push(vec![e]);
                    prev = Some(sig);
                }
            }
            if next.len() - before > 1 {
                changed = true;
            }
        }
        *cells = next;
        if !changed {
            return;
        }
    }
}

struct Search<'a> {
    m: &'a Matroid,
    by_elem: Vec<Vec<Subset>>,
    best: Option<(Vec<u32>, Vec<usize>)>,
    first: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

const MAX_GENERATORS: usize = 256;

impl Search<'_> {
    fn encode(&self, labeling: &[usize]) -> Vec<u32> {
        let mut pos = vec![0usize; labeling.len()];
        for (i, &e) in labeling.iter().enumerate() {
            pos[e] = i;
        }
        let mut enc: Vec<u32> = self
            .m
            .bases()
            .iter()
            .map(|b| b.iter().fold(0u32, |acc, e| acc | 1 << pos[e]))
            .collect();
        enc.sort_unstable();
        enc
    }

    fn record_automorphism(&mut self, reference: &[usize], labeling: &[usize]) {
        let n = labeling.len();
        let mut gamma = vec![0usize; n];
        for i in 0..n {
            gamma[labeling[i]] = reference[i];
        }
        if gamma.iter().enumerate().any(|(i, &g)| i != g)
            && self.automorphisms.len() < MAX_GENERATORS
            && !self.automorphisms.contains(&gamma)
        {
            self.automorphisms.push(gamma);
        }
    }

    fn leaf(&mut self, labeling: Vec<usize>) {
        let enc = self.encode(&labeling);
        if let Some((first_enc, first_lab)) = &self.first {
            if *first_enc == enc {
                let first_lab = first_lab.clone();
                self.record_automorphism(&first_lab, &labeling);
            }
        } else {
            self.first = Some((enc.clone(), labeling.clone()));
        }
        match &self.best {
            None => self.best = Some((enc, labeling)),
            Some((best_enc, best_lab)) => {
                if enc < *best_enc {
                    self.best = Some((enc, labeling));
                } else if enc == *best_enc {
                    let best_lab = best_lab.clone();
                    self.record_automorphism(&best_lab, &labeling);
                }
            }
        }
    }

    fn same_orbit(&self, fixed: &[usize], a: usize, b: usize) -> bool {
        let n = self.m.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.automorphisms {
            if fixed.iter().any(|&f| g[f] != f) {
                continue;
            }
            for (x, &y) in g.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        find(&mut parent, a) == find(&mut parent, b)
    }

    fn visit(&mut self, mut cells: Vec<Vec<usize>>, fixed: &mut Vec<usize>) {
        refine(&mut cells, &self.by_elem, self.m.len());
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let labeling = cells.into_iter().map(|c| c[0]).collect();
            self.leaf(labeling);
            return;
        };
        let members = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &e in &members {
            if explored.iter().any(|&x| self.same_orbit(fixed, x, e)) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend(cells[..target].iter().cloned());
            child.push(vec![e]);
            child.push(members.iter().copied().filter(|&x| x != e).collect());
            child.extend(cells[target + 1..].iter().cloned());
            fixed.push(e);
            self.visit(child, fixed);
            fixed.pop();
            explored.push(e);
        }
    }
}

pub fn canonical_form(m: &Matroid) -> CanonicalForm {
    let n = m.len();
    let inv = element_invariants(m);
    let mut search = Search {
        m,
        by_elem: circuits_by_element(m),
        best: None,
        first: None,
        automorphisms: Vec::new(),
    };
    search.visit(initial_cells(n, &inv), &mut Vec::new());
    let (enc, labeling) = search.best.expect("search reaches at least one leaf");
    let mut bytes = Vec::with_capacity(4 + 2 * enc.len());
    bytes.push(n as u8);
    bytes.push(m.rank() as u8);
    bytes.extend_from_slice(&(enc.len() as u16).to_be_bytes());
    for b in enc {
        bytes.extend_from_slice(&(b as u16).to_be_bytes());
    }
    CanonicalForm { bytes, labeling }
}

/// Cheap isomorphism invariant used to reject candidates before a full test:
/// size, rank, basis count and the circuit-size histogram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub n: usize,
    pub rank: usize,
    pub bases: usize,
    pub circuit_sizes: Vec<usize>,
}

impl Fingerprint {
    pub fn of(m: &Matroid) -> Self {
        let mut circuit_sizes = vec![0; m.len() + 2];
        for c in m.circuits() {
            circuit_sizes[c.len()] += 1;
        }
        Fingerprint {
            n: m.len(),
            rank: m.rank(),
            bases: m.bases().len(),
            circuit_sizes,
        }
    }
}

/// Direct backtracking isomorphism search: extends a partial map one element
/// at a time, checking rank equality on every subset of the mapped elements
/// that contains the newest one. Returns `map[i]` = image of element `i`.
pub fn find_isomorphism(a: &Matroid, b: &Matroid) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() || a.rank() != b.rank() || a.bases().len() != b.bases().len() {
        return None;
    }
    let ia = element_invariants(a);
    let ib = element_invariants(b);
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let freq = |x: u64| sa.iter().filter(|&&y| y == x).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| (freq(ia[e]), ia[e], e));

    let mut amask = vec![0u32; 1 << n];
    let mut bmask = vec![0u32; 1 << n];
    let mut map = vec![usize::MAX; n];
    let ctx = IsoCtx {
        ra: a.rank_table(),
        rb: b.rank_table(),
        ia: &ia,
        ib: &ib,
        order: &order,
    };
    if ctx.extend(0, Subset::EMPTY, &mut amask, &mut bmask, &mut map) {
        Some(map)
    } else {
        None
    }
}

struct IsoCtx<'a> {
    ra: &'a [u8],
    rb: &'a [u8],
    ia: &'a [u64],
    ib: &'a [u64],
    order: &'a [usize],
}

impl IsoCtx<'_> {
    fn extend(
        &self,
        depth: usize,
        used: Subset,
        amask: &mut [u32],
        bmask: &mut [u32],
        map: &mut [usize],
    ) -> bool {
        let n = self.order.len();
        if depth == n {
            return true;
        }
        let x = self.order[depth];
        let half = 1usize << depth;
        for y in 0..n {
            if used.contains(y) || self.ib[y] != self.ia[x] {
                continue;
            }
            let ok = (0..half).all(|s| {
                let am = amask[s] | 1 << x;
                let bm = bmask[s] | 1 << y;
                amask[s + half] = am;
                bmask[s + half] = bm;
                self.ra[am as usize] == self.rb[bm as usize]
            });
            if ok {
                map[x] = y;
                if self.extend(depth + 1, used.with(y), amask, bmask, map) {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::GroundSet;

    fn uniform(r: usize, n: usize) -> Matroid {
        Matroid::from_bases(GroundSet::letters(n).unwrap(), Subset::full(n).k_subsets(r)).unwrap()
    }

    #[test]
    fn uniform_duals_share_form() {
        assert_eq!(
            uniform(2, 5).dual().canonical_form().bytes(),
            uniform(3, 5).canonical_form().bytes()
        );
        assert_ne!(
            uniform(2, 5).canonical_form().bytes(),
            uniform(3, 5).canonical_form().bytes()
        );
    }

    #[test]
    fn isomorphism_maps_bases_to_bases() {
        let a = uniform(2, 4);
        let g = GroundSet::new(["w", "x", "y", "z"]).unwrap();
        let b = a.permuted(&[2, 0, 3, 1], g).unwrap();
        let map = a.isomorphism(&b).unwrap();
        for base in a.bases() {
            let img = crate::matroid::map_subset(*base, &map);
            assert!(b.is_basis(img));
        }
        assert!(find_isomorphism(&a, &b).is_some());
    }
}
