//! Modular sets and lines, circuit-hyperplane relaxation, modular cuts with
//! their single-element extensions, and generalized parallel connection
//! across a triangle.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::{compress, GroundSet, Subset};

/// First flat `F` (in rank-then-mask order) with
/// `r(X) + r(F) != r(X ∪ F) + r(X ∩ F)`.
pub fn modularity_violation(m: &Matroid, x: Subset) -> Option<Subset> {
    let rx = m.rank_of(x);
    m.flats()
        .iter()
        .copied()
        .find(|&f| rx + m.rank_of(f) != m.rank_of(x | f) + m.rank_of(x & f))
}

pub fn is_modular_set(m: &Matroid, x: Subset) -> bool {
    modularity_violation(m, x).is_none()
}

/// Modular rank-2 flats, optionally restricted to those made of exactly
/// `points` rank-1 flats.
pub fn modular_lines(m: &Matroid, points: Option<usize>) -> Vec<Subset> {
    m.lines()
        .into_iter()
        .filter(|&l| points.is_none_or(|k| m.point_count(l) == k))
        .filter(|&l| is_modular_set(m, l))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularMinorFailure {
    /// The set stopped being modular after deleting the element.
    AfterDeletion(usize),
    /// The set stopped being modular after contracting an element outside
    /// its closure.
    AfterContraction(usize),
    /// An element of `cl(W) ∖ W` that is neither a loop nor parallel to an
    /// element of `W`.
    ClosureElement(usize),
    /// The matroid is simple but the modular set is not closed.
    NotClosedInSimple,
}

/// Checks how a modular set behaves under single-element minors outside it
/// and how its closure looks. Errors if `w` is not modular to begin with.
pub fn modular_set_minor_property_check(
    m: &Matroid,
    w: Subset,
) -> Result<Vec<ModularMinorFailure>> {
    if let Some(f) = modularity_violation(m, w) {
        return Err(Error::NotModular {
            violating_flat: m.names(f),
        });
    }
    let mut failures = Vec::new();
    let cl = m.closure(w);
    for e in (m.full() - w).iter() {
        let single = Subset::singleton(e);
        let w_minor = compress(w, single);
        if let Ok(del) = m.delete(single) {
            if !is_modular_set(&del, w_minor) {
                failures.push(ModularMinorFailure::AfterDeletion(e));
            }
        }
        if !cl.contains(e) {
            if let Ok(con) = m.contract(single) {
                if !is_modular_set(&con, w_minor) {
                    failures.push(ModularMinorFailure::AfterContraction(e));
                }
            }
        } else if !m.is_loop(e)
            && !w
                .iter()
                .any(|f| m.rank_of(Subset::from_indices([e, f])) == 1)
        {
            failures.push(ModularMinorFailure::ClosureElement(e));
        }
    }
    if m.is_simple() && cl != w {
        failures.push(ModularMinorFailure::NotClosedInSimple);
    }
    Ok(failures)
}

/// Sets that are both circuits and hyperplanes, in mask order.
pub fn circuit_hyperplanes(m: &Matroid) -> Vec<Subset> {
    let r = m.rank();
    let mut out: Vec<Subset> = m
        .circuits()
        .iter()
        .copied()
        .filter(|&c| c.len() == r && m.is_flat(c))
        .collect();
    out.sort();
    out
}

/// Adds the circuit-hyperplane `c` to the bases.
pub fn relax(m: &Matroid, c: Subset) -> Result<Matroid> {
    if !(m.is_circuit(c) && c.len() == m.rank() && m.is_flat(c)) {
        return Err(Error::NotCircuitHyperplane(m.names(c)));
    }
    let bases = m.bases().iter().copied().chain(std::iter::once(c));
    Matroid::from_bases(m.ground().clone(), bases)
}

/// A family of flats of `host` closed upwards and under intersections of
/// modular pairs.
#[derive(Clone, Debug)]
pub struct ModularCut {
    flats: Vec<Subset>,
    host: Matroid,
}

impl ModularCut {
    /// Validates `flats` against the cut axioms.
    pub fn new(host: &Matroid, flats: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let mut flats: Vec<Subset> = flats.into_iter().collect();
        flats.sort();
        flats.dedup();
        validate_cut(host, &flats)?;
        Ok(ModularCut {
            flats,
            host: host.clone(),
        })
    }

    pub(crate) fn new_unchecked(host: &Matroid, mut flats: Vec<Subset>) -> Self {
        flats.sort();
        ModularCut {
            flats,
            host: host.clone(),
        }
    }

    /// Members in mask order.
    pub fn flats(&self) -> &[Subset] {
        &self.flats
    }

    pub fn host(&self) -> &Matroid {
        &self.host
    }

    pub fn contains(&self, flat: Subset) -> bool {
        self.flats.binary_search(&flat).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Minimal members.
    pub fn generators(&self) -> Vec<Subset> {
        self.flats
            .iter()
            .copied()
            .filter(|&f| !self.flats.iter().any(|&g| g != f && g.is_subset(f)))
            .collect()
    }
}

fn validate_cut(host: &Matroid, flats: &[Subset]) -> Result<()> {
    let members: HashSet<Subset> = flats.iter().copied().collect();
    for &f in flats {
        if !host.is_flat(f) {
            return Err(Error::NotAFlat(host.names(f)));
        }
    }
    for &f in flats {
        if let Some(&g) = host
            .flats()
            .iter()
            .find(|&&g| f.is_subset(g) && !members.contains(&g))
        {
            return Err(Error::NotAModularCut {
                first: host.names(f),
                second: host.names(g),
            });
        }
    }
    for (i, &a) in flats.iter().enumerate() {
        for &b in &flats[i + 1..] {
            let meet = a & b;
            let modular_pair =
                host.rank_of(a) + host.rank_of(b) == host.rank_of(a | b) + host.rank_of(meet);
            if modular_pair && !members.contains(&meet) {
                return Err(Error::NotAModularCut {
                    first: host.names(a),
                    second: host.names(b),
                });
            }
        }
    }
    Ok(())
}

/// All flats containing at least one generator, checked against the cut
/// axioms.
pub fn principal_filter_cut(m: &Matroid, generators: &[Subset]) -> Result<ModularCut> {
    for &g in generators {
        if !m.is_flat(g) {
            return Err(Error::NotAFlat(m.names(g)));
        }
    }
    let flats = m
        .flats()
        .iter()
        .copied()
        .filter(|&f| generators.iter().any(|&g| g.is_subset(f)));
    ModularCut::new(m, flats)
}

/// Smallest modular cut containing the generators: the upward closure,
/// repeatedly extended by intersections of modular pairs.
pub fn generated_cut(m: &Matroid, generators: &[Subset]) -> Result<ModularCut> {
    for &g in generators {
        if !m.is_flat(g) {
            return Err(Error::NotAFlat(m.names(g)));
        }
    }
    let mut members: HashSet<Subset> = HashSet::new();
    let mut frontier: Vec<Subset> = generators.to_vec();
    while !frontier.is_empty() {
        for g in frontier.drain(..) {
            for &f in m.flats() {
                if g.is_subset(f) {
                    members.insert(f);
                }
            }
        }
        let list: Vec<Subset> = members.iter().copied().collect();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                let meet = a & b;
                if !members.contains(&meet)
                    && m.rank_of(a) + m.rank_of(b) == m.rank_of(a | b) + m.rank_of(meet)
                {
                    frontier.push(meet);
                }
            }
        }
        frontier.sort();
        frontier.dedup();
    }
    ModularCut::new(m, members)
}

/// Every modular cut of `m`, the empty cut first, then by the linear
/// subclass of hyperplanes each cut contains. Stops with `BudgetExceeded`
/// after `limit` cuts.
pub fn modular_cuts(m: &Matroid, limit: u64) -> Result<Vec<ModularCut>> {
    let r = m.rank();
    let mut out = vec![ModularCut::new_unchecked(m, Vec::new())];
    if r == 0 {
        out.push(ModularCut::new_unchecked(m, vec![m.full()]));
        return Ok(out);
    }
    let hyperplanes = m.hyperplanes();
    let colines: Vec<Subset> = if r >= 2 {
        m.flats_of_rank(r - 2).collect()
    } else {
        Vec::new()
    };
    // For each hyperplane, the colines it contains.
    let members: Vec<Vec<usize>> = hyperplanes
        .iter()
        .map(|&h| {
            colines
                .iter()
                .enumerate()
                .filter(|(_, &k)| k.is_subset(h))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut included = vec![0u32; colines.len()];
    let mut excluded = vec![0u32; colines.len()];
    let mut chosen = Vec::new();
    let mut subclasses: Vec<Vec<usize>> = Vec::new();
    enumerate_subclasses(
        0,
        &members,
        &mut included,
        &mut excluded,
        &mut chosen,
        &mut subclasses,
        limit,
    )?;
    for class in subclasses {
        let hs: Vec<Subset> = class.iter().map(|&i| hyperplanes[i]).collect();
        let flats: Vec<Subset> = m
            .flats()
            .iter()
            .copied()
            .filter(|&f| {
                hyperplanes
                    .iter()
                    .filter(|h| f.is_subset(**h))
                    .all(|h| hs.contains(h))
            })
            .collect();
        out.push(ModularCut::new_unchecked(m, flats));
    }
    Ok(out)
}

/// Linear subclasses: sets of hyperplanes such that whenever two members
/// meet in a coline, every hyperplane through that coline is a member.
fn enumerate_subclasses(
    next: usize,
    members: &[Vec<usize>],
    included: &mut [u32],
    excluded: &mut [u32],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: u64,
) -> Result<()> {
    if out.len() as u64 >= limit {
        return Err(Error::BudgetExceeded(limit));
    }
    if next == members.len() {
        out.push(chosen.clone());
        return Ok(());
    }
    let ok =
        |inc: &[u32], exc: &[u32]| members[next].iter().all(|&k| !(inc[k] >= 2 && exc[k] >= 1));
    for &k in &members[next] {
        excluded[k] += 1;
    }
    if ok(included, excluded) {
        enumerate_subclasses(next + 1, members, included, excluded, chosen, out, limit)?;
    }
    for &k in &members[next] {
        excluded[k] -= 1;
        included[k] += 1;
    }
    if ok(included, excluded) {
        chosen.push(next);
        enumerate_subclasses(next + 1, members, included, excluded, chosen, out, limit)?;
        chosen.pop();
    }
    for &k in &members[next] {
        included[k] -= 1;
    }
    Ok(())
}

/// Single-element extension by `label`: the new element lies in the closure
/// of exactly the flats of the cut. It is appended as the last element.
pub fn extend(m: &Matroid, cut: &ModularCut, label: &str) -> Result<Matroid> {
    if m.labels().iter().any(|l| l == label) {
        return Err(Error::LabelCollision(label.to_string()));
    }
    if cut.host() != m {
        return Err(Error::BadParameters(
            "modular cut belongs to a different matroid".into(),
        ));
    }
    let n = m.len();
    let new = 1u32 << n;
    let mut ranks = vec![0u8; 1 << (n + 1)];
    for x in 0..new {
        let sub = Subset(x);
        let r = m.rank_of(sub) as u8;
        ranks[x as usize] = r;
        ranks[(x | new) as usize] = if cut.contains(m.closure(sub)) {
            r
        } else {
            r + 1
        };
    }
    let ground = GroundSet::new(m.labels().iter().cloned().chain([label.to_string()]))?;
    Matroid::from_rank_table(ground, ranks)
}

/// Brylawski's generalized parallel connection of `m` and `n` across their
/// common labels, which must form a triangle in both and be modular in at
/// least one. Ground order: `m`'s labels, then `n`'s labels outside the
/// triangle.
pub fn generalized_parallel_connection(m: &Matroid, n: &Matroid) -> Result<Matroid> {
    let common: Vec<String> = m
        .labels()
        .iter()
        .filter(|l| n.labels().contains(l))
        .cloned()
        .collect();
    let tm = m.mask(&common)?;
    let tn = n.mask(&common)?;
    if common.len() != 3 || !m.is_circuit(tm) || !n.is_circuit(tn) {
        return Err(Error::NotATriangle(common));
    }
    if !is_modular_set(m, tm) && !is_modular_set(n, tn) {
        return Err(Error::NotModularInEither);
    }
    let labels: Vec<String> = m
        .labels()
        .iter()
        .cloned()
        .chain(n.labels().iter().filter(|l| !common.contains(l)).cloned())
        .collect();
    let ground = GroundSet::new(labels)?;
    let size = ground.len();
    let m_len = m.len();
    // Position in the result of each element of `n`.
    let n_pos: Vec<usize> = n
        .labels()
        .iter()
        .map(|l| ground.index_of(l))
        .collect::<Result<_>>()?;
    let lift_n = |x: Subset| Subset::from_indices(x.iter().map(|i| n_pos[i]));
    let t_rank = |x: Subset| m.rank_of(x & tm);

    let mut ranks = vec![u8::MAX; 1 << size];
    for &f1 in m.flats() {
        let trace = f1 & tm;
        let trace_n = n.mask(m.names(trace))?;
        for &f2 in n.flats() {
            if f2 & tn != trace_n {
                continue;
            }
            let union = f1 | lift_n(f2);
            let r = m.rank_of(f1) + n.rank_of(f2) - t_rank(trace);
            let slot = &mut ranks[union.index()];
            *slot = (*slot).min(r as u8);
        }
    }
    // rank(X) = rank of the least flat containing X; ranks are monotone so
    // a superset minimum recovers it.
    for bit in 0..size {
        for x in 0..1usize << size {
            if x >> bit & 1 == 0 {
                let up = ranks[x | 1 << bit];
                if up < ranks[x] {
                    ranks[x] = up;
                }
            }
        }
    }
    debug_assert!(m_len <= size);
    Matroid::from_rank_table(ground, ranks)
}
