//! Isomorphic-minor search with re-validated witnesses, and the binary,
//! ternary and quaternary predicates built on it.
//!
//! Any minor `N` of `M` is `M / C \ D` with `C` independent of size
//! `r(M) - r(N)` and `E - C - D` spanning in `M / C`. Contract sets are tried
//! in lexicographic order, then delete sets in lexicographic order, and the
//! first candidate isomorphic to the pattern wins. Candidates are screened by
//! their rank-size profile (the number of subsets of each size and rank,
//! which determines the Tutte polynomial) before a full isomorphism test.

use std::sync::OnceLock;

use crate::canonical::find_isomorphism;
use crate::catalog;
use crate::error::{Error, Result};
use crate::fields::is_representable_with;
use crate::matroid::Matroid;
use crate::search::{Budget, Outcome, DEFAULT_BUDGET};
use crate::subset::{GroundSet, Subset};

/// `host / contracted \ deleted`, relabelled by `map`, equals the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub deleted: Subset,
    pub contracted: Subset,
    /// Surviving host label to pattern label, in host order.
    pub map: Vec<(String, String)>,
}

impl MinorWitness {
    /// The minor before relabelling.
    pub fn minor(&self, host: &Matroid) -> Result<Matroid> {
        host.minor(self.contracted, self.deleted)
    }

    /// Rebuilds the minor from scratch and compares it with `pattern`
    /// exactly after relabelling.
    pub fn validate(&self, host: &Matroid, pattern: &Matroid) -> bool {
        let Ok(minor) = self.minor(host) else {
            return false;
        };
        if minor.len() != pattern.len() || self.map.len() != minor.len() {
            return false;
        }
        let mut perm = Vec::with_capacity(minor.len());
        for (i, (from, to)) in self.map.iter().enumerate() {
            if minor.label(i) != from {
                return false;
            }
            match pattern.ground().index_of(to) {
                Ok(j) => perm.push(j),
                Err(_) => return false,
            }
        }
        match minor.permuted(&perm, pattern.ground().clone()) {
            Ok(image) => image == *pattern,
            Err(_) => false,
        }
    }

    pub fn deleted_labels(&self, host: &Matroid) -> Vec<String> {
        host.names(self.deleted)
    }

    pub fn contracted_labels(&self, host: &Matroid) -> Vec<String> {
        host.names(self.contracted)
    }
}

fn profile(ranks: &[u8], n: usize, r: usize) -> Vec<u32> {
    let mut out = vec![0u32; (n + 1) * (r + 1)];
    for (x, &rk) in ranks.iter().enumerate() {
        out[(x as u32).count_ones() as usize * (r + 1) + rk as usize] += 1;
    }
    out
}

struct Pattern<'a> {
    matroid: &'a Matroid,
    profile: Vec<u32>,
}

impl<'a> Pattern<'a> {
    fn new(matroid: &'a Matroid) -> Self {
        Pattern {
            matroid,
            profile: profile(matroid.rank_table(), matroid.len(), matroid.rank()),
        }
    }
}

/// Searches `host` for a minor isomorphic to `pattern` that keeps every
/// element of `must_use`.
pub fn minor_search(
    host: &Matroid,
    pattern: &Matroid,
    must_use: Subset,
    budget: &mut Budget,
) -> Result<Outcome<MinorWitness>> {
    if !must_use.is_subset(host.full()) {
        let bad = must_use.iter().find(|&i| i >= host.len()).unwrap_or(0);
        return Err(Error::MustUseNotInHost(format!("#{bad}")));
    }
    let (nh, rh) = (host.len(), host.rank());
    let (np, rp) = (pattern.len(), pattern.rank());
    if np > nh || rp > rh || np - rp > nh - rh || must_use.len() > np {
        return Ok(Outcome::Absent);
    }
    let contract_size = rh - rp;
    let delete_size = (nh - np) - contract_size;
    let pat = Pattern::new(pattern);
    let full = host.full();
    let ranks = host.rank_table();
    let mut lifted = vec![Subset::EMPTY; 1 << np];
    let mut minor_ranks = vec![0u8; 1 << np];

    for contract in (full - must_use).k_subsets(contract_size) {
        if !budget.tick() {
            return Ok(Outcome::BudgetExceeded);
        }
        if !host.is_independent(contract) {
            continue;
        }
        for delete in (full - contract - must_use).k_subsets(delete_size) {
            if !budget.tick() {
                return Ok(Outcome::BudgetExceeded);
            }
            let keep = full - contract - delete;
            if ranks[(keep | contract).index()] as usize != rh {
                continue;
            }
            let positions: Vec<usize> = keep.iter().collect();
            let base = ranks[contract.index()];
            for x in 1usize..1 << np {
                let low = x.trailing_zeros() as usize;
                lifted[x] = lifted[x & (x - 1)].with(positions[low]);
                minor_ranks[x] = ranks[(lifted[x] | contract).index()] - base;
            }
            if profile(&minor_ranks, np, rp) != pat.profile {
                continue;
            }
            let candidate = host.minor_unchecked(contract, keep);
            if let Some(map) = find_isomorphism(&candidate, pat.matroid) {
                let witness = MinorWitness {
                    deleted: delete,
                    contracted: contract,
                    map: positions
                        .iter()
                        .zip(&map)
                        .map(|(&h, &p)| (host.label(h).to_string(), pattern.label(p).to_string()))
                        .collect(),
                };
                if !witness.validate(host, pattern) {
                    return Err(Error::ConstructionFailed(
                        "minor witness failed re-validation".into(),
                    ));
                }
                return Ok(Outcome::Found(witness));
            }
        }
    }
    Ok(Outcome::Absent)
}

pub fn has_minor(host: &Matroid, pattern: &Matroid) -> Outcome<MinorWitness> {
    minor_search(host, pattern, Subset::EMPTY, &mut Budget::default())
        .expect("empty must-use set is always valid")
}

/// As [`has_minor`], with the surviving ground set required to contain the
/// labels in `must_use`.
pub fn has_minor_using<S: AsRef<str>>(
    host: &Matroid,
    pattern: &Matroid,
    must_use: impl IntoIterator<Item = S>,
) -> Result<Outcome<MinorWitness>> {
    let mut mask = Subset::EMPTY;
    for l in must_use {
        let l = l.as_ref();
        let i = host
            .ground()
            .index_of(l)
            .map_err(|_| Error::MustUseNotInHost(l.to_string()))?;
        mask = mask.with(i);
    }
    minor_search(host, pattern, mask, &mut Budget::default())
}

pub fn is_minor_of(pattern: &Matroid, host: &Matroid) -> Outcome<MinorWitness> {
    has_minor(host, pattern)
}

/// Excluded minors for GF(2) and GF(3), built once.
pub fn binary_excluded() -> &'static [Matroid] {
    static CELL: OnceLock<Vec<Matroid>> = OnceLock::new();
    CELL.get_or_init(|| vec![catalog::uniform(2, 4).unwrap()])
}

pub fn ternary_excluded() -> &'static [Matroid] {
    static CELL: OnceLock<Vec<Matroid>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            catalog::uniform(2, 5).unwrap(),
            catalog::uniform(3, 5).unwrap(),
            catalog::fano(),
            catalog::fano_dual(),
        ]
    })
}

/// `Found(true)` when no listed minor occurs, `Found(false)` when one does.
pub fn excludes_all(m: &Matroid, excluded: &[Matroid], limit: u64) -> Outcome<bool> {
    for x in excluded {
        match minor_search(m, x, Subset::EMPTY, &mut Budget::new(limit)).unwrap() {
            Outcome::Found(_) => return Outcome::Found(false),
            Outcome::BudgetExceeded => return Outcome::BudgetExceeded,
            Outcome::Absent => {}
        }
    }
    Outcome::Found(true)
}

/// Representability over GF(q) by direct search, as a tri-state.
pub fn representable(m: &Matroid, q: usize, limit: u64) -> Result<Outcome<bool>> {
    let out = is_representable_with(m, q, &mut Budget::new(limit))?;
    Ok(match out {
        Outcome::Found(_) => Outcome::Found(true),
        Outcome::Absent => Outcome::Found(false),
        Outcome::BudgetExceeded => Outcome::BudgetExceeded,
    })
}

fn cross_checked(m: &Matroid, excluded: &[Matroid], q: usize, limit: u64) -> Result<bool> {
    let by_minors = excludes_all(m, excluded, limit);
    let by_search = representable(m, q, limit)?;
    match (by_minors, by_search) {
        (Outcome::Found(a), Outcome::Found(b)) if a == b => Ok(a),
        (Outcome::Found(_), Outcome::Found(_)) => Err(Error::CrossCheckMismatch(format!(
            "GF({q}) on {} elements",
            m.len()
        ))),
        _ => Err(Error::BudgetExceeded(limit)),
    }
}

/// No `U2,4` minor, confirmed by a GF(2) representation search.
pub fn is_binary(m: &Matroid) -> Result<bool> {
    cross_checked(m, binary_excluded(), 2, DEFAULT_BUDGET)
}

/// None of `U2,5`, `U3,5`, `F7`, `F7*` as a minor, confirmed by a GF(3)
/// representation search.
pub fn is_ternary(m: &Matroid) -> Result<bool> {
    cross_checked(m, ternary_excluded(), 3, DEFAULT_BUDGET)
}

/// GF(4) representation search.
pub fn is_quaternary(m: &Matroid) -> Result<bool> {
    match representable(m, 4, DEFAULT_BUDGET)? {
        Outcome::Found(b) => Ok(b),
        _ => Err(Error::BudgetExceeded(DEFAULT_BUDGET)),
    }
}

/// Relabels `m` with fresh labels `prefix0, prefix1, ...`; handy when a
/// pattern has to be compared against hosts with clashing names.
pub fn renamed(m: &Matroid, prefix: &str) -> Result<Matroid> {
    m.relabeled(GroundSet::numbered(prefix, m.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{fano, non_fano, p6, uniform};

    #[test]
    fn self_minor_has_empty_witness() {
        let f = fano();
        let w = has_minor(&f, &f).found().unwrap();
        assert!(w.deleted.is_empty() && w.contracted.is_empty());
        assert!(w.validate(&f, &f));
    }

    #[test]
    fn p6_has_u25() {
        let w = has_minor(&p6(), &uniform(2, 5).unwrap()).found().unwrap();
        assert!(w.validate(&p6(), &uniform(2, 5).unwrap()));
    }

    #[test]
    fn non_fano_has_no_fano() {
        assert_eq!(
            has_minor_using(&non_fano(), &fano(), Vec::<String>::new()).unwrap(),
            Outcome::Absent
        );
        assert!(matches!(
            has_minor_using(&fano(), &fano(), ["zz"]),
            Err(Error::MustUseNotInHost(_))
        ));
        let f = fano();
        let all: Vec<String> = f.labels().to_vec();
        assert!(has_minor_using(&f, &f, &all).unwrap().is_found());
    }

    #[test]
    fn class_predicates() {
        assert!(!is_binary(&uniform(2, 4).unwrap()).unwrap());
        assert!(!is_ternary(&fano()).unwrap());
        assert!(is_quaternary(&fano()).unwrap());
        assert!(is_binary(&fano()).unwrap());
        assert!(is_ternary(&non_fano()).unwrap());
    }

    #[test]
    fn tampered_witness_fails_validation() {
        let f = fano();
        let mut w = has_minor(&f, &f).found().unwrap();
        // No transposition of two points is an automorphism of the plane.
        let first = w.map[0].1.clone();
        w.map[0].1 = std::mem::replace(&mut w.map[1].1, first);
        assert!(!w.validate(&f, &f));
    }
}
