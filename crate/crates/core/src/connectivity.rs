//! Connectivity function, local connectivity, linking value and Tutte
//! connectivity up to 3.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationKind {
    Separation,
    LinkingMinimizer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub side: Subset,
    /// `lambda(side)`.
    pub order: usize,
    pub kind: SeparationKind,
}

pub fn lambda(m: &Matroid, x: Subset) -> usize {
    m.rank_of(x) + m.rank_of(m.full() - x) - m.rank()
}

pub fn local_connectivity(m: &Matroid, s: Subset, t: Subset) -> usize {
    m.rank_of(s) + m.rank_of(t) - m.rank_of(s | t)
}

pub fn is_skew(m: &Matroid, a: Subset, b: Subset) -> bool {
    local_connectivity(m, a, b) == 0
}

/// `a` precedes `b` in the scan order: fewer elements first, then
/// lexicographic by sorted element list.
fn scan_precedes(a: Subset, b: Subset) -> bool {
    if a.len() != b.len() {
        return a.len() < b.len();
    }
    let d = a.bits() ^ b.bits();
    d != 0 && a.bits() & d & d.wrapping_neg() != 0
}

/// Minimum of a connectivity function over `s ⊆ A ⊆ ground ∖ t`, with the
/// first minimiser in scan order.
fn min_separating(
    ground: Subset,
    s: Subset,
    t: Subset,
    lam: impl Fn(Subset) -> usize,
) -> (usize, Subset) {
    let free = ground - s - t;
    let mut best = (usize::MAX, s);
    for extra in free.subsets() {
        let a = s | extra;
        let v = lam(a);
        if v < best.0 || (v == best.0 && scan_precedes(a, best.1)) {
            best = (v, a);
        }
    }
    best
}

fn check_disjoint(s: Subset, t: Subset) -> Result<()> {
    if s.is_disjoint(t) {
        Ok(())
    } else {
        Err(Error::DisjointnessViolated)
    }
}

/// `min { lambda(A) : s ⊆ A ⊆ E ∖ t }` together with the first minimiser.
pub fn kappa(m: &Matroid, s: Subset, t: Subset) -> Result<(usize, SeparationReport)> {
    check_disjoint(s, t)?;
    let (order, side) = min_separating(m.full(), s, t, |a| lambda(m, a));
    Ok((
        order,
        SeparationReport {
            side,
            order,
            kind: SeparationKind::LinkingMinimizer,
        },
    ))
}

/// The linking value in `M \ e` (`contract == false`) or `M / e`, computed
/// from the rank function of `m` without building the minor.
fn kappa_in_minor(m: &Matroid, s: Subset, t: Subset, e: usize, contract: bool) -> usize {
    let ground = m.full().without(e);
    let rank = |x: Subset| -> usize {
        if contract {
            m.rank_of(x.with(e)) - m.rank_of(Subset::singleton(e))
        } else {
            m.rank_of(x)
        }
    };
    let total = rank(ground);
    min_separating(ground, s, t, |a| rank(a) + rank(ground - a) - total).0
}

/// First `j`-separation with `j < k` in scan order, if any.
pub fn find_separation(m: &Matroid, k: usize) -> Option<SeparationReport> {
    let n = m.len();
    let full = m.full();
    for j in 1..k {
        // A and its complement give the same separation; only scan sides
        // missing the last element.
        let last = n - 1;
        let mut best: Option<Subset> = None;
        for a in full.without(last).subsets() {
            if a.len() < j || n - a.len() < j {
                continue;
            }
            if lambda(m, a) < j && best.is_none_or(|b| scan_precedes(a, b)) {
                best = Some(a);
            }
        }
        if let Some(side) = best {
            return Some(SeparationReport {
                side,
                order: lambda(m, side),
                kind: SeparationKind::Separation,
            });
        }
    }
    None
}

pub fn is_k_connected(m: &Matroid, k: usize) -> Result<bool> {
    if !(1..=3).contains(&k) {
        return Err(Error::BadParameters(format!(
            "connectivity is only decided for k in 1..=3, got {k}"
        )));
    }
    Ok(find_separation(m, k).is_none())
}

pub fn is_connected(m: &Matroid) -> bool {
    find_separation(m, 2).is_none()
}

pub fn is_3_connected(m: &Matroid) -> bool {
    find_separation(m, 3).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingStep {
    pub element: usize,
    pub kappa_deleted: usize,
    pub kappa_contracted: usize,
}

impl LinkingStep {
    pub fn holds(&self, kappa: usize) -> bool {
        self.kappa_deleted == kappa || self.kappa_contracted == kappa
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingReport {
    pub kappa: usize,
    pub steps: Vec<LinkingStep>,
}

impl LinkingReport {
    pub fn violations(&self) -> impl Iterator<Item = &LinkingStep> {
        self.steps.iter().filter(|s| !s.holds(self.kappa))
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }

    /// No element outside `S ∪ T` to test.
    pub fn is_vacuous(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Checks, for every `e ∉ S ∪ T`, that deleting or contracting `e` keeps the
/// linking value between `S` and `T`.
pub fn verify_tutte_linking(m: &Matroid, s: Subset, t: Subset) -> Result<LinkingReport> {
    let (kappa, _) = kappa(m, s, t)?;
    let steps = (m.full() - s - t)
        .iter()
        .map(|e| LinkingStep {
            element: e,
            kappa_deleted: kappa_in_minor(m, s, t, e, false),
            kappa_contracted: kappa_in_minor(m, s, t, e, true),
        })
        .collect();
    Ok(LinkingReport { kappa, steps })
}
