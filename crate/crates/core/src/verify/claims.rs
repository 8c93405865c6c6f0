use std::sync::OnceLock;

use serde_json::{json, Value};

use super::{Claim, Verdict, VerifyConfig};
use crate::catalog;
use crate::connectivity::{is_3_connected, verify_tutte_linking};
use crate::error::Error;
use crate::fields::is_representable_with;
use crate::matroid::Matroid;
use crate::minors::{minor_search, MinorWitness};
use crate::modularity::modular_lines;
use crate::pool::PoolEntry;
use crate::search::{Budget, Outcome};
use crate::subset::Subset;

/// Why a check stopped before reaching a verdict.
#[derive(Debug)]
pub enum Halt {
    Budget(Value),
    Error(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Error(e)
    }
}

pub type Check = Result<(Verdict, Value), Halt>;
type Step<T> = Result<T, Halt>;

pub(super) type Job<'a> = Box<dyn FnOnce() -> Check + Send + 'a>;

struct Pattern {
    name: &'static str,
    matroid: Matroid,
}

struct Patterns {
    u11: Pattern,
    u24: Pattern,
    u25: Pattern,
    u35: Pattern,
    u26: Pattern,
    u46: Pattern,
    f7: Pattern,
    f7_dual: Pattern,
    non_fano: Pattern,
    non_fano_dual: Pattern,
    p6: Pattern,
    mk4: Pattern,
    steiner: Matroid,
}

fn patterns() -> &'static Patterns {
    static CELL: OnceLock<Patterns> = OnceLock::new();
    CELL.get_or_init(|| {
        let named = |name: &'static str| Pattern {
            name,
            matroid: catalog::by_name(name).expect("catalog entry"),
        };
        Patterns {
            u11: named("u1,1"),
            u24: named("u2,4"),
            u25: named("u2,5"),
            u35: named("u3,5"),
            u26: named("u2,6"),
            u46: named("u4,6"),
            f7: named("fano"),
            f7_dual: named("fano-dual"),
            non_fano: named("non-fano"),
            non_fano_dual: named("non-fano-dual"),
            p6: named("p6"),
            mk4: named("mk4"),
            steiner: catalog::steiner_s5612(),
        }
    })
}

fn names(m: &Matroid, x: Subset) -> Value {
    json!(m.names(x))
}

fn witness_json(host: &Matroid, pattern: &str, w: &MinorWitness) -> Value {
    json!({
        "pattern": pattern,
        "deleted": w.deleted_labels(host),
        "contracted": w.contracted_labels(host),
        "map": w.map,
    })
}

fn search(
    host: &Matroid,
    pattern: &Pattern,
    must_use: Subset,
    budget: u64,
) -> Step<Option<MinorWitness>> {
    match minor_search(host, &pattern.matroid, must_use, &mut Budget::new(budget))? {
        Outcome::Found(w) => Ok(Some(w)),
        Outcome::Absent => Ok(None),
        Outcome::BudgetExceeded => Err(Halt::Budget(json!({ "minor-search": pattern.name }))),
    }
}

/// Minor presence as a JSON fact: the witness, or an exhausted search.
fn presence(host: &Matroid, pattern: &Pattern, budget: u64) -> Step<(bool, Value)> {
    Ok(match search(host, pattern, Subset::EMPTY, budget)? {
        Some(w) => (true, witness_json(host, pattern.name, &w)),
        None => (
            false,
            json!({ "pattern": pattern.name, "absent": "exhaustive search" }),
        ),
    })
}

fn representation(m: &Matroid, q: usize, budget: u64) -> Step<Option<Value>> {
    match is_representable_with(m, q, &mut Budget::new(budget))? {
        Outcome::Found(rep) => Ok(Some(serde_json::to_value(rep.to_document()).expect("json"))),
        Outcome::Absent => Ok(None),
        Outcome::BudgetExceeded => Err(Halt::Budget(json!({ "representation": q }))),
    }
}

/// Representability over GF(q) decided twice: by excluded minors and by
/// direct search. Disagreement is an error.
fn cross_checked(m: &Matroid, excluded: &[&Pattern], q: usize, budget: u64) -> Step<(bool, Value)> {
    let mut obstruction = None;
    for p in excluded {
        if let Some(w) = search(m, p, Subset::EMPTY, budget)? {
            obstruction = Some(witness_json(m, p.name, &w));
            break;
        }
    }
    let rep = representation(m, q, budget)?;
    match (obstruction, rep) {
        (None, Some(rep)) => Ok((true, json!({ "q": q, "representation": rep }))),
        (Some(w), None) => Ok((false, json!({ "q": q, "excluded-minor": w }))),
        (Some(_), Some(_)) => Err(Error::CrossCheckMismatch(format!(
            "GF({q}) representation found despite an excluded minor"
        ))
        .into()),
        (None, None) => Err(Error::CrossCheckMismatch(format!(
            "no excluded minor, yet no GF({q}) representation"
        ))
        .into()),
    }
}

pub fn binary_check(m: &Matroid, budget: u64) -> Result<(bool, Value), Halt> {
    cross_checked(m, &[&patterns().u24], 2, budget)
}

pub fn ternary_check(m: &Matroid, budget: u64) -> Result<(bool, Value), Halt> {
    let p = patterns();
    cross_checked(m, &[&p.u25, &p.u35, &p.f7, &p.f7_dual], 3, budget)
}

pub fn quaternary_check(m: &Matroid, budget: u64) -> Result<(bool, Value), Halt> {
    Ok(match representation(m, 4, budget)? {
        Some(rep) => (true, json!({ "q": 4, "representation": rep })),
        None => (false, json!({ "q": 4, "absent": "exhaustive search" })),
    })
}

fn vacuous(reason: &str) -> Check {
    Ok((Verdict::Vacuous, json!({ "hypothesis": reason })))
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// 3-connected with a modular 4-point line; returns those lines.
fn four_point_hypothesis(m: &Matroid) -> Option<Vec<Subset>> {
    if !is_3_connected(m) {
        return None;
    }
    let lines = modular_lines(m, Some(4));
    (!lines.is_empty()).then_some(lines)
}

fn modular_triangle(m: &Matroid, budget: u64) -> Check {
    if !is_3_connected(m) {
        return vacuous("not 3-connected");
    }
    let lines = modular_lines(m, Some(3));
    let Some(&line) = lines.first() else {
        return vacuous("no modular 3-point line");
    };
    let (binary, w) = binary_check(m, budget)?;
    Ok((
        verdict(binary),
        json!({ "line": names(m, line), "binary": w }),
    ))
}

fn four_point_line(m: &Matroid, budget: u64) -> Check {
    let Some(lines) = four_point_hypothesis(m) else {
        return vacuous("not 3-connected with a modular 4-point line");
    };
    let p = patterns();
    let (ternary, tw) = ternary_check(m, budget)?;
    let (quaternary, qw) = quaternary_check(m, budget)?;
    let (fano, fw) = presence(m, &p.f7, budget)?;
    let (nf, nfw) = presence(m, &p.non_fano, budget)?;
    let (nfd, nfdw) = presence(m, &p.non_fano_dual, budget)?;
    let third = fano && (nf || nfd);
    let mut outcomes = Vec::new();
    if ternary {
        outcomes.push("ternary");
    }
    if quaternary {
        outcomes.push("quaternary");
    }
    if third {
        outcomes.push("fano-and-non-fano");
    }
    Ok((
        verdict(!outcomes.is_empty()),
        json!({
            "line": names(m, lines[0]),
            "outcomes": outcomes,
            "non-fano-itself": nf,
            "ternary": tw,
            "quaternary": qw,
            "fano": fw,
            "non-fano": nfw,
            "non-fano-dual": nfdw,
        }),
    ))
}

fn u25_u35(m: &Matroid, budget: u64) -> Check {
    if m.rank() < 3 || m.corank() < 3 {
        return vacuous("rank or corank below 3");
    }
    if !is_3_connected(m) {
        return vacuous("not 3-connected");
    }
    let p = patterns();
    let (a, aw) = presence(m, &p.u25, budget)?;
    let (b, bw) = presence(m, &p.u35, budget)?;
    Ok((verdict(a == b), json!({ "u2,5": aw, "u3,5": bw })))
}

fn contractible_element(m: &Matroid, budget: u64) -> Check {
    if !is_3_connected(m) {
        return vacuous("not 3-connected");
    }
    let p = patterns();
    let candidates = [
        &p.u24,
        &p.u25,
        &p.u35,
        &p.f7,
        &p.f7_dual,
        &p.non_fano,
        &p.non_fano_dual,
        &p.mk4,
        &p.p6,
    ];
    let mut checked = Vec::new();
    let mut ok = true;
    for pat in candidates {
        let n = &pat.matroid;
        if n.len() < 4 || n.rank() >= m.rank() || n.len() > m.len() {
            continue;
        }
        if search(m, pat, Subset::EMPTY, budget)?.is_none() {
            continue;
        }
        let mut found = None;
        for e in 0..m.len() {
            let Ok((si, _)) = m.contract(Subset::singleton(e)).and_then(|c| c.simplify()) else {
                continue;
            };
            if !is_3_connected(&si) {
                continue;
            }
            if let Some(w) = search(&si, pat, Subset::EMPTY, budget)? {
                found = Some(json!({
                    "element": m.label(e),
                    "minor-of-simplification": witness_json(&si, pat.name, &w),
                }));
                break;
            }
        }
        ok &= found.is_some();
        checked.push(json!({ "pattern": pat.name, "element": found }));
    }
    if checked.is_empty() {
        return vacuous("no catalog minor of smaller rank");
    }
    Ok((verdict(ok), json!({ "minors": checked })))
}

fn fano_splitter(m: &Matroid, budget: u64) -> Check {
    if !is_3_connected(m) {
        return vacuous("not 3-connected");
    }
    let p = patterns();
    let Some(fw) = search(m, &p.f7, Subset::EMPTY, budget)? else {
        return vacuous("no F7-minor");
    };
    if search(m, &p.u25, Subset::EMPTY, budget)?.is_some() {
        return vacuous("has a U2,5-minor");
    }
    if m.is_isomorphic(&p.f7.matroid) {
        let iso = m.isomorphism(&p.f7.matroid).expect("isomorphic");
        return Ok((
            Verdict::Pass,
            json!({ "isomorphic-to": "fano", "map": iso }),
        ));
    }
    let (dual, dw) = presence(m, &p.f7_dual, budget)?;
    Ok((
        verdict(dual),
        json!({ "fano": witness_json(m, "fano", &fw), "fano-dual": dw }),
    ))
}

/// Searches for a contraction set `C` skew to `line` and extra elements `Y`
/// such that `N' = (M / C) | (line ∪ Y)` is 3-connected and has an `n0`
/// minor keeping every element of `Y`. Returns `C`, `Y`, and the minor
/// witness inside `N'`.
pub fn line_preserving_minor(
    m: &Matroid,
    line: Subset,
    n0: &Matroid,
    budget: u64,
) -> Result<Outcome<(Subset, Subset, MinorWitness)>, Error> {
    let mut nodes = Budget::new(budget);
    let rest = m.full() - line;
    let line_rank = m.rank_of(line);
    let (k, r0) = (n0.len(), n0.rank());
    let restricted = m.restrict(line)?;
    for c_size in 0..=m.rank().saturating_sub(line_rank) {
        if m.rank() - c_size < r0 {
            break;
        }
        for c in rest.k_subsets(c_size) {
            if !nodes.tick() {
                return Ok(Outcome::BudgetExceeded);
            }
            if !m.is_independent(c) || m.rank_of(c | line) != c_size + line_rank {
                continue;
            }
            let free = rest - c;
            let lo = k.saturating_sub(line.len());
            for y_size in lo..=k.min(free.len()) {
                for y in free.k_subsets(y_size) {
                    if !nodes.tick() {
                        return Ok(Outcome::BudgetExceeded);
                    }
                    let prime = m.minor(c, free - y)?;
                    if !is_3_connected(&prime) {
                        continue;
                    }
                    if prime.restrict(prime.mask(m.names(line))?)? != restricted {
                        continue;
                    }
                    let must = prime.mask(m.names(y))?;
                    let left = budget.saturating_sub(nodes.used());
                    match minor_search(&prime, n0, must, &mut Budget::new(left))? {
                        Outcome::Found(w) => return Ok(Outcome::Found((c, y, w))),
                        Outcome::BudgetExceeded => return Ok(Outcome::BudgetExceeded),
                        Outcome::Absent => {}
                    }
                }
            }
        }
    }
    Ok(Outcome::Absent)
}

fn line_preserving_job(m: &Matroid, line: Subset, pat: &Pattern, budget: u64) -> Check {
    if search(m, pat, Subset::EMPTY, budget)?.is_none() {
        return vacuous("pattern is not a minor");
    }
    match line_preserving_minor(m, line, &pat.matroid, budget)? {
        Outcome::Found((c, y, w)) => {
            let prime = m.minor(c, m.full() - line - c - y)?;
            Ok((
                Verdict::Pass,
                json!({
                    "line": names(m, line),
                    "pattern": pat.name,
                    "contracted": names(m, c),
                    "kept": names(m, y),
                    "minor": witness_json(&prime, pat.name, &w),
                }),
            ))
        }
        Outcome::Absent => Ok((
            Verdict::Fail,
            json!({ "line": names(m, line), "pattern": pat.name, "absent": "exhaustive search" }),
        )),
        Outcome::BudgetExceeded => Err(Halt::Budget(json!({ "line-preserving-minor": pat.name }))),
    }
}

fn fano_through_line(m: &Matroid, budget: u64) -> Check {
    let Some(lines) = four_point_hypothesis(m) else {
        return vacuous("not 3-connected with a modular 4-point line");
    };
    let p = patterns();
    if search(m, &p.u25, Subset::EMPTY, budget)?.is_none() {
        return vacuous("no U2,5-minor");
    }
    let mut per_line = Vec::new();
    let mut ok = true;
    for &line in &lines {
        let mut found = None;
        for three in line.k_subsets(3) {
            if let Some(w) = search(m, &p.f7, three, budget)? {
                found =
                    Some(json!({ "uses": names(m, three), "minor": witness_json(m, "fano", &w) }));
                break;
            }
        }
        ok &= found.is_some();
        per_line.push(json!({ "line": names(m, line), "fano": found }));
    }
    Ok((verdict(ok), json!({ "lines": per_line })))
}

fn fano_line_extension(m: &Matroid) -> Check {
    if m.rank() != 3 || !m.is_simple() {
        return vacuous("not simple of rank 3");
    }
    let p = patterns();
    let mut found = Vec::new();
    let mut ok = true;
    for line in modular_lines(m, Some(4)) {
        for x in line.iter() {
            let others = line.without(x);
            let pool = m.full() - line;
            for extra in pool.k_subsets(4) {
                let plane = others | extra;
                let Some(map) = m.restrict(plane)?.isomorphism(&p.f7.matroid) else {
                    continue;
                };
                let whole = plane == m.full().without(x);
                ok &= whole;
                found.push(json!({
                    "line": names(m, line),
                    "removed": m.label(x),
                    "plane": names(m, plane),
                    "map": map,
                    "leftover": names(m, m.full().without(x) - plane),
                }));
            }
        }
    }
    if found.is_empty() {
        return vacuous("no F7-restriction through three points of a modular 4-point line");
    }
    Ok((verdict(ok), json!({ "restrictions": found })))
}

fn excluded_uniform(m: &Matroid, pattern: &Pattern, budget: u64) -> Check {
    let Some(lines) = four_point_hypothesis(m) else {
        return vacuous("not 3-connected with a modular 4-point line");
    };
    let (has, w) = presence(m, pattern, budget)?;
    Ok((
        verdict(!has),
        json!({ "line": names(m, lines[0]), "search": w }),
    ))
}

/// Why the single-element minor loses one of the three properties, or
/// `None` if it keeps all of them.
fn lost_property(minor: &Matroid, budget: u64) -> Step<Option<&'static str>> {
    if !is_3_connected(minor) {
        return Ok(Some("not 3-connected"));
    }
    if modular_lines(minor, Some(4)).is_empty() {
        return Ok(Some("no modular 4-point line"));
    }
    if search(minor, &patterns().p6, Subset::EMPTY, budget)?.is_none() {
        return Ok(Some("no P6-minor"));
    }
    Ok(None)
}

fn p6_rank_four(m: &Matroid, budget: u64) -> Check {
    let Some(lines) = four_point_hypothesis(m) else {
        return vacuous("not 3-connected with a modular 4-point line");
    };
    let Some(pw) = search(m, &patterns().p6, Subset::EMPTY, budget)? else {
        return vacuous("no P6-minor");
    };
    let mut reasons = Vec::new();
    for e in 0..m.len() {
        let single = Subset::singleton(e);
        let deleted = lost_property(&m.delete(single)?, budget)?;
        let contracted = lost_property(&m.contract(single)?, budget)?;
        match (deleted, contracted) {
            (Some(d), Some(c)) => {
                reasons.push(json!({ "element": m.label(e), "deletion": d, "contraction": c }))
            }
            _ => return vacuous("not minor-minimal"),
        }
    }
    Ok((
        verdict(m.rank() == 4),
        json!({
            "rank": m.rank(),
            "line": names(m, lines[0]),
            "p6": witness_json(m, "p6", &pw),
            "minimality": reasons,
        }),
    ))
}

fn p6_forces_non_fano(m: &Matroid, budget: u64) -> Check {
    let Some(lines) = four_point_hypothesis(m) else {
        return vacuous("not 3-connected with a modular 4-point line");
    };
    let p = patterns();
    let Some(pw) = search(m, &p.p6, Subset::EMPTY, budget)? else {
        return vacuous("no P6-minor");
    };
    let (nf, w) = presence(m, &p.non_fano, budget)?;
    Ok((
        verdict(nf),
        json!({ "line": names(m, lines[0]), "p6": witness_json(m, "p6", &pw), "non-fano": w }),
    ))
}

fn quaternary_or_steiner(m: &Matroid, budget: u64) -> Check {
    let Some(lines) = four_point_hypothesis(m) else {
        return vacuous("not 3-connected with a modular 4-point line");
    };
    let p = patterns();
    if search(m, &p.non_fano, Subset::EMPTY, budget)?.is_some()
        || search(m, &p.non_fano_dual, Subset::EMPTY, budget)?.is_some()
    {
        return vacuous("has an F7- or (F7-)* minor");
    }
    let (quaternary, qw) = quaternary_check(m, budget)?;
    if quaternary {
        return Ok((
            Verdict::Pass,
            json!({ "line": names(m, lines[0]), "quaternary": qw }),
        ));
    }
    let own = Pattern {
        name: "instance",
        matroid: m.clone(),
    };
    let (inside, sw) = presence(&p.steiner, &own, budget)?;
    Ok((
        verdict(inside),
        json!({ "line": names(m, lines[0]), "quaternary": qw, "minor-of-s5612": sw }),
    ))
}

pub(super) fn tutte_linking(m: &Matroid, s: Subset, t: Subset) -> Check {
    let report = verify_tutte_linking(m, s, t)?;
    let steps: Vec<Value> = report
        .steps
        .iter()
        .map(|st| {
            json!({
                "element": m.label(st.element),
                "deleted": st.kappa_deleted,
                "contracted": st.kappa_contracted,
            })
        })
        .collect();
    Ok((
        verdict(report.holds()),
        json!({ "kappa": report.kappa, "steps": steps }),
    ))
}

/// The jobs a claim runs for one pool member, each labelled with its
/// instance description.
pub(super) fn instances<'a>(
    claim: Claim,
    entry: &'a PoolEntry,
    config: &'a VerifyConfig,
) -> Vec<(String, Job<'a>)> {
    let m = &entry.matroid;
    let budget = config.budget;
    let single = |job: Job<'a>| vec![(entry.provenance.clone(), job)];
    match claim {
        Claim::ModularTriangle => single(Box::new(move || modular_triangle(m, budget))),
        Claim::FourPointLine => single(Box::new(move || four_point_line(m, budget))),
        Claim::U25U35 => single(Box::new(move || u25_u35(m, budget))),
        Claim::ContractibleElement => single(Box::new(move || contractible_element(m, budget))),
        Claim::FanoSplitter => single(Box::new(move || fano_splitter(m, budget))),
        Claim::FanoThroughLine => single(Box::new(move || fano_through_line(m, budget))),
        Claim::FanoLineExtension => single(Box::new(move || fano_line_extension(m))),
        Claim::NoU26 => single(Box::new(move || {
            excluded_uniform(m, &patterns().u26, budget)
        })),
        Claim::NoU46 => single(Box::new(move || {
            excluded_uniform(m, &patterns().u46, budget)
        })),
        Claim::P6RankFour => single(Box::new(move || p6_rank_four(m, budget))),
        Claim::P6ForcesNonFano => single(Box::new(move || p6_forces_non_fano(m, budget))),
        Claim::QuaternaryOrSteiner => single(Box::new(move || quaternary_or_steiner(m, budget))),
        Claim::LinePreservingMinor => {
            let line = if m.is_simple() && is_3_connected(m) {
                modular_lines(m, None).into_iter().find(|l| l.len() >= 4)
            } else {
                None
            };
            let Some(line) = line else {
                return single(Box::new(|| {
                    vacuous("not simple and 3-connected with a modular line of 4 or more points")
                }));
            };
            let p = patterns();
            [
                &p.u11,
                &p.u24,
                &p.u25,
                &p.u35,
                &p.f7,
                &p.non_fano,
                &p.mk4,
                &p.p6,
            ]
            .into_iter()
            .map(|pat| {
                let instance = format!(
                    "{}; L={{{}}}; N0={}",
                    entry.provenance,
                    m.names(line).join(","),
                    pat.name
                );
                let job: Job<'a> = Box::new(move || line_preserving_job(m, line, pat, budget));
                (instance, job)
            })
            .collect()
        }
        Claim::TutteLinking => Vec::new(),
    }
}
