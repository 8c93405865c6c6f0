//! Instance pools: deterministic, isomorphism-free collections of matroids
//! assembled from a JSON spec.
//!
//! Sources run in the order given. `catalog` and `pg` produce fresh
//! matroids; `relax`, `dual`, `gpc` and `extend` transform the members
//! accepted so far. Every candidate passes through the spec's filter and is
//! dropped if its canonical form has been seen before, so the first
//! provenance wins.
//!
//! Projective-geometry sources enumerate column sets that contain the
//! standard frame (the unit vectors and the all-ones vector). Any point set
//! containing some frame is projectively equivalent to one containing the
//! standard frame, so this loses nothing up to isomorphism for sets with
//! `r + 1` points in general position.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::connectivity::is_3_connected;
use crate::error::{Error, Result};
use crate::fields::{matroid_from_matrix, pg_points, MatrixRep};
use crate::matroid::{Matroid, MatroidDocument};
use crate::modularity::{
    circuit_hyperplanes, extend, generalized_parallel_connection, modular_cuts, modular_lines,
    relax,
};
use crate::subset::{GroundSet, MAX_ELEMENTS};

const DEFAULT_MAX_CANDIDATES: u64 = 1_000_000;
const DEFAULT_MAX_CUTS: u64 = 200_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Filter {
    #[serde(default)]
    pub simple: bool,
    #[serde(default)]
    pub three_connected: bool,
    /// Keep only matroids with a modular line of exactly this many points.
    #[serde(default)]
    pub modular_line: Option<usize>,
    #[serde(default)]
    pub min_size: Option<usize>,
    #[serde(default)]
    pub max_size: Option<usize>,
    #[serde(default)]
    pub rank: Option<usize>,
}

impl Filter {
    pub fn accepts(&self, m: &Matroid) -> bool {
        if self.min_size.is_some_and(|k| m.len() < k)
            || self.max_size.is_some_and(|k| m.len() > k)
            || self.rank.is_some_and(|r| m.rank() != r)
        {
            return false;
        }
        if self.simple && !m.is_simple() {
            return false;
        }
        if let Some(k) = self.modular_line {
            if modular_lines(m, Some(k)).is_empty() {
                return false;
            }
        }
        !self.three_connected || is_3_connected(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Source {
    /// Named catalog entries; all of them when `names` is omitted.
    Catalog {
        #[serde(default)]
        names: Option<Vec<String>>,
    },
    /// Column subsets of PG(rank - 1, q) containing the standard frame.
    Pg {
        rank: usize,
        q: usize,
        #[serde(default)]
        min_size: Option<usize>,
        max_size: usize,
    },
    /// Every circuit-hyperplane relaxation of the members so far.
    Relax {
        #[serde(default)]
        require: Filter,
    },
    Dual {
        #[serde(default)]
        require: Filter,
    },
    /// Generalized parallel connection of each member with a catalog matroid
    /// across each triangle of the member. The catalog matroid's
    /// lexicographically first triangle is glued on, in label order.
    Gpc {
        #[serde(default = "default_gpc_partner")]
        with: String,
        #[serde(default)]
        require: Filter,
    },
    /// All single-element extensions of each member.
    Extend {
        #[serde(default)]
        require: Filter,
        #[serde(default)]
        max_cuts: Option<u64>,
    },
}

fn default_gpc_partner() -> String {
    "fano".into()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolSpec {
    pub sources: Vec<Source>,
    #[serde(default)]
    pub filter: Filter,
    /// Upper bound on candidates from any one source.
    #[serde(default)]
    pub max_candidates: Option<u64>,
}

impl PoolSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Clone, Debug)]
pub struct PoolEntry {
    pub matroid: Matroid,
    pub provenance: String,
}

/// A pool member as one JSON line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolRecord {
    pub provenance: String,
    #[serde(flatten)]
    pub document: MatroidDocument,
}

impl PoolEntry {
    pub fn record(&self, index: usize) -> PoolRecord {
        PoolRecord {
            provenance: self.provenance.clone(),
            document: self.matroid.to_document(&format!("pool-{index}")),
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn braces(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

struct Builder {
    filter: Filter,
    seen: HashSet<Vec<u8>>,
    members: Vec<PoolEntry>,
}

impl Builder {
    /// Filters and canonicalizes in parallel, then merges in input order.
    fn absorb(&mut self, candidates: Vec<(Matroid, String)>) {
        let filter = &self.filter;
        let kept: Vec<(Vec<u8>, Matroid, String)> = candidates
            .into_par_iter()
            .filter(|(m, _)| filter.accepts(m))
            .map(|(m, p)| (m.canonical_form().bytes().to_vec(), m, p))
            .collect();
        for (key, matroid, provenance) in kept {
            if self.seen.insert(key) {
                self.members.push(PoolEntry {
                    matroid,
                    provenance,
                });
            }
        }
    }

    fn parents(&self, require: &Filter) -> Vec<PoolEntry> {
        self.members
            .iter()
            .filter(|e| require.accepts(&e.matroid))
            .cloned()
            .collect()
    }
}

fn pg_candidates(
    rank: usize,
    q: usize,
    min_size: usize,
    max_size: usize,
    cap: u64,
) -> Result<Vec<(Matroid, String)>> {
    if !(2..=4).contains(&rank) {
        return Err(Error::BadSpec(format!("pg rank must be 2..=4, got {rank}")));
    }
    if max_size > MAX_ELEMENTS || max_size < min_size {
        return Err(Error::BadSpec(format!(
            "pg sizes {min_size}..={max_size} are not a valid range up to {MAX_ELEMENTS}"
        )));
    }
    let points = pg_points(rank, q).map_err(|e| Error::BadSpec(e.to_string()))?;
    let frame: Vec<usize> = (0..rank)
        .map(|i| {
            let mut v = vec![0u8; rank];
            v[i] = 1;
            v
        })
        .chain([vec![1u8; rank]])
        .map(|v| points.iter().position(|p| *p == v).expect("frame point"))
        .collect();
    let rest: Vec<usize> = (0..points.len()).filter(|i| !frame.contains(i)).collect();
    let lo = min_size.max(frame.len());
    let total: u64 = (lo..=max_size)
        .map(|k| binomial(rest.len() as u64, (k - frame.len()) as u64))
        .sum();
    if total > cap {
        return Err(Error::BadSpec(format!(
            "PG({}, {q}) sweep has {total} candidates, over the cap of {cap}",
            rank - 1
        )));
    }
    let mut choices = Vec::new();
    for k in lo..=max_size {
        let mut cols = frame.clone();
        push_combinations(&rest, k - frame.len(), &mut cols, &mut choices);
    }
    choices
        .into_par_iter()
        .map(|cols| {
            let ground = GroundSet::letters(cols.len())?;
            let columns = cols.iter().map(|&i| points[i].clone()).collect();
            let m = matroid_from_matrix(&MatrixRep::from_columns(q, ground, columns)?)?;
            let ids: Vec<String> = cols.iter().map(usize::to_string).collect();
            Ok((m, format!("pg({rank},{q}):{}", ids.join(","))))
        })
        .collect()
}

/// Appends `prefix` extended by every `k`-combination of `items`, in
/// lexicographic order. `items` may be longer than a [`Subset`] can hold.
fn push_combinations(
    items: &[usize],
    k: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        out.push(prefix.clone());
        return;
    }
    for i in 0..items.len().saturating_sub(k - 1) {
        prefix.push(items[i]);
        push_combinations(&items[i + 1..], k - 1, prefix, out);
        prefix.pop();
    }
}

/// Labels not used by `taken`, of the form `prefix1, prefix2, ...`.
fn fresh_labels(taken: &[String], prefix: &str, count: usize) -> Vec<String> {
    (1..)
        .map(|i| format!("{prefix}{i}"))
        .filter(|l| !taken.contains(l))
        .take(count)
        .collect()
}

fn gpc_candidates(parent: &PoolEntry, partner: &Matroid, name: &str) -> Vec<(Matroid, String)> {
    let m = &parent.matroid;
    if m.len() + partner.len() - 3 > MAX_ELEMENTS {
        return Vec::new();
    }
    let Some(glue) = partner.triangles().into_iter().min_by(|a, b| a.lex_cmp(*b)) else {
        return Vec::new();
    };
    let others = partner.full() - glue;
    let fresh = fresh_labels(m.labels(), "g", others.len());
    let mut out = Vec::new();
    for tri in m.triangles() {
        let names = m.names(tri);
        let mut labels = vec![String::new(); partner.len()];
        for (slot, label) in glue.iter().zip(&names) {
            labels[slot] = label.clone();
        }
        for (slot, label) in others.iter().zip(&fresh) {
            labels[slot] = label.clone();
        }
        let Ok(copy) = GroundSet::new(labels).and_then(|g| partner.relabeled(g)) else {
            continue;
        };
        if let Ok(x) = generalized_parallel_connection(m, &copy) {
            let provenance = format!("gpc({}; {name}; {})", parent.provenance, braces(&names));
            out.push((x, provenance));
        }
    }
    out
}

fn extension_candidates(parent: &PoolEntry, max_cuts: u64) -> Result<Vec<(Matroid, String)>> {
    let m = &parent.matroid;
    if m.len() >= MAX_ELEMENTS {
        return Ok(Vec::new());
    }
    let label = fresh_labels(m.labels(), "z", 1).remove(0);
    let cuts = modular_cuts(m, max_cuts)?;
    let mut out = Vec::new();
    for cut in &cuts {
        let x = extend(m, cut, &label)?;
        let gens: Vec<String> = cut
            .generators()
            .iter()
            .map(|&g| braces(&m.names(g)))
            .collect();
        let provenance = format!("extend({}; {})", parent.provenance, gens.join("|"));
        out.push((x, provenance));
    }
    Ok(out)
}

/// Builds the pool described by `spec`.
pub fn generate_pool(spec: &PoolSpec) -> Result<Vec<PoolEntry>> {
    let cap = spec.max_candidates.unwrap_or(DEFAULT_MAX_CANDIDATES);
    let mut b = Builder {
        filter: spec.filter.clone(),
        seen: HashSet::new(),
        members: Vec::new(),
    };
    for source in &spec.sources {
        let candidates = match source {
            Source::Catalog { names } => {
                let names: Vec<String> = match names {
                    Some(list) => list.clone(),
                    None => catalog::NAMES.iter().map(|s| s.to_string()).collect(),
                };
                names
                    .iter()
                    .map(|n| {
                        let m = catalog::by_name(n).map_err(|e| Error::BadSpec(e.to_string()))?;
                        Ok((m, format!("catalog:{n}")))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            Source::Pg {
                rank,
                q,
                min_size,
                max_size,
            } => pg_candidates(*rank, *q, min_size.unwrap_or(0), *max_size, cap)?,
            Source::Relax { require } => {
                let mut out = Vec::new();
                for p in b.parents(require) {
                    for c in circuit_hyperplanes(&p.matroid) {
                        let provenance =
                            format!("relax({}; {})", p.provenance, braces(&p.matroid.names(c)));
                        out.push((relax(&p.matroid, c)?, provenance));
                    }
                }
                out
            }
            Source::Dual { require } => b
                .parents(require)
                .into_iter()
                .map(|p| (p.matroid.dual(), format!("dual({})", p.provenance)))
                .collect(),
            Source::Gpc { with, require } => {
                let partner = catalog::by_name(with).map_err(|e| Error::BadSpec(e.to_string()))?;
                b.parents(require)
                    .iter()
                    .flat_map(|p| gpc_candidates(p, &partner, with))
                    .collect()
            }
            Source::Extend { require, max_cuts } => {
                let mut out = Vec::new();
                for p in b.parents(require) {
                    out.extend(extension_candidates(
                        &p,
                        max_cuts.unwrap_or(DEFAULT_MAX_CUTS),
                    )?);
                }
                out
            }
        };
        if candidates.len() as u64 > cap {
            return Err(Error::BadSpec(format!(
                "a source produced {} candidates, over the cap of {cap}",
                candidates.len()
            )));
        }
        b.absorb(candidates);
    }
    Ok(b.members)
}

/// The pool used by the verifier when none is given: small projective
/// restrictions, the catalog, relaxations, and the compositions and
/// extensions that reach matroids with a modular 4-point line.
pub fn default_spec() -> PoolSpec {
    let four_point = Filter {
        three_connected: true,
        modular_line: Some(4),
        ..Filter::default()
    };
    PoolSpec {
        sources: vec![
            Source::Catalog { names: None },
            Source::Pg {
                rank: 3,
                q: 3,
                min_size: None,
                max_size: 10,
            },
            Source::Pg {
                rank: 3,
                q: 4,
                min_size: None,
                max_size: 10,
            },
            Source::Pg {
                rank: 4,
                q: 2,
                min_size: None,
                max_size: 10,
            },
            Source::Pg {
                rank: 4,
                q: 3,
                min_size: None,
                max_size: 9,
            },
            Source::Pg {
                rank: 4,
                q: 4,
                min_size: None,
                max_size: 8,
            },
            Source::Relax {
                require: Filter {
                    max_size: Some(9),
                    ..Filter::default()
                },
            },
            Source::Gpc {
                with: default_gpc_partner(),
                require: Filter {
                    max_size: Some(10),
                    ..four_point.clone()
                },
            },
            Source::Extend {
                require: Filter {
                    min_size: Some(10),
                    max_size: Some(10),
                    ..four_point
                },
                max_cuts: None,
            },
        ],
        filter: Filter {
            simple: true,
            three_connected: true,
            ..Filter::default()
        },
        max_candidates: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> PoolSpec {
        PoolSpec::from_json(json).unwrap()
    }

    #[test]
    fn parses_and_rejects() {
        let s = spec(r#"{"sources":[{"kind":"catalog","names":["fano"]}]}"#);
        assert_eq!(s.sources.len(), 1);
        assert!(matches!(
            PoolSpec::from_json(r#"{"sources":[{"kind":"nope"}]}"#),
            Err(Error::BadSpec(_))
        ));
        assert!(matches!(
            generate_pool(&spec(r#"{"sources":[{"kind":"catalog","names":["zz"]}]}"#)),
            Err(Error::BadSpec(_))
        ));
        assert!(matches!(
            generate_pool(&spec(
                r#"{"sources":[{"kind":"pg","rank":3,"q":4,"max_size":16}],"max_candidates":10}"#
            )),
            Err(Error::BadSpec(_))
        ));
    }

    #[test]
    fn duplicates_are_dropped() {
        let s =
            spec(r#"{"sources":[{"kind":"catalog","names":["fano","f7","mk4","q3-trivial"]}]}"#);
        let pool = generate_pool(&s).unwrap();
        let names: Vec<&str> = pool.iter().map(|e| e.provenance.as_str()).collect();
        assert_eq!(names, ["catalog:fano", "catalog:mk4"]);
    }

    #[test]
    fn fano_plane_from_pg() {
        let s = spec(r#"{"sources":[{"kind":"pg","rank":3,"q":2,"min_size":7,"max_size":7}]}"#);
        let pool = generate_pool(&s).unwrap();
        assert_eq!(pool.len(), 1);
        assert!(pool[0].matroid.is_isomorphic(&catalog::fano()));
    }

    #[test]
    fn combinations_beyond_a_subset_mask() {
        let items: Vec<usize> = (0..40).collect();
        let mut out = Vec::new();
        push_combinations(&items, 2, &mut vec![99], &mut out);
        assert_eq!(out.len(), 780);
        assert_eq!(out[0], [99, 0, 1]);
        assert_eq!(out[779], [99, 38, 39]);
    }

    #[test]
    fn relaxing_the_fano_plane() {
        let s = spec(r#"{"sources":[{"kind":"catalog","names":["fano"]},{"kind":"relax"}]}"#);
        let pool = generate_pool(&s).unwrap();
        assert_eq!(pool.len(), 2);
        assert!(pool[1].matroid.is_isomorphic(&catalog::non_fano()));
        assert!(pool[1].provenance.starts_with("relax(catalog:fano; "));
    }

    #[test]
    fn record_round_trip() {
        let pool =
            generate_pool(&spec(r#"{"sources":[{"kind":"catalog","names":["p6"]}]}"#)).unwrap();
        let line = serde_json::to_string(&pool[0].record(0)).unwrap();
        let back: PoolRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back.provenance, "catalog:p6");
        assert_eq!(
            Matroid::from_document(&back.document).unwrap(),
            pool[0].matroid
        );
    }
}
