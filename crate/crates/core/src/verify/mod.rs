//! Replays structural claims about matroids with modular lines as
//! executable checks over instance pools.
//!
//! Each claim filters the pool by its hypothesis and asserts its conclusion
//! per instance. A `pass` always carries a witness that can be re-checked
//! from the instance alone (minor witnesses, representations, or the
//! statement that an exhaustive search came back empty); a `fail` carries
//! the counterexample.

mod claims;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pool::PoolEntry;
use crate::search::DEFAULT_BUDGET;
use crate::subset::Subset;

pub use claims::{
    binary_check, line_preserving_minor, quaternary_check, ternary_check, Check, Halt,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// 3-connected with a modular 3-point line implies binary.
    ModularTriangle,
    /// 3-connected with a modular 4-point line implies ternary, quaternary,
    /// or an F7-minor together with an F7- or (F7-)*-minor.
    FourPointLine,
    /// With rank and corank at least 3: a U2,5-minor iff a U3,5-minor.
    U25U35,
    /// A 3-connected minor N of smaller rank survives in si(M / e) for some e.
    ContractibleElement,
    /// An F7-minor and no U2,5-minor: M is F7 or has an F7*-minor.
    FanoSplitter,
    /// A 3-connected minor N' containing the modular line and an N0-minor
    /// whose ground set covers the rest.
    LinePreservingMinor,
    /// With a modular 4-point line and a U2,5-minor: an F7-minor using three
    /// elements of the line.
    FanoThroughLine,
    /// In rank 3, an F7-restriction of M \ x using three points of a modular
    /// 4-point line through x is all of M \ x.
    FanoLineExtension,
    NoU26,
    NoU46,
    /// Minor-minimal with a modular 4-point line and a P6-minor: rank 4.
    P6RankFour,
    /// A modular 4-point line and a P6-minor force an F7- minor.
    P6ForcesNonFano,
    /// No F7- or (F7-)* minor: quaternary or a minor of S(5,6,12).
    QuaternaryOrSteiner,
    /// Deleting or contracting any element outside S ∪ T keeps κ(S, T) in at
    /// least one of the two minors.
    TutteLinking,
}

impl Claim {
    pub const ALL: [Claim; 14] = [
        Claim::ModularTriangle,
        Claim::FourPointLine,
        Claim::U25U35,
        Claim::ContractibleElement,
        Claim::FanoSplitter,
        Claim::LinePreservingMinor,
        Claim::FanoThroughLine,
        Claim::FanoLineExtension,
        Claim::NoU26,
        Claim::NoU46,
        Claim::P6RankFour,
        Claim::P6ForcesNonFano,
        Claim::QuaternaryOrSteiner,
        Claim::TutteLinking,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::ModularTriangle => "modular-triangle",
            Claim::FourPointLine => "four-point-line",
            Claim::U25U35 => "u25-u35",
            Claim::ContractibleElement => "contractible-element",
            Claim::FanoSplitter => "fano-splitter",
            Claim::LinePreservingMinor => "line-preserving-minor",
            Claim::FanoThroughLine => "fano-through-line",
            Claim::FanoLineExtension => "fano-line-extension",
            Claim::NoU26 => "no-u26",
            Claim::NoU46 => "no-u46",
            Claim::P6RankFour => "p6-rank-four",
            Claim::P6ForcesNonFano => "p6-forces-non-fano",
            Claim::QuaternaryOrSteiner => "quaternary-or-steiner",
            Claim::TutteLinking => "tutte-linking",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::BadParameters(format!("unknown claim {s:?}")))
    }
}

impl Serialize for Claim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Claim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub instance: String,
    pub verdict: Verdict,
    pub witness: Value,
    pub micros: u64,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Node ceiling for each individual search.
    pub budget: u64,
    /// Non-vacuous instances each claim needs before a run counts as
    /// covered.
    pub min_instances: usize,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Number of sampled (M, S, T) triples for the linking check.
    pub linking_samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: DEFAULT_BUDGET,
            min_instances: 3,
            jobs: 0,
            linking_samples: 600,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: Option<Claim>,
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub budget: usize,
}

impl ClaimSummary {
    pub fn of(claim: Claim, reports: &[VerificationReport]) -> Self {
        let mut s = ClaimSummary {
            claim: Some(claim),
            ..ClaimSummary::default()
        };
        for r in reports.iter().filter(|r| r.claim == claim) {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Vacuous => s.vacuous += 1,
                Verdict::Budget => s.budget += 1,
            }
        }
        s
    }

    /// Instances that met the hypothesis and were decided.
    pub fn non_vacuous(&self) -> usize {
        self.pass + self.fail
    }
}

/// Exit status of a run: 0 all pass, 1 a failure, 2 a search ran out of
/// budget, 3 some claim had too few non-vacuous instances.
pub fn exit_code(summaries: &[ClaimSummary], min_instances: usize) -> i32 {
    if summaries.iter().any(|s| s.fail > 0) {
        1
    } else if summaries.iter().any(|s| s.budget > 0) {
        2
    } else if summaries.iter().any(|s| s.non_vacuous() < min_instances) {
        3
    } else {
        0
    }
}

fn timed(claim: Claim, instance: String, f: impl FnOnce() -> Check) -> VerificationReport {
    let start = Instant::now();
    let check = f();
    let (verdict, witness) = match check {
        Ok((verdict, witness)) => (verdict, witness),
        Err(Halt::Budget(w)) => (Verdict::Budget, w),
        Err(Halt::Error(e)) => (Verdict::Fail, serde_json::json!({ "error": e.to_string() })),
    };
    VerificationReport {
        claim,
        instance,
        verdict,
        witness,
        micros: start.elapsed().as_micros() as u64,
    }
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// A sampled linking instance: pool index and two disjoint nonempty sets
/// that leave at least one element out.
fn linking_samples(pool: &[PoolEntry], config: &VerifyConfig) -> Vec<(usize, Subset, Subset)> {
    let eligible: Vec<usize> = (0..pool.len())
        .filter(|&i| pool[i].matroid.len() >= 3)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.linking_samples);
    if eligible.is_empty() {
        return out;
    }
    while out.len() < config.linking_samples {
        let i = *eligible.choose(&mut rng).expect("nonempty");
        let n = pool[i].matroid.len();
        let (mut s, mut t) = (Subset::EMPTY, Subset::EMPTY);
        for e in 0..n {
            match rng.gen_range(0..3) {
                0 => s = s.with(e),
                1 => t = t.with(e),
                _ => {}
            }
        }
        if !s.is_empty() && !t.is_empty() && (s | t) != pool[i].matroid.full() {
            out.push((i, s, t));
        }
    }
    out
}

/// Runs one claim over the pool, in pool order.
pub fn run_claim(
    claim: Claim,
    pool: &[PoolEntry],
    config: &VerifyConfig,
) -> Vec<VerificationReport> {
    in_pool(config.jobs, || {
        if claim == Claim::TutteLinking {
            let samples = linking_samples(pool, config);
            return samples
                .par_iter()
                .map(|&(i, s, t)| {
                    let m = &pool[i].matroid;
                    let instance = format!(
                        "{}; S={{{}}}; T={{{}}}",
                        pool[i].provenance,
                        m.names(s).join(","),
                        m.names(t).join(",")
                    );
                    timed(claim, instance, || claims::tutte_linking(m, s, t))
                })
                .collect();
        }
        pool.par_iter()
            .flat_map_iter(|entry| {
                claims::instances(claim, entry, config)
                    .into_iter()
                    .map(move |(instance, job)| timed(claim, instance, job))
            })
            .collect()
    })
}

/// Every claim over the same pool, claims in [`Claim::ALL`] order.
pub fn run_all(
    pool: &[PoolEntry],
    config: &VerifyConfig,
) -> (Vec<VerificationReport>, Vec<ClaimSummary>) {
    let mut reports = Vec::new();
    let mut summaries = Vec::new();
    for claim in Claim::ALL {
        let r = run_claim(claim, pool, config);
        summaries.push(ClaimSummary::of(claim, &r));
        reports.extend(r);
    }
    (reports, summaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<Claim>(&json).unwrap(), c);
        }
        assert!("all".parse::<Claim>().is_err());
    }

    #[test]
    fn exit_codes() {
        let ok = ClaimSummary {
            claim: None,
            pass: 3,
            ..ClaimSummary::default()
        };
        assert_eq!(exit_code(std::slice::from_ref(&ok), 3), 0);
        assert_eq!(exit_code(std::slice::from_ref(&ok), 4), 3);
        let budget = ClaimSummary {
            budget: 1,
            ..ok.clone()
        };
        assert_eq!(exit_code(&[ok.clone(), budget.clone()], 3), 2);
        let fail = ClaimSummary { fail: 1, ..ok };
        assert_eq!(exit_code(&[budget, fail], 3), 1);
    }
}
