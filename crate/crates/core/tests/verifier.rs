use modline::catalog;
use modline::pool::{generate_pool, PoolEntry, PoolSpec};
use modline::search::{Outcome, DEFAULT_BUDGET};
use modline::verify::{
    exit_code, line_preserving_minor, run_all, run_claim, Claim, ClaimSummary, Verdict,
    VerificationReport, VerifyConfig,
};
use serde_json::json;

fn entry(name: &str) -> PoolEntry {
    PoolEntry {
        matroid: catalog::by_name(name).unwrap(),
        provenance: format!("catalog:{name}"),
    }
}

fn run(claim: Claim, names: &[&str]) -> Vec<VerificationReport> {
    let pool: Vec<PoolEntry> = names.iter().map(|n| entry(n)).collect();
    run_claim(claim, &pool, &VerifyConfig::default())
}

fn only(claim: Claim, name: &str) -> VerificationReport {
    let mut r = run(claim, &[name]);
    assert_eq!(r.len(), 1, "{claim} on {name}");
    r.remove(0)
}

#[test]
fn modular_triangle_examples() {
    let f = only(Claim::ModularTriangle, "fano");
    assert_eq!(f.verdict, Verdict::Pass);
    assert_eq!(
        only(Claim::ModularTriangle, "u2,5").verdict,
        Verdict::Vacuous
    );
    assert_eq!(
        only(Claim::ModularTriangle, "non-fano").verdict,
        Verdict::Vacuous
    );
}

#[test]
fn four_point_line_outcomes() {
    let spike = only(Claim::FourPointLine, "spike-ext10");
    assert_eq!(spike.verdict, Verdict::Pass);
    assert_eq!(spike.witness["outcomes"], json!(["fano-and-non-fano"]));
    assert_eq!(spike.witness["line"], json!(["t", "x4", "y4", "e"]));
    assert_eq!(spike.witness["non-fano-itself"], true);

    let q = only(Claim::FourPointLine, "q3-z2");
    assert_eq!(q.verdict, Verdict::Pass);
    assert_eq!(q.witness["outcomes"], json!(["ternary"]));

    assert_eq!(only(Claim::FourPointLine, "fano").verdict, Verdict::Vacuous);
}

#[test]
fn glued_fano_planes_are_quaternary_only() {
    let spec = PoolSpec::from_json(
        r#"{
            "sources": [
                {"kind": "pg", "rank": 3, "q": 3, "min_size": 7, "max_size": 7},
                {"kind": "gpc", "require": {"three_connected": true, "modular_line": 4}}
            ],
            "filter": {"simple": true, "three_connected": true}
        }"#,
    )
    .unwrap();
    let pool = generate_pool(&spec).unwrap();
    let reports = run_claim(Claim::FourPointLine, &pool, &VerifyConfig::default());
    let glued: Vec<&VerificationReport> = reports
        .iter()
        .filter(|r| r.instance.starts_with("gpc(") && r.verdict == Verdict::Pass)
        .collect();
    assert!(!glued.is_empty());
    assert!(glued
        .iter()
        .any(|r| r.witness["outcomes"] == json!(["quaternary"])));
    assert!(reports.iter().all(|r| r.verdict != Verdict::Fail));
}

#[test]
fn claim_examples() {
    assert_eq!(only(Claim::FanoSplitter, "fano").verdict, Verdict::Pass);
    assert!(matches!(
        only(Claim::U25U35, "p6").verdict,
        Verdict::Pass | Verdict::Vacuous
    ));
    assert_eq!(only(Claim::U25U35, "s5612").verdict, Verdict::Pass);
    assert_eq!(
        only(Claim::ContractibleElement, "s5612").verdict,
        Verdict::Pass
    );
    for claim in [
        Claim::NoU26,
        Claim::NoU46,
        Claim::FanoThroughLine,
        Claim::P6ForcesNonFano,
    ] {
        assert_eq!(only(claim, "spike-ext10").verdict, Verdict::Pass, "{claim}");
    }
    assert_eq!(
        only(Claim::QuaternaryOrSteiner, "spike-ext10").verdict,
        Verdict::Vacuous
    );
}

#[test]
fn line_preserving_minor_examples() {
    let m = catalog::spike_extension10().unwrap();
    let line = m.mask(["t", "x4", "y4", "e"]).unwrap();
    for name in ["u2,5", "u1,1", "p6", "non-fano"] {
        let n0 = catalog::by_name(name).unwrap();
        let Outcome::Found((c, y, w)) =
            line_preserving_minor(&m, line, &n0, DEFAULT_BUDGET).unwrap()
        else {
            panic!("no line-preserving minor for {name}");
        };
        assert!(c.is_disjoint(line) && y.is_disjoint(line), "{name}");
        let free = m.full() - line - c;
        let n = m.minor(c, free - y).unwrap();
        assert!(w.validate(&n, &n0), "{name}");
    }
    // small N0: M|L itself already works
    let u11 = catalog::uniform(1, 1).unwrap();
    let Outcome::Found((c, y, _)) = line_preserving_minor(&m, line, &u11, DEFAULT_BUDGET).unwrap()
    else {
        panic!("no line-preserving minor for U1,1");
    };
    assert!(c.is_empty() && y.is_empty());
}

#[test]
fn fano_line_extension_example() {
    // F7 with a point added on one of its lines, inside PG(2,4)
    let spec = PoolSpec::from_json(
        r#"{
            "sources": [{"kind": "pg", "rank": 3, "q": 4, "min_size": 8, "max_size": 8}],
            "filter": {"simple": true}
        }"#,
    )
    .unwrap();
    let pool = generate_pool(&spec).unwrap();
    let reports = run_claim(Claim::FanoLineExtension, &pool, &VerifyConfig::default());
    let s = ClaimSummary::of(Claim::FanoLineExtension, &reports);
    assert_eq!((s.pass, s.fail), (1, 0));
}

#[test]
fn reports_are_deterministic() {
    let names = ["fano", "p6", "q3-z2", "spike-ext10", "mk4"];
    let pool: Vec<PoolEntry> = names.iter().map(|n| entry(n)).collect();
    let config = VerifyConfig {
        linking_samples: 50,
        jobs: 2,
        ..VerifyConfig::default()
    };
    let strip = |r: Vec<VerificationReport>| -> Vec<(String, Verdict, String)> {
        r.into_iter()
            .map(|r| (r.instance, r.verdict, r.witness.to_string()))
            .collect()
    };
    let (a, sa) = run_all(&pool, &config);
    let (b, sb) = run_all(&pool, &VerifyConfig { jobs: 1, ..config });
    assert_eq!(strip(a), strip(b));
    assert_eq!(sa, sb);
    assert!(sa.iter().all(|s| s.fail == 0 && s.budget == 0));
    // a five-instance pool cannot cover every claim
    assert_eq!(exit_code(&sa, 3), 3);
}

#[test]
fn report_lines_round_trip() {
    for r in run(Claim::FourPointLine, &["q3-z2", "u2,5"]) {
        let line = serde_json::to_string(&r).unwrap();
        assert!(line.contains("\"claim\":\"four-point-line\""));
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
