use std::fs;
use std::process::{Command, Output};

fn modline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn cat_lists_and_prints() {
    let list = modline(&["cat"]);
    assert_eq!(list.status.code(), Some(0));
    assert!(stdout(&list).lines().any(|l| l == "fano"));

    let doc = modline(&["cat", "fano"]);
    assert_eq!(doc.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&doc)).unwrap();
    assert_eq!(v["name"], "fano");

    assert_eq!(modline(&["cat", "no-such-matroid"]).status.code(), Some(4));
}

#[test]
fn minor_exit_codes() {
    let found = modline(&["minor", "--host", "spike-ext10", "--pattern", "non-fano"]);
    assert_eq!(found.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&found)).unwrap();
    assert_eq!(v["found"], true);

    let absent = modline(&["minor", "--host", "non-fano", "--pattern", "fano"]);
    assert_eq!(absent.status.code(), Some(1));

    let tight = modline(&[
        "minor",
        "--host",
        "s5612",
        "--pattern",
        "u2,6",
        "--budget",
        "1",
    ]);
    assert_eq!(tight.status.code(), Some(2));
}

#[test]
fn minor_reads_files_and_must_use() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("host.json");
    fs::write(&host, stdout(&modline(&["cat", "fano"]))).unwrap();
    let host = host.to_str().unwrap();
    let out = modline(&["minor", "--host", host, "--pattern", "mk4", "--use", "a,b"]);
    assert_eq!(out.status.code(), Some(0));
    let bad = modline(&["minor", "--host", host, "--pattern", "mk4", "--use", "zz"]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn represent_exit_codes() {
    assert_eq!(
        modline(&["represent", "fano", "--q", "2"]).status.code(),
        Some(0)
    );
    assert_eq!(
        modline(&["represent", "fano", "--q", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        modline(&["represent", "fano", "--q", "6"]).status.code(),
        Some(4)
    );
}

#[test]
fn pool_streams_records() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"sources":[{"kind":"catalog","names":["fano","mk4"]},{"kind":"relax"}]}"#,
    )
    .unwrap();
    let out = modline(&["pool", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["provenance"], "catalog:fano");
    assert!(lines
        .iter()
        .any(|r| r["provenance"].as_str().unwrap().starts_with("relax(")));

    let shown = modline(&["pool", "default", "--show-spec"]);
    assert_eq!(shown.status.code(), Some(0));
    assert!(stdout(&shown).contains("\"kind\": \"extend\""));
}

#[test]
fn verify_writes_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"sources":[{"kind":"catalog","names":["fano","mk4","q3-z2"]}]}"#,
    )
    .unwrap();
    let report = dir.path().join("report.jsonl");
    let spec = spec.to_str().unwrap();
    let out = modline(&[
        "verify",
        "four-point-line",
        "--pool",
        spec,
        "--report",
        report.to_str().unwrap(),
        "--min-instances",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let reports = fs::read_to_string(&report).unwrap();
    assert_eq!(reports.lines().count(), 3);
    for line in reports.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["claim"], "four-point-line");
    }

    // too few non-vacuous instances under the default threshold
    let thin = modline(&["verify", "four-point-line", "--pool", spec]);
    assert_eq!(thin.status.code(), Some(3));

    assert_eq!(modline(&["verify", "bogus"]).status.code(), Some(4));
    assert_eq!(modline(&["verify"]).status.code(), Some(4));
    assert_eq!(modline(&["--help"]).status.code(), Some(0));
}
