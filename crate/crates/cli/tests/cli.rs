use std::process::Command;

use mil_cli::recheck::{recheck, verify};
use mil_cli::report::{RunReport, Status, Witness};
use mil_cli::scenarios::{run, Params, SCENARIOS};

fn mil(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mil")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let value: serde_json::Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn assert_valid(report: &str) {
    let v: serde_json::Value = serde_json::from_str(report).unwrap();
    let s = schema();
    if let Err(errors) = s.validate(&v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("report does not match schema: {msgs:?}");
    };
}

#[test]
fn same_seed_gives_identical_json() {
    let p = Params { seed: 7, ..Params::default() };
    for name in ["example-gu3", "family-IV"] {
        let a = run(name, &p, 1, false).unwrap().to_json();
        let b = run(name, &p, 1, false).unwrap().to_json();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn parallel_runs_match_sequential() {
    let p = Params::default();
    let names = ["example-abelian-ii", "family-II", "family-III-a", "family-III-b", "family-IV"];
    for name in names {
        let seq = run(name, &p, 1, false).unwrap();
        assert_eq!(seq.status, Status::Pass, "{name}");
    }
    let (code, out, _) = mil(&["run", "family-III-b", "--report", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), run("family-III-b", &p, 4, false).unwrap().to_json());
}

#[test]
fn all_is_ordered_by_name_and_jobs_do_not_matter() {
    let (code, one, _) = mil(&["run", "all", "--report", "json", "--jobs", "1"]);
    assert_eq!(code, 0, "{one}");
    let (_, four, _) = mil(&["run", "all", "--report", "json", "--jobs", "4"]);
    assert_eq!(one, four);
    assert_valid(&one);
    let r: RunReport = serde_json::from_str(&one).unwrap();
    let names: Vec<&str> = r.scenarios.iter().map(|s| s.scenario.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), SCENARIOS.len());
}

#[test]
fn reports_validate_against_schema() {
    for name in ["example-gu3", "cst-serre-sanity"] {
        let r = run(name, &Params::default(), 1, true).unwrap();
        assert_valid(&r.to_json());
        assert!(r.scenarios[0].elapsed_ms.is_some());
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let r = run("family-II", &Params::default(), 1, false).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    v["scenarios"][0]["claims"][0]["status"] = "maybe".into();
    assert!(!schema().is_valid(&v));
    let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    v["scenarios"][0].as_object_mut().unwrap().remove("fields");
    assert!(!schema().is_valid(&v));
}

#[test]
fn witnesses_recheck() {
    let r = run("example-gu3", &Params::default(), 1, false).unwrap();
    let checked = recheck(&r);
    let kinds: Vec<&Witness> = checked.scenarios[0].claims.iter().filter_map(|c| c.witness.as_ref()).collect();
    assert!(kinds.iter().any(|w| matches!(w, Witness::DirectSummand { .. })));
    assert!(kinds.iter().any(|w| matches!(w, Witness::Parameters { .. })));
    assert!(kinds.iter().any(|w| matches!(w, Witness::Contraction { .. })));
    assert!(kinds.iter().any(|w| matches!(w, Witness::Invariants { .. })));
    for c in &checked.scenarios[0].claims {
        assert_eq!(c.recheck, c.witness.as_ref().map(|_| true), "{}", c.id);
    }
    assert_eq!(checked.status, Status::Pass);
}

#[test]
fn tampered_witnesses_fail_recheck() {
    let r = run("example-gu3", &Params::default(), 1, false).unwrap();
    let mut bad = r.clone();
    for c in &mut bad.scenarios[0].claims {
        match &mut c.witness {
            Some(Witness::DirectSummand { witness, .. }) => *witness = "x1^9".into(),
            Some(Witness::Parameters { polynomials, .. }) => polynomials[2] = "x3^8".into(),
            Some(Witness::Contraction { polynomial, .. }) => *polynomial = "x1^4".into(),
            Some(Witness::Invariants { polynomials, .. }) => polynomials.push("x2".into()),
            None => {}
        }
    }
    for c in &bad.scenarios[0].claims {
        if let Some(w) = &c.witness {
            assert!(!verify(w).unwrap_or(false), "{}", c.id);
        }
    }
    let checked = recheck(&bad);
    assert_eq!(checked.status, Status::Fail);
}

#[test]
fn exit_codes() {
    assert_eq!(mil(&["run", "family-II"]).0, 0);
    assert_eq!(mil(&["run", "no-such-scenario"]).0, 64);
    assert_eq!(mil(&["run", "family-II", "--report", "yaml"]).0, 64);
    assert_eq!(mil(&["run", "family-II", "--q", "6"]).0, 64);
    assert_eq!(mil(&["run", "all", "--q", "3"]).0, 64);
    assert_eq!(mil(&["run", "family-II", "colour=blue"]).0, 64);
    assert_eq!(mil(&["frobnicate"]).0, 64);
    assert_eq!(mil(&["--help"]).0, 0);
    // A graded piece budget too small for the degree 12 windows.
    let (code, out, _) = mil(&["run", "example-gu3", "--budget", "20"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("[INCONCLUSIVE]"));
    let (code, out, _) = mil(&["run", "example-gu3", "--max-degree", "8"]);
    assert_eq!(code, 3, "{out}");
}

#[test]
fn key_value_parameters() {
    let (code, a, _) = mil(&["run", "example-abelian-ii", "q=3", "--report", "json"]);
    assert_eq!(code, 0);
    let (_, b, _) = mil(&["run", "example-abelian-ii", "--q", "3", "--report", "json"]);
    assert_eq!(a, b);
    assert!(a.contains("\"q\": 3"));
}

#[test]
fn text_report_lists_claims() {
    let (code, out, _) = mil(&["run", "family-IV", "--p", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] iv.p3.sigma"));
    assert!(out.trim_end().ends_with("overall: PASS"));
}

#[test]
fn list_has_every_scenario_with_an_anchor() {
    let (code, out, _) = mil(&["list", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v.iter().map(|s| s["name"].as_str().unwrap()).collect();
    for s in [
        "example-gu3",
        "example-abelian-i",
        "example-abelian-ii",
        "family-I",
        "family-II",
        "family-III-a",
        "family-III-b",
        "family-IV",
        "thm1-inheritance",
        "cst-serre-sanity",
    ] {
        assert!(names.contains(&s), "{s}");
    }
    assert!(v.iter().all(|s| !s["anchor"].as_str().unwrap().is_empty()));
    let gu3 = v.iter().find(|s| s["name"] == "example-gu3").unwrap();
    assert!(gu3["anchor"].as_str().unwrap().contains("fixing e3"));
    let iv = v.iter().find(|s| s["name"] == "family-IV").unwrap();
    assert!(iv["anchor"].as_str().unwrap().contains("V^sigma = U"));
    let (_, text, _) = mil(&["list"]);
    assert!(text.contains("all"));
}

#[test]
fn group_command() {
    let (code, out, _) = mil(&["group", "gu3:q=2:sub=Htilde"]);
    assert_eq!((code, out.trim()), (0, "8"));
    let (code, out, _) = mil(&["group", "symmetric:p=2:m=6:sub=H", "--describe"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["group"]["order"], 8);
    assert_eq!(v["census"]["transvections"], 3);
    assert_eq!(v["abelian"], true);
    let data: mil_core::group::GroupData = serde_json::from_value(v["group"].clone()).unwrap();
    assert_eq!(mil_core::MatrixGroup::from_data(&data).unwrap().order(), 8);
    assert_eq!(mil(&["group", "nonsense:q=2"]).0, 64);
}

#[test]
fn cap_override_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_mil"))
        .args(["run", "family-IV", "--p", "3"])
        .env("MIL_CAP", "100")
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cap"), "{text}");
}
