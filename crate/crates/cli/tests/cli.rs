mod common;

use common::{check_golden, run, GOLDEN};
use serde_json::Value;
use singlat_cli::{exit_code, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_INTERNAL, EXIT_REGION_TOO_LARGE, EXIT_VALIDATION};
use singlat_core::Error;

fn parsed(out: &singlat_cli::Output) -> Value {
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

fn error_code(out: &singlat_cli::Output) -> String {
    parsed(out)["error"]["code"].as_str().unwrap().to_string()
}

#[test]
fn golden_reports_match() {
    for (name, graph, args) in GOLDEN {
        let out = run(graph, args);
        assert_eq!(out.code, 0, "{name}: {}", out.stdout);
        check_golden(name, &out.stdout).unwrap();
    }
}

#[test]
fn output_does_not_depend_on_threads() {
    for (name, graph, args) in GOLDEN {
        let base = run(graph, args).stdout;
        let mut seq = args.to_vec();
        seq.push("--sequential");
        assert_eq!(run(graph, &seq).stdout, base, "{name} sequential");
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        assert_eq!(run(graph, &one).stdout, base, "{name} one thread");
    }
}

#[test]
fn a1_invariants_values() {
    let v = parsed(&run("a1.json", &["invariants"]));
    assert_eq!(v["generic"]["pg"], 0);
    assert_eq!(v["generic"]["rational"], true);
    assert_eq!(v["provenance"]["zmin"], "BOTH_AGREE");
}

#[test]
fn validation_failure_exits_2() {
    let out = run("bad.json", &["validate"]);
    assert_eq!(out.code, EXIT_VALIDATION);
    let v = parsed(&out);
    assert_eq!(v["error"]["failures"][0], "NOT_NEGATIVE_DEFINITE");
    assert!(out.stderr.is_some());
    // every other command validates first
    assert_eq!(run("bad.json", &["zmin"]).code, EXIT_VALIDATION);
}

#[test]
fn input_errors_exit_1() {
    let out = run("a2.json", &["abel", "--cycle", "x=1", "--chern", "v0=1"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_INPUT, "UNKNOWN_VERTEX"));
    let out = run("missing.json", &["zmin"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_INPUT, "IO"));
    let out = run("a2.json", &["frobnicate"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_INPUT, "PARSE"));
    let out = run("a2.json", &["verify", "--check", "nope"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run("a2.json", &["tau", "--cycle", "v0=1", "--chern", "v0=-1"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_INPUT, "PARSE"));
}

#[test]
fn region_too_large_exits_3() {
    let out = run("e8.json", &["minchi", "--region", "box", "--lower", "", "--upper", "v0=1,v1=1,v2=1,v3=1", "--enum-limit", "10"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_REGION_TOO_LARGE, "REGION_TOO_LARGE"));
}

#[test]
fn oracle_over_budget_falls_back_to_formula() {
    let out = run("e8.json", &["zmin", "--enum-limit", "10"]);
    assert_eq!(out.code, 0);
    assert_eq!(parsed(&out)["provenance"]["zmin"], "FORMULA");
}

#[test]
fn verify_reports_region_too_large_per_check() {
    let out = run("e8.json", &["verify", "--enum-limit", "10"]);
    assert_eq!(out.code, EXIT_REGION_TOO_LARGE);
    let v = parsed(&out);
    assert_eq!(v["all_agree"], false);
    let statuses: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert_eq!(statuses.len(), 5);
    assert!(statuses.iter().all(|s| *s == "AGREE" || *s == "REGION_TOO_LARGE"));
    assert!(statuses.contains(&"REGION_TOO_LARGE"));
}

#[test]
fn hypothesis_errors_exit_4() {
    let out = run("a2.json", &["tau", "--cycle", "v0=1,v1=1", "--chern", "v0=1", "--mode", "generic"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_HYPOTHESIS, "CMIN_VIOLATION"));
    let out = run("a1.json", &["tau", "--cycle", "v0=2", "--chern", "v0=1", "--mode", "bound"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_HYPOTHESIS, "T_NEGATIVE"));
    let out = run("a2.json", &["abel", "--cycle", "v0=1", "--chern", "v1=1"]);
    assert_eq!((out.code, error_code(&out).as_str()), (EXIT_HYPOTHESIS, "PRECONDITION_SUPPORT"));
}

#[test]
fn internal_class_maps_to_5() {
    for e in [
        Error::Internal("x".into()),
        Error::NotALattice("x".into()),
        Error::Overflow("x"),
    ] {
        assert_eq!(exit_code(&e), EXIT_INTERNAL);
    }
}

#[test]
fn verify_all_agree_on_small_graphs() {
    for g in ["a1.json", "a2.json", "star3.json", "nonrational.json"] {
        let out = run(g, &["verify"]);
        assert_eq!(out.code, 0, "{g}: {}", out.stdout);
        assert_eq!(parsed(&out)["all_agree"], true);
    }
}

#[test]
fn binary_splits_streams() {
    let bin = env!("CARGO_BIN_EXE_singlat");
    let ok = std::process::Command::new(bin)
        .args(["zmin", "--graph", &common::data("a2.json")])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stderr.is_empty());
    let bad = std::process::Command::new(bin)
        .args(["validate", "--graph", &common::data("bad.json")])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_VALIDATION));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["error"]["code"], "INVALID_GRAPH");
    assert!(String::from_utf8_lossy(&bad.stderr).contains("NOT_NEGATIVE_DEFINITE"));
}

#[test]
fn env_limit_is_overridden_by_flag() {
    // the flag wins over SINGLAT_ENUM_LIMIT
    let bin = env!("CARGO_BIN_EXE_singlat");
    let run_with = |extra: &[&str]| {
        std::process::Command::new(bin)
            .args(["minchi", "--region", "box", "--lower", "", "--upper", "v0=1,v1=1,v2=1,v3=1"])
            .args(["--graph", &common::data("e8.json")])
            .args(extra)
            .env("SINGLAT_ENUM_LIMIT", "10")
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run_with(&[]), Some(EXIT_REGION_TOO_LARGE));
    assert_eq!(run_with(&["--enum-limit", "10000000"]), Some(0));
}
