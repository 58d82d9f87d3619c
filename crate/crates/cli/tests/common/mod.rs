//! Shared fixtures for the CLI test targets.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Runs the CLI in-process: `args` excludes the program name; `{g}` in
/// any argument is replaced by the path of the named graph file.
pub fn run(graph: &str, args: &[&str]) -> singlat_cli::Output {
    let mut argv = vec!["singlat".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    argv.push("--graph".into());
    argv.push(data(graph));
    singlat_cli::run(argv)
}

/// Golden reports: (file stem, graph file, arguments).
pub const GOLDEN: &[(&str, &str, &[&str])] = &[
    ("a1_invariants", "a1.json", &["invariants"]),
    ("a2_invariants", "a2.json", &["invariants"]),
    ("e8_invariants", "e8.json", &["invariants"]),
    ("star3_invariants", "star3.json", &["invariants"]),
    ("e8_zmin", "e8.json", &["zmin"]),
    ("star3_lattice", "star3.json", &["lattice"]),
    ("star3_abel", "star3.json", &["abel", "--cycle", "c=1,a=1,b=1,d=1", "--chern", "c=1"]),
    (
        "nonrational_invariants",
        "nonrational.json",
        &["invariants", "--cycle", "c=2,a=1,b=1,d=1,e=1", "--chern", "c=1"],
    ),
    (
        "nonrational_tau_bound",
        "nonrational.json",
        &["tau", "--cycle", "c=2,a=1,b=1,d=1,e=1", "--chern", "a=1", "--mode", "bound", "--mu", "2"],
    ),
];

/// Compares `out` with the golden file, or rewrites it when
/// `SINGLAT_UPDATE_GOLDEN` is set.
pub fn check_golden(name: &str, out: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("SINGLAT_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, out).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == out {
        Ok(())
    } else {
        Err(format!("{name}: output differs from {}", path.display()))
    }
}
