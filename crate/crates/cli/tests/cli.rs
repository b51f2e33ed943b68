//! End-to-end runs of the `spincheck` binary.

use std::process::{Command, Output};

use serde_json::Value;
use spincheck_core::builders::IntegralId;
use spincheck_core::catalog::{Catalog, CATALOG_DIR_VAR};

fn spincheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincheck")).args(args).env_remove(CATALOG_DIR_VAR).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn derive_third_order_equations() {
    let out = spincheck(&["derive", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# 29 determining equations (order 3)"), "{text}");
    assert!(text.lines().skip(1).all(|l| l.contains("V4") && l.contains("# order 3")));
}

#[test]
fn derive_with_substitution_and_json() {
    let out = spincheck(&["derive", "--order", "3", "--set", "V4=0"]);
    assert!(stdout(&out).starts_with("# 0 determining equations"));
    let out = spincheck(&["--report", "json", "derive", "--order", "3"]);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 29);
    assert!(lines.iter().all(|l| l["order"] == 3 && l["expr"].is_string()));
}

#[test]
fn verify_free_item_reports_zero_residuals() {
    let out = spincheck(&["--report", "json", "verify", "--case", "19", "--mode", "symbolic", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 6);
    for l in &lines {
        assert_eq!(l["id"], "19");
        assert_eq!(l["verdict"], "zero");
        assert_eq!(l["residual_terms"], 0);
        assert_eq!(l["mode"], "symbolic");
        assert!(l["wall_time_ms"].is_null());
        assert!(l["integral"].is_string());
    }
}

#[test]
fn gauge_entry_runs_nine_checks() {
    let out = spincheck(&["--report", "json", "verify", "--case", "G1", "--mode", "symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().all(|l| l["verdict"] == "zero" && l["wall_time_ms"].is_u64()));
}

#[test]
fn output_is_reproducible() {
    let args = ["--report", "json", "verify", "--case", "7,19", "--mode", "both", "--eps", "+1", "--no-timing"];
    let first = spincheck(&args);
    let second = spincheck(&args);
    let mut single = vec!["--jobs", "1"];
    single.extend(args);
    let third = spincheck(&single);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(spincheck(&["verify", "--case", "19", "--mode", "symbolic"]).status.code(), Some(0));
    assert_eq!(spincheck(&["verify", "--case", "21", "--mode", "symbolic"]).status.code(), Some(2));
    assert_eq!(spincheck(&["verify", "--case", "1", "--mode", "symbolic"]).status.code(), Some(1));
    assert_eq!(spincheck(&["verify", "--case", "31"]).status.code(), Some(3));
    assert_eq!(spincheck(&["verify", "--mode", "fast"]).status.code(), Some(3));
    assert_eq!(spincheck(&["derive", "--set", "V4"]).status.code(), Some(3));
    assert_eq!(spincheck(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn known_discrepancy_carries_diagnosis() {
    let out = spincheck(&["verify", "--case", "21", "--mode", "symbolic"]);
    let text = stdout(&out);
    assert!(text.contains("known-discrepancy"), "{text}");
    assert!(text.contains("alpha21"), "{text}");
}

#[test]
fn catalog_directory_overrides_entries() {
    let catalog = Catalog::embedded().unwrap();
    let mut entry = catalog.get("1".parse().unwrap()).unwrap().clone();
    entry.integrals.retain(|&i| i != IntegralId::Y(4));
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("1.toml"), entry.to_toml()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_spincheck"))
        .args(["verify", "--case", "1", "--mode", "symbolic"])
        .env(CATALOG_DIR_VAR, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("Y4"));
}

#[test]
fn gauge_check_passes() {
    let out = spincheck(&["gauge-check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# 14 checks, 0 failed"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn dump_prints_canonical_integral() {
    let out = spincheck(&["dump", "--integral", "Y6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).trim().is_empty());
    let out = spincheck(&["dump", "--case", "19"]);
    let text = stdout(&out);
    assert!(text.contains("### H"), "{text}");
    assert_eq!(spincheck(&["dump", "--integral", "Y99"]).status.code(), Some(3));
}

#[test]
fn symmetrize_single_weight() {
    let out = spincheck(&["symmetrize", "--set", "f2=1/r"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("hbar"), "{text}");
    assert!(!text.contains("f2"), "{text}");
    let symbolic = stdout(&spincheck(&["symmetrize", "--symbolic"]));
    assert!(symbolic.contains("f10"), "{symbolic}");
}

#[test]
fn symmetrize_reads_weights_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.txt");
    std::fs::write(&path, "# spin-orbit weight only\nf2 = 1/r\n").unwrap();
    let from_file = spincheck(&["symmetrize", path.to_str().unwrap()]);
    let from_flag = spincheck(&["symmetrize", "--set", "f2=1/r"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flag.stdout);
}
