//! End-to-end tests of the binary: schemas, determinism with a warm
//! cache, corruption recovery, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modcurve"))
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data/35_2_a_b.json")
        .to_string_lossy()
        .into_owned()
}

fn run_with_cache(dir: &std::path::Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .env("MODCURVE_CACHE_DIR", dir)
        .output()
        .expect("binary runs")
}

fn stdout_ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn curve_info_schema_and_values() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(tmp.path(), &["curve", "info", "--gamma1", "23"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&out)).unwrap();
    assert_eq!(v["genus"], 12);
    assert_eq!(v["cusps"], 22);
    assert_eq!(v["sl2_index"], 528);
}

#[test]
fn cusps_tsv_widths() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(tmp.path(), &["cusps", "--gamma1", "5"]);
    let text = stdout_ok(&out);
    let mut widths: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    widths.sort_unstable();
    assert_eq!(widths, ["1", "1", "5", "5"]);
}

#[test]
fn theta_congruence_gamma1_11() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(
        tmp.path(),
        &["theta", "congruence", "--gamma1", "11", "--all"],
    );
    let text = stdout_ok(&out);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("character"))
        .collect();
    assert_eq!(rows.len(), 4);
    let congruent = rows.iter().filter(|r| r.contains("\tcongruence")).count();
    assert_eq!(congruent, 1);
    assert!(rows.iter().all(|r| r.ends_with("yes")));
}

#[test]
fn vanishing_profile_of_fixture_difference() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(
        tmp.path(),
        &["vanishing", "--form", &fixture(), "--coeffs", "-1,1"],
    );
    let text = stdout_ok(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert_eq!(row.split('\t').nth(2).unwrap(), "2");
    }
}

#[test]
fn warm_cache_runs_are_byte_identical_and_corruption_is_survived() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["curve", "info", "--gamma1", "11"];
    let first = stdout_ok(&run_with_cache(tmp.path(), &args));
    let second = stdout_ok(&run_with_cache(tmp.path(), &args));
    assert_eq!(first, second, "warm cache changed the report");
    // Truncate every cache entry; output must still be identical.
    for entry in std::fs::read_dir(tmp.path()).unwrap().flatten() {
        let p = entry.path();
        let body = std::fs::read_to_string(&p).unwrap();
        std::fs::write(&p, &body[..body.len() / 2]).unwrap();
    }
    let third = stdout_ok(&run_with_cache(tmp.path(), &args));
    assert_eq!(first, third, "corrupted cache leaked into the report");
    // Delta cache: warm rerun identical after corruption too.
    let dargs = ["weight1", "delta", "--prec", "12"];
    let d1 = stdout_ok(&run_with_cache(tmp.path(), &dargs));
    for entry in std::fs::read_dir(tmp.path()).unwrap().flatten() {
        std::fs::write(entry.path(), "{not json").unwrap();
    }
    let d2 = stdout_ok(&run_with_cache(tmp.path(), &dargs));
    assert_eq!(d1, d2);
    assert!(d1.contains("2\t-24"));
}

#[test]
fn cache_purge_counts_entries() {
    let tmp = tempfile::tempdir().unwrap();
    stdout_ok(&run_with_cache(tmp.path(), &["curve", "info", "--gamma1", "5"]));
    let out = run_with_cache(tmp.path(), &["cache", "purge"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&out)).unwrap();
    assert_eq!(v["removed"], 1);
}

#[test]
fn expand_json_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(
        tmp.path(),
        &[
            "expand", "--form", &fixture(), "--cusp", "1:1:1", "--prec", "6", "--json",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&out)).unwrap();
    assert_eq!(v["denom"], 1);
    assert_eq!(v["coeffs"]["1"], "1");
    assert_eq!(v["field"]["poly"].as_array().unwrap().len(), 3);
}

#[test]
fn sqrt_reports_extension_and_monic_series() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(
        tmp.path(),
        &["sqrt", "--form", &fixture(), "--coeffs", "-1,1"],
    );
    let text = stdout_ok(&out);
    assert!(text.contains("# needs_extension true"));
    assert!(text.contains("# bundle_trivial true"));
    assert!(text.contains("# series monic"));
    assert!(text.lines().any(|l| l == "1\t\"1\""));
}

#[test]
fn sp4_member_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_with_cache(
        tmp.path(),
        &[
            "sp4",
            "member",
            "--matrix",
            "[[0,1,0,0],[-1,0,0,0],[0,0,1,0],[0,0,0,1]]",
            "--modulus",
            "5",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&out)).unwrap();
    assert_eq!(v["symplectic"], true);
    assert_eq!(v["in_level"], false);
    assert_eq!(v["in_plus"], true);
}

#[test]
fn distinct_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    // Invalid spec: usage class.
    let out = run_with_cache(tmp.path(), &["curve", "info", "--gamma1", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // A single newform has order 1 at ∞: the order-≥2 precondition fails.
    let out = run_with_cache(tmp.path(), &["sqrt", "--form", &fixture(), "--coeffs", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Asking beyond the stored coefficients: series class.
    let out = run_with_cache(
        tmp.path(),
        &[
            "expand", "--form", &fixture(), "--cusp", "1:1:1", "--prec", "100",
        ],
    );
    assert_eq!(out.status.code(), Some(5));
    // Missing file: I/O class.
    let out = run_with_cache(
        tmp.path(),
        &["vanishing", "--form", "/nonexistent.json"],
    );
    assert_eq!(out.status.code(), Some(7));
}
