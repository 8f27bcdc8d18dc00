use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3pretzel"))
        .args(args)
        .env_remove("SL3PRETZEL_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn cache_entries(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn compute_prints_normalized_8_5() {
    let o = run(&["compute", "--family", "odd-odd-even", "--params", "1,1,1", "--n", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("J = q^{-11} - q^{-10} + q^{-9} - 2q^{-7}"), "{out}");
    assert!(out.contains("q^{11}·J = 1 - q + q^{2} - 2q^{4} + q^{5} - 2q^{6} + q^{7} + q^{8} + q^{10}"), "{out}");
}

#[test]
fn compute_range_in_json() {
    let o = run(&["--format", "json", "compute", "--family", "torus", "--params", "-3", "--n-range", "1..2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], "torus");
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert_eq!(results[0]["n"], 1);
    assert_eq!(results[1]["writhe_used"], -3);
    assert!(results[0]["value"]["terms"].is_array());
}

#[test]
fn tail_through_order_seven() {
    let o = run(&["tail", "--family", "odd-odd-even", "--params", "1,1,1", "--order", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("tail = 1 - q - 2q^{4} + q^{5} + q^{6} + q^{7} + O(q^8)"), "{out}");
    assert!(out.contains("verified through q^7"), "{out}");
}

#[test]
fn tail_json_has_report_fields() {
    let o = run(&["--format", "json", "tail", "--family", "odd-odd-even", "--params", "1,1,1", "--order", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verified_order"], 3);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["stable_prefix"], serde_json::json!(["1", "-1", "0", "0"]));
}

#[test]
fn tail_outside_the_knot_family_is_a_config_error() {
    let o = run(&["tail", "--family", "torus", "--params", "3", "--order", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reproduces_fixtures() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("all fixtures reproduced"));
    assert!(out.contains("listed correction"));
}

#[test]
fn oracle_check_default_list_agrees() {
    let o = run(&["oracle-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("MISMATCH"));
}

#[test]
fn oracle_check_beyond_clasp_bound_needs_override() {
    let o = run(&["oracle-check", "--family", "torus", "--params", "3", "--oracle-max-n", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identities_pass() {
    let o = run(&["identities", "--max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exactly the triples with b = c: true"));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["compute", "--family", "nope", "--n", "1"][..],
        &["compute", "--family", "odd-odd-even", "--params", "1,1", "--n", "1"],
        &["compute", "--family", "odd-odd-even", "--params", "1,x,1", "--n", "1"],
        &["compute", "--family", "odd-odd-even", "--params", "1,1,1", "--n", "0"],
        &["compute", "--family", "odd-odd-even", "--params", "1,1,1", "--n-range", "3..1"],
        &["compute", "--family", "odd-odd-even", "--params", "1,1,1"],
        &["tail", "--family", "odd-odd-even", "--params", "1,1,1", "--order", "-1"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "compute", "--family", "odd-odd-even", "--params", "1,1,1", "--n", "2"];
    let first = run(&args);
    assert!(first.status.success());
    let entries = cache_entries(dir.path());
    assert_eq!(entries.len(), 1);

    // Replace the cached value with a recognizable one: a hit must return it.
    let mut entry: serde_json::Value = serde_json::from_str(&fs::read_to_string(&entries[0]).unwrap()).unwrap();
    entry["value"]["value"] = serde_json::json!({ "terms": [[0, "42"]] });
    fs::write(&entries[0], entry.to_string()).unwrap();
    let hit = run(&args);
    assert!(stdout(&hit).contains("J = 42"), "{}", stdout(&hit));

    // A corrupted entry is ignored, recomputed and rewritten.
    fs::write(&entries[0], b"garbage").unwrap();
    let again = run(&args);
    assert!(again.status.success());
    assert_eq!(stdout(&again), stdout(&first));
    assert!(serde_json::from_str::<serde_json::Value>(&fs::read_to_string(&entries[0]).unwrap()).is_ok());
}

#[test]
fn cache_dir_from_environment_and_no_cache_flag() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compute", "--family", "torus", "--params", "3", "--n", "1"];
    let o = Command::new(env!("CARGO_BIN_EXE_sl3pretzel"))
        .args(["--no-cache"])
        .args(args)
        .env("SL3PRETZEL_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(cache_entries(dir.path()).is_empty());
    let o = Command::new(env!("CARGO_BIN_EXE_sl3pretzel")).args(args).env("SL3PRETZEL_CACHE", dir.path()).output().unwrap();
    assert!(o.status.success());
    assert_eq!(cache_entries(dir.path()).len(), 1);
}

#[test]
fn unusable_cache_dir_warns_and_still_computes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("not-a-dir");
    fs::write(&file, b"").unwrap();
    let o = run(&["--cache-dir", file.to_str().unwrap(), "compute", "--family", "torus", "--params", "3", "--n", "1"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("running without cache"));
    assert!(stdout(&o).contains("J = "));
}
