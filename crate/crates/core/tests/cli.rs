use serde_json::Value;
use std::process::{Command, Output};

fn airy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_airy"))
        .args(args)
        .env_remove("AIRY_CACHE")
        .output()
        .expect("run airy")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn degree_of_cubic() {
    let out = airy(&["degree", "--p", "7", "--f", "0,0,0,1", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["predicted_degree"], 3);
    assert_eq!(v["swan"], 9);
    assert_eq!(v["rank"], 6);
    assert_eq!(v["model"]["J"], serde_json::json!([3]));
}

#[test]
fn composite_p_is_an_error() {
    let out = airy(&["degree", "--p", "4", "--f", "0,0,0,1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn t_outside_field_is_an_error() {
    let out = airy(&["fiber", "--p", "7", "--f", "0,0,0,1", "--e", "2", "--t", "49"]);
    assert_eq!(out.status.code(), Some(1));
    let out = airy(&["fiber", "--p", "7", "--f", "0,0,0,1", "--e", "2", "--t", "48"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["weight_ok"], true);
}

#[test]
fn budget_exhaustion_exits_with_two() {
    let out = airy(&["lfunction", "--p", "7", "--f", "0,0,0,1", "--k", "3", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lfunction_json_out_is_deterministic_with_and_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    let cache = dir.path().join("cache");
    let base = ["lfunction", "--p", "7", "--f", "0,0,0,1", "--k", "3", "--json-out"];
    let run = |path: &std::path::Path, extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.push(path.to_str().unwrap());
        args.extend_from_slice(extra);
        let out = airy(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let first = run(&a, &[]);
    assert_eq!(first, run(&b, &["--cache", cache.to_str().unwrap()]));
    assert_eq!(first, run(&c, &["--cache", cache.to_str().unwrap()]));
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["observed_degree"], 2);
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
}

#[test]
fn trivial_factor_matches_m4() {
    let out = airy(&["trivial-factor", "--p", "7", "--f", "0,0,0,1", "--k", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["Q"][1]["coords"][0], "-49");
}

#[test]
fn scan_reports_infinite_monodromy_for_p_7() {
    let out = airy(&["scan-monodromy", "--p", "7", "--f", "0,0,0,1", "--max-e", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["status"], "infinite_certain");
    assert_eq!(v["sperber_slopes"], serde_json::json!(["1/3", "2/3"]));
}
