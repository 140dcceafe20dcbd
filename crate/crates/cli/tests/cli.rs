use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel)
}

fn kodaira(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kodaira"))
        .args(args)
        .env_remove("KODAIRA_SEARCH_BUDGET")
        .output()
        .unwrap()
}

fn piped(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kodaira"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn temp_model(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_p14() {
    let p = fixture("catalog/p14.toml");
    let v = json(&kodaira(&["analyze", p.to_str().unwrap(), "--json"]));
    assert_eq!(v["configuration"], "[14*,1,1,1,1]");
    assert_eq!(v["euler_number"], 24);
    let inf = v["fibres"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(inf["place"], "inf");
    assert_eq!(inf["type"], "14*");
}

#[test]
fn analyze_insep18() {
    let p = fixture("catalog/insep18.toml");
    let v = json(&kodaira(&["analyze", p.to_str().unwrap(), "--json"]));
    assert_eq!(v["insep_degree"], 1);
    assert_eq!(v["euler_number"], 24);
}

#[test]
fn degenerate_model_exits_2() {
    let f = temp_model("version = 1\ncharacteristic = 5\nform = \"short\"\na4 = [0]\na6 = [0]\n");
    let out = kodaira(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_file_exits_1() {
    let f = temp_model("version = 1\ncharacteristic = \"five\"\n");
    assert_eq!(kodaira(&["analyze", f.path().to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn catalog_verify_all_and_one() {
    let out = kodaira(&["catalog", "verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let out = kodaira(&["catalog", "verify", "--entry", "P19", "--json"]);
    let v = json(&out);
    assert!(v.to_string().contains("P19"));
}

#[test]
fn corrupted_catalog_file_exits_1() {
    let src = std::fs::read_to_string(fixture("catalog/p14.toml")).unwrap();
    let f = temp_model(&src.replacen("a4 = [", "a4 = [[", 1));
    let out = kodaira(&["catalog", "verify", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrong_expectation_fails_verification() {
    let src = std::fs::read_to_string(fixture("catalog/p14.toml")).unwrap();
    let f = temp_model(&src.replace("\"[14*,1,1,1,1]\"", "\"[14*,2,1,1]\""));
    let out = kodaira(&["catalog", "verify", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let p = fixture("search/i14star_f3.toml");
    let p = p.to_str().unwrap();
    let one = kodaira(&["search", p, "--threads", "1", "--json"]);
    let four = kodaira(&["search", p, "--threads", "4", "--json"]);
    assert_eq!(json(&one), json(&four));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn search_over_budget_exits_3() {
    let p = fixture("search/i19_f3.toml");
    let out = kodaira(&["search", p.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_kodaira"))
        .args(["search", p.to_str().unwrap()])
        .env("KODAIRA_SEARCH_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn e9_frobenius_pipeline() {
    let e9 = fixture("catalog/e9.toml");
    let a = kodaira(&["transform", e9.to_str().unwrap(), "--op", "reduce-mod-p", "--p", "2"]);
    assert!(a.status.success());
    let b = piped(&["transform", "-", "--op", "frobenius"], &a.stdout);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let c = piped(&["transform", "-", "--op", "minimalize"], &b.stdout);
    assert!(c.status.success());
    let v = json(&piped(&["analyze", "-", "--json"], &c.stdout));
    assert_eq!(v["configuration"], "[18,2,2,2]");
    assert_eq!(v["insep_degree"], 1);
}

#[test]
fn reduction_at_bad_prime_exits_2() {
    let f = temp_model("version = 1\ncharacteristic = 0\nform = \"short\"\na4 = [\"1/3\", 1]\na6 = [0, 0, 1]\n");
    let out = kodaira(&["transform", f.path().to_str().unwrap(), "--op", "reduce-mod-p", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mobius_round_trip_preserves_configuration() {
    let p = fixture("catalog/e9.toml");
    let a = kodaira(&["transform", p.to_str().unwrap(), "--op", "mobius", "--matrix", "0,1,1,0"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = piped(&["transform", "-", "--op", "mobius", "--matrix", "0,1,1,0"], &a.stdout);
    assert!(b.status.success());
    let before = json(&kodaira(&["analyze", p.to_str().unwrap(), "--json"]));
    let after = json(&piped(&["analyze", "-", "--json"], &b.stdout));
    assert_eq!(before["configuration"], after["configuration"]);
    let mid = json(&piped(&["analyze", "-", "--json"], &a.stdout));
    assert_eq!(mid["configuration"], before["configuration"]);
}

#[test]
fn family_scan_fam13w() {
    let out = kodaira(&["family-scan", "fam13w", "--degree", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
