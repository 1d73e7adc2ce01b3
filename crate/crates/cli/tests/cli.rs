use std::process::{Command, Output};

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).env_remove("MZV_CORPUS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_and_reduce() {
    let o = mzv(&["eval", "dz(2,1)"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("1.20205690315959428539973816"), "{}", stdout(&o));
    let o = mzv(&["--format", "json", "eval", "zeta(s)", "--set", "s=3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact"], false);
    assert!(v["value"].as_str().unwrap().starts_with("1.2020569"));
    let o = mzv(&["reduce", "dz(3,2)"]);
    assert_eq!(stdout(&o).trim(), "1/2*pi^2*z3 - 11/2*z5");
    assert_eq!(stdout(&mzv(&["reduce", "zeta(6)"])).trim(), "1/945*pi^6");
    assert_eq!(mzv(&["reduce", "dz(5,3)"]).status.code(), Some(3));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(mzv(&["reduce", "zeta("]).status.code(), Some(2));
    assert_eq!(mzv(&["eval", "nosuch(2)"]).status.code(), Some(2));
    assert_eq!(mzv(&["--prec", "5", "eval", "1"]).status.code(), Some(2));
    assert_eq!(mzv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mzv(&["eval", "s", "--set", "s"]).status.code(), Some(2));
    assert_eq!(mzv(&["search", "--family", "nosuch"]).status.code(), Some(2));
}

#[test]
fn verify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = || mzv(&["--no-timestamp", "--format", "json", "verify", "--ids", "C25,C28", "--report-dir", d]);
    let a = run();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let json = std::fs::read_to_string(dir.path().join("verify.json")).unwrap();
    let tsv = std::fs::read_to_string(dir.path().join("verify.tsv")).unwrap();
    assert!(tsv.lines().skip(1).all(|l| l.starts_with("C25") || l.starts_with("C28")));
    assert!(!json.contains("timestamp"));
    assert_eq!(a.stdout, run().stdout);
    assert_eq!(json, std::fs::read_to_string(dir.path().join("verify.json")).unwrap());
    let o = mzv(&["verify", "--ids", "C25", "--report-dir", d, "--format", "json"]);
    assert!(stdout(&o).contains("\"timestamp\": \"unix:"));
}

#[test]
fn corrupted_corpus_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mzv");
    std::fs::write(&path, "identity B1 : forall s>=3 : sum(j=2..s-1, dz(j,s-j)) == (1 + 1/10^30)*zeta(s)\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(["verify", "--max-param", "6", "--report-dir", dir.path().to_str().unwrap()])
        .env("MZV_CORPUS", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL B1"));
    std::fs::write(&path, "identity B1 : forall s>=3 : zeta(s) ==\n").unwrap();
    let o = mzv(&["--corpus", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn full_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mzv(&["verify", "--all", "--report-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 blocking"));
}

#[test]
fn search_families() {
    let o = mzv(&["search", "--family", "symmetric-even", "--format", "tsv"]);
    let out = stdout(&o);
    assert!(out.contains("d=1\texact\t3/2"), "{out}");
    assert!(out.contains("d=4\texact\t1/6*4^s + s + 4/3"), "{out}");
    let o = mzv(&["search", "--family", "power", "--format", "json", "--no-timestamp"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let labels: Vec<&str> = v["outcome"]["emitted"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["a=1", "a=2"]);
    let o = mzv(&["search", "--family", "poly", "--deg", "2"]);
    assert!(stdout(&o).contains("3/4*s - 9/4"), "{}", stdout(&o));
}

#[test]
fn number_sequences_and_listing() {
    assert_eq!(stdout(&mzv(&["bernoulli", "12"])).trim(), "-691/2730");
    assert_eq!(stdout(&mzv(&["euler", "10"])).trim(), "-50521");
    assert_eq!(stdout(&mzv(&["bernoulli", "3"])).trim(), "0");
    let list = stdout(&mzv(&["corpus", "list"]));
    assert_eq!(list.lines().count(), 46);
    assert!(list.lines().any(|l| l.starts_with("C09\t") && l.contains("report")));
}
