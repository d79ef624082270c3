//! End-to-end checks of the binary: exit codes, file round trips, and
//! output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cbc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("cbc-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn construct_then_verify_round_trip() {
    for (args, k, t) in [
        (vec!["--n", "60", "--k", "4", "--m", "6", "--method", "grouped"], "4", "1"),
        (vec!["--n", "54", "--k", "4", "--m", "6", "--method", "range"], "4", "1"),
        (vec!["--n", "10", "--k", "5", "--m", "5", "--t", "2", "--method", "spread"], "5", "2"),
        (vec!["--n", "14", "--k", "3", "--m", "4", "--method", "saturated"], "3", "1"),
        (vec!["--n", "19", "--k", "9", "--m", "6", "--t", "2", "--method", "pairs-augmented"], "9", "2"),
    ] {
        let file = tmp(&format!("roundtrip-{k}-{t}-{}", args[1]));
        let mut full = vec!["construct"];
        full.extend(args.iter().copied());
        full.push("--out");
        full.push(file.to_str().unwrap());
        let out = run(&full);
        assert!(out.status.success(), "construct failed: {}", stdout(&out));

        let v = run(&["verify", "--k", k, "--t", t, file.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "verify: {}", stdout(&v));
        assert!(stdout(&v).starts_with("VALID"));
        std::fs::remove_file(file).ok();
    }
}

#[test]
fn invalid_matrix_exits_one_with_witness() {
    let file = tmp("invalid");
    // four identical two-server columns cannot serve k=4 at t=1
    std::fs::write(&file, "4 4 4 1\n1111\n1111\n0000\n0000\n").unwrap();
    let v = run(&["verify", "--k", "4", file.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    let text = stdout(&v);
    assert!(text.starts_with("INVALID"));
    assert!(text.contains("items:") && text.contains("servers: 1 2"));
    // the naive oracle agrees
    let v = run(&["verify", "--k", "4", "--naive", file.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    std::fs::remove_file(file).ok();
}

#[test]
fn malformed_input_exits_two() {
    let file = tmp("malformed");
    std::fs::write(&file, "2 2 2 1\n10\n2x\n").unwrap();
    assert_eq!(run(&["verify", file.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(file).ok();
    // missing file and bad flags are usage errors too
    assert_eq!(run(&["verify", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--n", "x"]).status.code(), Some(2));
    assert_eq!(
        run(&["construct", "--n", "7", "--k", "4", "--m", "6", "--method", "grouped"])
            .status
            .code(),
        Some(2),
        "grouped needs the full column count"
    );
}

#[test]
fn json_matrix_mirrors_text() {
    let txt = tmp("as-text");
    let jsn = tmp("as-json");
    let base = ["construct", "--n", "12", "--k", "3", "--m", "4"];
    let mut a = base.to_vec();
    a.extend(["--out", txt.to_str().unwrap()]);
    assert!(run(&a).status.success());
    let mut b = base.to_vec();
    b.extend(["--json", "--out", jsn.to_str().unwrap()]);
    assert!(run(&b).status.success());

    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&jsn).unwrap()).unwrap();
    assert_eq!(parsed["n"], 12);
    assert_eq!(parsed["total_storage"], 24);
    let rows: Vec<String> = parsed["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_str().unwrap().to_string())
        .collect();
    let text = std::fs::read_to_string(&txt).unwrap();
    let body: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, body);
    std::fs::remove_file(txt).ok();
    std::fs::remove_file(jsn).ok();
}

#[test]
fn deterministic_output() {
    let a = run(&["report", "table1"]);
    let b = run(&["report", "table1"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["search", "min-storage", "--n", "5", "--k", "3", "--m", "3"]);
    assert!(stdout(&a).contains("N_min = 9"));
    let b = run(&["search", "min-storage", "--n", "5", "--k", "3", "--m", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_girth5_and_bounds() {
    let o = run(&["search", "girth5", "--v", "5"]);
    assert!(stdout(&o).starts_with("e_max = 5"));
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["bound", "n", "--n", "54", "--k", "4", "--m", "6"]);
    assert!(stdout(&o).starts_with("160 EXACT"));
    let o = run(&["bound", "uniform", "--m", "10", "--c", "2", "--k", "5", "--t", "2"]);
    assert!(stdout(&o).starts_with("180 EXACT"));
    let o = run(&["bound", "tiling", "--m", "56"]);
    assert!(stdout(&o).contains("160") && stdout(&o).contains("d=1"));
}

#[test]
fn exhausted_search_exits_three() {
    let o = run(&[
        "search", "min-storage", "--n", "8", "--k", "4", "--m", "6",
        "--max-nodes", "10",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("EXHAUSTED"));
}
