use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rainbow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow"))
        .args(args)
        .env_remove("RAINBOW_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const COOPERATIVE: &str = r#"{"left": 2, "right": 2, "sets": [[[1, 1], [2, 2]], [[1, 2], [2, 1]], [[1, 1]]]}"#;

#[test]
fn solve_cooperative_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "coop.json", COOPERATIVE);
    for mode in ["constructive", "oracle", "hybrid"] {
        let out = rainbow(&["solve", "--input", s(&input), "--n", "2", "--k", "2", "--mode", mode]);
        assert_eq!(code(&out), 0, "{mode}");
        let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(cert["schema"], "rainbow/1");
        assert_eq!(cert["assignment"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn solve_reports_failing_pair() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "fail.json", r#"{"left": 2, "right": 2, "sets": [[[1, 1]], [[1, 1]], [[1, 1]]]}"#);
    let out = rainbow(&["solve", "--input", s(&input), "--n", "2", "--k", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("sets [1, 2]"), "{}", stdout(&out));
}

#[test]
fn solve_rejects_wrong_family_size() {
    let dir = TempDir::new().unwrap();
    let gen = rainbow(&["gen", "--family", "sharpness", "--n", "2", "--k", "2"]);
    let input = write(&dir, "sharp.json", &stdout(&gen));
    let out = rainbow(&["solve", "--input", s(&input), "--n", "2", "--k", "2"]);
    assert_eq!(code(&out), 65);
}

#[test]
fn parse_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.json", r#"{"left": 2, "right": 2, "sets": []}"#);
    let out = rainbow(&["check", "--input", s(&empty), "--m", "0", "--k", "1", "--n", "1", "--q", "1"]);
    assert_eq!(code(&out), 64);
    let garbage = write(&dir, "garbage.json", "{");
    assert_eq!(code(&rainbow(&["solve", "--input", s(&garbage), "--n", "2", "--k", "2"])), 64);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&rainbow(&["solve", "--input", s(&missing), "--n", "2", "--k", "2"])), 64);
}

#[test]
fn check_outcomes() {
    let dir = TempDir::new().unwrap();
    let gen = rainbow(&["gen", "--family", "sharpness", "--n", "3", "--k", "2"]);
    let sharp = write(&dir, "sharp.json", &stdout(&gen));
    let out = rainbow(&["check", "--input", s(&sharp), "--m", "4", "--k", "2", "--n", "3", "--q", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("counterexample"), "{}", stdout(&out));
    assert!(stdout(&out).contains("2 < 3"));

    let drisko = write(
        &dir,
        "drisko.json",
        r#"{"left": 2, "right": 2, "sets": [[[1, 1], [2, 2]], [[1, 1], [2, 2]], [[1, 2], [2, 1]]]}"#,
    );
    let out = rainbow(&["check", "--input", s(&drisko), "--m", "3", "--k", "1", "--n", "2", "--q", "2"]);
    assert!(stdout(&out).starts_with("holds"));
    let out = rainbow(&["check", "--input", s(&drisko), "--m", "4", "--k", "1", "--n", "2", "--q", "2"]);
    assert_eq!(code(&out), 65);
}

#[test]
fn gen_families() {
    let out = rainbow(&["gen", "--family", "sharpness", "--n", "3", "--k", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["sets"].as_array().unwrap().len(), 4);

    let out = rainbow(&["gen", "--family", "staircase", "--k", "2", "--seed", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sizes: Vec<usize> = v["sets"].as_array().unwrap().iter().map(|x| x.as_array().unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 2, 2]);

    let a = rainbow(&["gen", "--family", "drisko", "--n", "2", "--seed", "42"]);
    let b = rainbow(&["gen", "--family", "drisko", "--n", "2", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["sets"].as_array().unwrap().len(), 3);

    assert_eq!(code(&rainbow(&["gen", "--family", "sharpness", "--n", "1", "--k", "2"])), 65);
    assert_eq!(code(&rainbow(&["gen", "--family", "sharpness", "--k", "2"])), 65);
}

#[test]
fn seed_environment_overrides_flag() {
    let run = |seed: Option<&str>, flag: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rainbow"));
        cmd.args(["gen", "--family", "drisko", "--n", "3", "--seed", flag]);
        match seed {
            Some(v) => cmd.env("RAINBOW_SEED", v),
            None => cmd.env_remove("RAINBOW_SEED"),
        };
        cmd.output().unwrap()
    };
    assert_eq!(run(Some("7"), "1").stdout, run(None, "7").stdout);
    assert_ne!(run(None, "1").stdout, run(None, "7").stdout);
    assert_eq!(code(&run(Some("x"), "1")), 65);
}

#[test]
fn random_family_generation() {
    let out = rainbow(&["gen", "--family", "random", "--n", "2", "--k", "2", "--seed", "4", "--density", "0.7"]);
    assert_eq!(code(&out), 0);
    // K_{3,2} has no matching of size 3.
    let out = rainbow(&["gen", "--family", "random", "--n", "3", "--k", "2", "--right", "2"]);
    assert_eq!(code(&out), 1);
}

const NETWORK: &str = r#"{"inner": 2, "sets": [[["s", 1], [1, "t"]], [["s", 2], [2, "t"]]]}"#;

#[test]
fn certify_outcomes() {
    let dir = TempDir::new().unwrap();
    let net = write(&dir, "net.json", NETWORK);
    let good = write(&dir, "good.json", r#"{"paths": [["s", 1, "t"], ["s", 2, "t"]], "assignment": {"1": 0, "2": 1}}"#);
    let out = rainbow(&["certify", "--input", s(&net), "--regimentation", s(&good)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("PASS (1)(2)(3), essential-count OK"));

    let short = write(&dir, "short.json", r#"{"paths": [["s", 1, "t"], ["s", 2, "t"]], "assignment": {"1": 0}}"#);
    let out = rainbow(&["certify", "--input", s(&net), "--regimentation", s(&short)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).starts_with("FAIL condition 3"));

    let broken = write(&dir, "broken.json", r#"{"paths": [["s", 1, "t"]]"#);
    assert_eq!(code(&rainbow(&["certify", "--input", s(&net), "--regimentation", s(&broken)])), 66);
    let no_target = write(&dir, "nt.json", r#"{"paths": [["s", 1]], "assignment": {}}"#);
    assert_eq!(code(&rainbow(&["certify", "--input", s(&net), "--regimentation", s(&no_target)])), 66);
}

const REGIMENTED: &str = r#"{"left": 3, "right": 3, "sets": [
  [[1, 1], [2, 2], [3, 3]],
  [[1, 1], [2, 2], [3, 3]],
  [[1, 2], [2, 3], [3, 1]],
  [[1, 2], [2, 3], [3, 1]],
  [[2, 1]]
]}"#;
const MATCHING: &str =
    r#"{"schema": "rainbow/1", "size": 2, "assignment": [{"set": 1, "edge": [1, 1]}, {"set": 2, "edge": [2, 2]}]}"#;

#[test]
fn certify_and_export_from_instance() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", REGIMENTED);
    let m = write(&dir, "m.json", MATCHING);
    let r = write(&dir, "r.json", r#"{"paths": [["s", 1, 2, "t"]], "assignment": {"3": 0, "4": 0}}"#);
    let out = rainbow(&["certify", "--input", s(&inst), "--matching", s(&m), "--regimentation", s(&r)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let out = rainbow(&["export-dot", "--input", s(&inst), "--matching", s(&m), "--regimentation", s(&r)]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph network {"));
    assert!(dot.contains("v1 [label=\"v1\\na1b1\"];"));
    assert!(dot.contains("v2 -> v1 [label=\"5\", style=dashed, color=red];"));

    let bad = write(&dir, "bad.json", r#"{"schema": "rainbow/1", "size": 1, "assignment": [{"set": 1, "edge": [1, 2]}]}"#);
    assert_eq!(code(&rainbow(&["export-dot", "--input", s(&inst), "--matching", s(&bad)])), 66);
}

#[test]
fn search_reports_coverage() {
    let out = rainbow(&["search", "--conjecture", "c4.1", "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "no counterexample; 680 instances of 680 (428 satisfied the hypothesis)");
    let out = rainbow(&["search", "--conjecture", "doubled", "--k", "2"]);
    assert!(stdout(&out).starts_with("no counterexample"));
    let out = rainbow(&["search", "--conjecture", "graded", "--k", "2", "--budget", "10"]);
    assert_eq!(code(&out), 1);
}

/// Identical seeds and inputs give byte-identical output across runs.
#[test]
fn determinism_across_runs() {
    let dir = TempDir::new().unwrap();
    let gen = |seed: &str| rainbow(&["gen", "--family", "random", "--n", "3", "--k", "2", "--seed", seed]);
    let first = gen("17");
    assert_eq!(first.stdout, gen("17").stdout);
    let input = write(&dir, "rand.json", &stdout(&first));
    for mode in ["constructive", "hybrid", "oracle"] {
        let solve = || rainbow(&["solve", "--input", s(&input), "--n", "3", "--k", "2", "--mode", mode]);
        let (a, b) = (solve(), solve());
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{mode}");
    }
    let search = || rainbow(&["search", "--conjecture", "graded", "--k", "2", "--left", "3", "--right", "3", "--mode", "sampled", "--seed", "3", "--budget", "20000"]);
    assert_eq!(search().stdout, search().stdout);
}
