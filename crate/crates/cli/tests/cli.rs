use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../automata").join(name)
}

fn rva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rva"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn sample() -> String {
    data("leading-zeros-broken.rva").display().to_string()
}

#[test]
fn check_negative_exits_one_with_witness() {
    let out = rva(&["--json", "check", &sample(), "--mode", "parallel"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["answer"], false);
    assert_eq!(v["witness"]["kind"], "zero-loop-broken");
    assert_eq!(v["stats"]["states"], 7);
    assert!(v["stats"]["time_ms"].as_f64().unwrap() >= 0.0);
    let cx = &v["counterexample"];
    assert_eq!(cx["kind"], "pair");
    assert_eq!(cx["accepted"]["value"], cx["rejected"]["value"]);
}

#[test]
fn check_positive_exits_zero() {
    let file = data("full-space-parallel-d2.rva").display().to_string();
    let out = rva(&["--json", "check", &file, "--mode", "parallel"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["answer"], true);
    assert!(v["witness"].is_null());

    let file = data("full-space-sequential-d2.rva").display().to_string();
    let out = rva(&["check", &file, "--mode", "sequential"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "yes");
}

#[test]
fn usage_and_format_errors_exit_two() {
    assert_eq!(code(&rva(&["check"])), 2);
    assert_eq!(code(&rva(&["check", &sample(), "--mode", "bogus"])), 2);
    assert_eq!(code(&rva(&["check", "/nonexistent.rva", "--mode", "parallel"])), 2);
    // wrong encoding for the mode
    assert_eq!(code(&rva(&["check", &sample(), "--mode", "sequential"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rva");
    std::fs::write(&bad, "rva-automaton v1\nbase: 2\ndim: 1\nencoding: diagonal\n").unwrap();
    let out = rva(&["check", bad.to_str().unwrap(), "--mode", "parallel"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4, column 11"), "{err}");
}

#[test]
fn minimize_prints_classes_and_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("min.rva");
    let out = rva(&["--json", "minimize", &sample(), "-o", out_file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["states"], 5);
    let mut classes: Vec<Vec<u64>> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect();
    classes.sort();
    assert_eq!(classes, vec![vec![0, 2], vec![1], vec![3, 4], vec![5], vec![6]]);
    let text = std::fs::read_to_string(&out_file).unwrap();
    assert!(text.contains("states: 5"));
    // the minimized file checks the same way
    assert_eq!(code(&rva(&["check", out_file.to_str().unwrap(), "--mode", "dim1"])), 1);
}

#[test]
fn eval_reports_acceptance_and_value() {
    let out = rva(&["--json", "eval", &sample(), "--word", "2 * / 0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["accepted"], true);
    assert_eq!(v["value"], "(2)");
    let out = rva(&["eval", &sample(), "--word", "0 2 * / 0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&rva(&["eval", &sample(), "--word", "2 *"])), 2);
    assert_eq!(code(&rva(&["eval", &sample(), "--word", "7 * / 0"])), 2);
}

#[test]
fn gen_round_trips_and_passes_checks() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, enc, mode) in [
        ("unit-box", "parallel", "parallel"),
        ("zero-only", "sequential", "sequential"),
        ("complement-full", "parallel", "complement"),
    ] {
        let file = dir.path().join(format!("{kind}-{enc}.rva"));
        let f = file.to_str().unwrap();
        let out = rva(&["gen", "--kind", kind, "--base", "3", "--dim", "2", "--encoding", enc, "-o", f]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(code(&rva(&["check", f, "--mode", mode])), 0, "{kind}");
    }
    let a = rva(&["gen", "--kind", "random", "--base", "2", "--dim", "1", "--encoding", "parallel", "--seed", "9"]);
    let b = rva(&["gen", "--kind", "random", "--base", "2", "--dim", "1", "--encoding", "parallel", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&rva(&["gen", "--kind", "nope", "--base", "2", "--dim", "1", "--encoding", "parallel"])), 2);
    assert_eq!(
        code(&rva(&["gen", "--kind", "complement-full", "--base", "2", "--dim", "1", "--encoding", "sequential"])),
        2
    );
}

#[test]
fn missing_transitions_need_the_sink_flag() {
    let text = std::fs::read_to_string(data("leading-zeros-broken.rva")).unwrap();
    let cut: String = text
        .lines()
        .filter(|l| *l != "4 2 -> 3")
        .map(|l| format!("{l}\n"))
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cut.rva");
    std::fs::write(&file, cut).unwrap();
    let f = file.to_str().unwrap();
    let out = rva(&["classify", f]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("state 4") && err.contains("letter 2"), "{err}");
    let out = rva(&["--json", "--complete-with-sink", "classify", f]);
    assert_eq!(json(&out)["states"], 8);
}

#[test]
fn oracle_agrees_with_check() {
    let out = rva(&["--json", "oracle", &sample(), "--bound", "6", "--seed", "1"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["answer"], false);
    let cx = &v["counterexample"];
    assert_eq!(cx["accepted"]["value"], cx["rejected"]["value"]);

    let file = data("full-space-parallel-d2.rva").display().to_string();
    let out = rva(&["oracle", &file, "--bound", "6"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "yes (bounded)");
    let out = rva(&["oracle", &file]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "yes");
}

#[test]
fn classify_reports_shape() {
    let out = rva(&["--json", "classify", &sample()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["weak"], true);
    assert_eq!(v["shape"], true);
    assert_eq!(v["states"], 7);
    assert_eq!(v["letters"], 4);
}
