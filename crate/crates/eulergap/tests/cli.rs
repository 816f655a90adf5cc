//! End-to-end tests of the command-line surface: envelope schema, exit
//! codes, and byte-level determinism of payloads under a fixed seed.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eulergap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn payload(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON envelope")
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("eulergap-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

const C4: &str = "digraph 4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n";

#[test]
fn gap_on_c4_matches_closed_form() {
    let path = tmp_file("c4-gap.txt", C4);
    let out = run(&["gap", path.to_str().unwrap(), "--mode", "edge"]);
    assert!(out.status.success());
    let v = payload(&out);
    assert_eq!(v["schema"], 1);
    let lo = v["result"]["lambda_lo"].as_f64().unwrap();
    let hi = v["result"]["lambda_hi"].as_f64().unwrap();
    assert!((lo - 0.5).abs() < 1e-6, "lambda_lo {lo}");
    assert!((hi - 0.5).abs() < 1e-6, "lambda_hi {hi}");
}

#[test]
fn bruteforce_envelope() {
    let path = tmp_file("c4-bf.txt", C4);
    let out = run(&["bruteforce", path.to_str().unwrap(), "--mode", "edge"]);
    assert!(out.status.success());
    let v = payload(&out);
    assert_eq!(v["result"]["value"].as_f64().unwrap(), 0.25);
    assert_eq!(v["result"]["set"], serde_json::json!([0, 1]));
}

#[test]
fn alpha_reports_inf_on_dag() {
    let gen = run(&["gen", "--family", "complete_dag", "--n", "4"]);
    assert!(gen.status.success());
    let text = payload(&gen)["result"]["text"]
        .as_str()
        .unwrap()
        .to_string();
    let path = tmp_file("dag4.txt", &text);
    let out = run(&["alpha", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(payload(&out)["result"]["alpha"], "inf");
}

#[test]
fn infeasible_circulation_exits_4() {
    let path = tmp_file("two-arc.txt", "digraph 2 2\n0 1 1\n1 0 2\n");
    let out = run(&["circulation", path.to_str().unwrap(), "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(payload(&out)["result"]["feasible"], false);
}

#[test]
fn bad_input_exits_2() {
    let path = tmp_file("garbage.txt", "not a graph\n");
    let out = run(&["gap", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn expansion_with_explicit_set() {
    let path = tmp_file("c4-exp.txt", C4);
    let out = run(&[
        "expansion",
        path.to_str().unwrap(),
        "--set",
        "0,1",
        "--mode",
        "vertex",
    ]);
    assert!(out.status.success());
    assert_eq!(payload(&out)["result"]["value"].as_f64().unwrap(), 0.5);
}

#[test]
fn cut_payload_is_deterministic_excluding_timing() {
    let path = tmp_file("cut-det.txt", C4);
    let args = [
        "cut",
        path.to_str().unwrap(),
        "--mode",
        "edge",
        "--seed",
        "99",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    let mut va = payload(&a);
    let mut vb = payload(&b);
    va.as_object_mut().unwrap().remove("timing_ms");
    vb.as_object_mut().unwrap().remove("timing_ms");
    assert_eq!(
        serde_json::to_string(&va).unwrap(),
        serde_json::to_string(&vb).unwrap()
    );
}

#[test]
fn cut_threads_do_not_change_the_answer() {
    let gen = run(&[
        "gen",
        "--family",
        "random_strongly_connected",
        "--n",
        "8",
        "--m",
        "10",
        "--seed",
        "5",
    ]);
    let text = payload(&gen)["result"]["text"]
        .as_str()
        .unwrap()
        .to_string();
    let path = tmp_file("cut-threads.txt", &text);
    let one = run(&[
        "cut",
        path.to_str().unwrap(),
        "--seed",
        "3",
        "--threads",
        "1",
    ]);
    let many = run(&[
        "cut",
        path.to_str().unwrap(),
        "--seed",
        "3",
        "--threads",
        "4",
    ]);
    assert_eq!(payload(&one)["result"], payload(&many)["result"]);
}

#[test]
fn gap_trace_is_line_delimited_json() {
    let gen = run(&[
        "gen",
        "--family",
        "random_strongly_connected",
        "--n",
        "7",
        "--m",
        "9",
        "--seed",
        "11",
    ]);
    let text = payload(&gen)["result"]["text"]
        .as_str()
        .unwrap()
        .to_string();
    let path = tmp_file("trace-in.txt", &text);
    let trace = std::env::temp_dir().join(format!("eulergap-trace-{}.jsonl", std::process::id()));
    let out = run(&[
        "gap",
        path.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&trace).unwrap();
    let mut lambda_lo_prev = f64::NEG_INFINITY;
    let mut count = 0;
    for line in body.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        let lo = r["lambda_lo"].as_f64().unwrap();
        assert!(lo >= lambda_lo_prev);
        lambda_lo_prev = lo;
        assert!(r["iteration"].is_u64());
        count += 1;
    }
    assert!(count >= 1);
}

#[test]
fn hyper_gap_and_cut() {
    let hg = "hypergraph 6 4\n1 3 0 1 2\n1 3 3 4 5\n1 2 2 3\n1 2 1 4\n";
    let path = tmp_file("hyper.txt", hg);
    let out = run(&["hyper-gap", path.to_str().unwrap(), "--tol", "0.01"]);
    assert!(out.status.success());
    let v = payload(&out);
    let lo = v["result"]["lambda_lo"].as_f64().unwrap();
    let hi = v["result"]["lambda_hi"].as_f64().unwrap();
    assert!((lo - 0.5).abs() < 1e-6, "lambda_lo {lo}");
    assert!(hi - lo <= 0.01 * hi.max(1.0));

    let out = run(&["hyper-cut", path.to_str().unwrap(), "--seed", "4"]);
    assert!(out.status.success());
    let v = payload(&out);
    let value = v["result"]["value"].as_f64().unwrap();
    let xi = v["result"]["diagnostics"]["xi"].as_f64().unwrap();
    assert!(value <= 8.0 * xi + 1e-9);
}

#[test]
fn unclosed_bracket_exits_3() {
    // nonsmooth maximizer: the bracket cannot close to 1e-9 and the gap
    // command reports numerical non-convergence
    let hg = "hypergraph 6 4\n1 3 0 1 2\n1 3 3 4 5\n1 2 2 3\n1 2 1 4\n";
    let path = tmp_file("hyper-strict.txt", hg);
    let out = run(&[
        "hyper-gap",
        path.to_str().unwrap(),
        "--tol",
        "1e-9",
        "--max-iters",
        "300",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(payload(&out)["result"]["converged"], false);
}

#[test]
fn fastest_reports_bounds() {
    let gen = run(&["gen", "--family", "cycle", "--n", "6"]);
    let text = payload(&gen)["result"]["text"]
        .as_str()
        .unwrap()
        .to_string();
    let path = tmp_file("fastest.txt", &text);
    let out = run(&["fastest", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = payload(&out);
    assert_eq!(v["result"]["mixing"], true);
    assert!(v["result"]["bounds"]["psi"].as_f64().unwrap() > 0.0);
    assert!(v["result"]["stationarity_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn quiet_suppresses_stdout() {
    let path = tmp_file("quiet.txt", C4);
    let out = run(&["--quiet", "bruteforce", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}
