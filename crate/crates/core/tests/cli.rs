//! End-to-end tests of the command-line interface: exit codes, output
//! shapes, format stability and report verification.

use std::path::PathBuf;
use std::process::{Command, Output};

use dualcone::report::{verify_report, Report};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dualcone"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn golden_path() -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/k3_am_3.json");
    p.to_string_lossy().to_string()
}

fn tmp_file(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("dualcone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().to_string()
}

#[test]
fn construct_matches_golden_file() {
    let out = run(&["construct", "--kind", "k3-am", "--m", "3"]);
    assert!(out.status.success());
    let golden = std::fs::read_to_string(golden_path()).unwrap();
    assert_eq!(stdout(&out), golden, "generated model drifted from the frozen v1 format");
}

#[test]
fn construct_rejects_out_of_range() {
    let out = run(&["construct", "--kind", "k3-am", "--m", "20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn signature_prints_triple() {
    let out = run(&["signature", &golden_path()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "(1,0,19)");
}

#[test]
fn signature_rejects_degenerate_gram() {
    let path = tmp_file("degenerate.json");
    let text = std::fs::read_to_string(golden_path()).unwrap();
    // zero out the positive diagonal entry: the form degenerates
    let text = text.replacen("\"1\"", "\"0\"", 1);
    std::fs::write(&path, text).unwrap();
    let out = run(&["signature", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perp_prints_restricted_signature() {
    let out = run(&["perp", &golden_path(), "--classes", "C1,C2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().last().unwrap(), "(1,0,17)");

    // empty class list: full-space signature
    let out = run(&["perp", &golden_path()]);
    assert_eq!(stdout(&out).lines().last().unwrap(), "(1,0,19)");

    let out = run(&["perp", &golden_path(), "--classes", "C9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decide_chain_model_not_projective() {
    let report_path = tmp_file("chain_report.json");
    let out = run(&["decide", &golden_path(), "--out", &report_path]);
    assert_eq!(out.status.code(), Some(1));
    let report = Report::from_json(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.verdict, "not-projective");
    let ob = report.obstruction.as_ref().unwrap();
    assert_eq!(ob.kind, "ns-negative-definite");
    verify_report(&report).unwrap();
}

#[test]
fn decide_polarized_model_projective() {
    // rank-one model with a square-2 class and no curves
    let model_path = tmp_file("polarized.json");
    let mut gram = vec![vec!["0".to_string(); 20]; 20];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = if i == 0 { "2".into() } else { "-1".into() };
    }
    let mut kappa = vec!["0".to_string(); 20];
    kappa[0] = "1".into();
    let mut h = vec![0i64; 20];
    h[0] = 1;
    let file = serde_json::json!({
        "version": 1,
        "kind": "k3",
        "dim": 20,
        "gram": gram,
        "kappa_ref": kappa,
        "ns_basis": [h],
        "curves": [],
    });
    std::fs::write(&model_path, serde_json::to_string_pretty(&file).unwrap()).unwrap();

    let report_path = tmp_file("polarized_report.json");
    let out = run(&["decide", &model_path, "--bound", "1", "--out", &report_path]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.verdict, "projective");
    assert_eq!(report.witness.as_ref().unwrap().coefficients, vec!["1"]);
    verify_report(&report).unwrap();
}

#[test]
fn decide_reports_are_deterministic_modulo_timing() {
    let a_path = tmp_file("det_a.json");
    let b_path = tmp_file("det_b.json");
    assert_eq!(run(&["decide", &golden_path(), "--seed", "3", "--out", &a_path]).status.code(), Some(1));
    assert_eq!(run(&["decide", &golden_path(), "--seed", "3", "--out", &b_path]).status.code(), Some(1));
    let mut a = Report::from_json(&std::fs::read_to_string(&a_path).unwrap()).unwrap();
    let mut b = Report::from_json(&std::fs::read_to_string(&b_path).unwrap()).unwrap();
    a.timing_ms = 0;
    b.timing_ms = 0;
    assert_eq!(a, b);
}

#[test]
fn kahler_and_dual_inner_tests_run() {
    let point = "1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0";
    let out = run(&["kahler-test", &golden_path(), "--point", point]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("kahler: false"), "chain curves exclude the raw forward vector: {text}");
    assert!(text.contains("closure: true"));

    let out = run(&["dual-inner-test", &golden_path(), "--point", point]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dual: member"));
    assert!(text.contains("inner: inner"));
}

#[test]
fn blowdown_descends_model_and_point() {
    // 5-dimensional general-kind source: diag(1,-1,-1,-1) + exceptional (-1)
    let model_path = tmp_file("blowup.json");
    let gram: Vec<Vec<String>> = (0..5)
        .map(|i| {
            (0..5)
                .map(|j| if i == j { if i == 0 { "1".into() } else { "-1".into() } } else { "0".to_string() })
                .collect()
        })
        .collect();
    let file = serde_json::json!({
        "version": 1,
        "kind": "general",
        "dim": 5,
        "gram": gram,
        "kappa_ref": ["1", "0", "0", "0", "0"],
        "ns_basis": [],
        "curves": [],
    });
    std::fs::write(&model_path, serde_json::to_string_pretty(&file).unwrap()).unwrap();

    let out_path = tmp_file("blowdown_target.json");
    let out = run(&["blowdown", &model_path, "--point", "3,1,0,0,1", "--out", &out_path]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("descended point: 3,1,0,0"));
    assert!(stderr.contains("verdict: inner"));
    let target = std::fs::read_to_string(&out_path).unwrap();
    let target_file = dualcone::model::ModelFile::from_json(&target).unwrap();
    assert_eq!(target_file.dim, 4);
    assert_eq!(target_file.kind, "general");

    // a class that is not inner upstream violates the precondition
    let out = run(&["blowdown", &model_path, "--point", "0,1,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn elliptic_bound_reports_boosted_class() {
    let model_path = tmp_file("elliptic.json");
    let gram: Vec<Vec<String>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { if i == 0 { "1".into() } else { "-1".into() } } else { "0".to_string() })
                .collect()
        })
        .collect();
    let file = serde_json::json!({
        "version": 1,
        "kind": "torus",
        "dim": 4,
        "gram": gram,
        "kappa_ref": ["1", "0", "0", "0"],
        "ns_basis": [[1, 0, 0, 0], [1, 1, 0, 0]],
        "curves": [],
        "elliptic": { "m": [3, -1, 0, 0], "f": [1, 1, 0, 0] },
    });
    std::fs::write(&model_path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let out = run(&["elliptic-bound", &model_path]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("inner: inner"));
    assert!(text.contains("fiber pairing: 4"));
    assert!(text.contains("bound n: 0"));

    // missing elliptic block
    let out = run(&["elliptic-bound", &golden_path()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn independent_python_verifier_accepts_reports() {
    let verifier = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../python/verify_report.py");
    let verify = |report_path: &str| -> bool {
        Command::new("python3")
            .arg(&verifier)
            .arg(report_path)
            .output()
            .expect("python3 runs")
            .status
            .success()
    };

    // definiteness obstruction
    let chain_report = tmp_file("pyverify_chain.json");
    run(&["decide", &golden_path(), "--out", &chain_report]);
    assert!(verify(&chain_report));

    // enumeration obstruction on a general-kind model
    let model_path = tmp_file("pyverify_general.json");
    let gram: Vec<Vec<String>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { if i == 0 { "1".into() } else { "-1".into() } } else { "0".to_string() })
                .collect()
        })
        .collect();
    let file = serde_json::json!({
        "version": 1,
        "kind": "general",
        "dim": 4,
        "gram": gram,
        "kappa_ref": ["1", "0", "0", "0"],
        "ns_basis": [[0, 1, 0, 0]],
        "curves": [],
    });
    std::fs::write(&model_path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let general_report = tmp_file("pyverify_general_report.json");
    let out = run(&["decide", &model_path, "--bound", "2", "--out", &general_report]);
    assert_eq!(out.status.code(), Some(1));
    let report = Report::from_json(&std::fs::read_to_string(&general_report).unwrap()).unwrap();
    assert_eq!(report.obstruction.as_ref().unwrap().kind, "per-candidate-certificates");
    verify_report(&report).unwrap();
    assert!(verify(&general_report));

    // tampered report is rejected
    let tampered = tmp_file("pyverify_tampered.json");
    let text = std::fs::read_to_string(&chain_report)
        .unwrap()
        .replace("\"ns_signature\": [\n      0,", "\"ns_signature\": [\n      1,");
    std::fs::write(&tampered, text).unwrap();
    assert!(!verify(&tampered));
}

#[test]
fn fuzz_summaries_reproduce_byte_identically() {
    for suite in ["lemma15", "selfdual", "blowdown", "oracle"] {
        let a = run(&["fuzz", "--suite", suite, "--trials", "20", "--seed", "11"]);
        let b = run(&["fuzz", "--suite", suite, "--trials", "20", "--seed", "11"]);
        assert!(a.status.success(), "suite {suite} failed: {}", stdout(&a));
        assert_eq!(stdout(&a), stdout(&b), "suite {suite} summary not reproducible");
    }
    let out = run(&["fuzz", "--suite", "nope", "--trials", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_zero_trials_trivially_pass() {
    let out = run(&["fuzz", "--suite", "lemma15", "--trials", "0", "--seed", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("trials=0"));
    assert!(stdout(&out).contains("result=PASS"));
}
