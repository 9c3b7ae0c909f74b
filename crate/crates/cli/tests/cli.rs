//! End-to-end runs of the `bjortho` binary: exit codes, determinism and
//! output formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bjortho"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn repro_is_byte_identical_and_passes() {
    for ex in ["tensor-hilbert", "tensor-l1l1"] {
        for fmt in ["json", "csv"] {
            let a = run(&["repro", ex, "--format", fmt]);
            let b = run(&["repro", ex, "--format", fmt]);
            assert_eq!(a.status.code(), Some(0), "{ex}");
            assert_eq!(a.stdout, b.stdout);
        }
    }
    let csv = stdout(&run(&["repro", "tensor-l1l1", "--format", "csv"]));
    assert!(csv.starts_with("name,value,expected,deviation\n"));
    assert!(csv.contains("product lhs,4.0,4.0,0.0"));
    assert!(csv.contains("product rhs,5.0,5.0,0.0"));
}

#[test]
fn repro_rejects_unknown_examples() {
    assert_eq!(run(&["repro", "tensor-l2l2"]).status.code(), Some(2));
}

#[test]
fn check_on_the_hilbert_tensor_pair() {
    let out = run(&["check", fixture("tensor_hilbert_check.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["criterion"]["verdict"], "orthogonal");
    assert_eq!(v["oracle"]["verdict"], "orthogonal");
    assert_eq!(v["agreement"], true);
    let lhs = v["criterion"]["lhs"].as_f64().unwrap();
    assert!((lhs - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn check_with_zero_direction() {
    let out = run(&["check", fixture("zero_direction_check.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["criterion"]["verdict"], "orthogonal");
    assert_eq!(v["agreement"], true);
}

#[test]
fn check_flags_override_the_input() {
    let path = fixture("tensor_hilbert_check.json");
    let out = run(&["check", path.to_str().unwrap(), "--criterion", "keckic", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("keckic,1.0,orthogonal,orthogonal"), "{text}");
    // the vector L¹ criterion needs p = 1
    assert_eq!(run(&["check", path.to_str().unwrap(), "--criterion", "l1", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn malformed_input_reports_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"f\":\n}").unwrap();
    let out = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3 column 1"), "{err}");
}

#[test]
fn incompatible_functions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("tensor_hilbert_check.json")).unwrap()).unwrap();
    v["g"]["measure"]["weights"] = serde_json::json!([1, 1, 1, 1, 2]);
    let path = dir.path().join("mismatch.json");
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(run(&["check", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/input.json"]).status.code(), Some(2));
}

#[test]
fn approx_certifies_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["lp3_approx.json", "l1_approx.json"] {
        let out_path = dir.path().join(format!("{name}.out"));
        let out = run(&["approx", fixture(name).to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
        assert_eq!(v["result"]["certified"], true);
        assert_eq!(v["characterization"]["certified"], true);
    }
}

#[test]
fn verify_is_deterministic_per_seed() {
    let args = |seed: &str| run(&["verify", "crit-vs-oracle", "--trials", "12", "--seed", seed, "--format", "csv"]);
    let a = args("3");
    let b = args("3");
    let c = args("4");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let header = stdout(&a).lines().next().unwrap().to_string();
    assert_eq!(header, "suite,trial,p,dim,atoms,verdict_criterion,verdict_oracle,lhs,rhs,margin");
}

#[test]
fn verify_smoke_runs_for_every_suite() {
    for suite in ["thm-tensor-p", "crit-vs-oracle", "light", "approx", "duality-map"] {
        let out = run(&["verify", suite, "--trials", "1"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v = json(&out);
        assert_eq!(v["failures"], 0);
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["verify", "no-such-suite"],
        vec!["verify", "light", "--trials", "0"],
        vec!["verify", "light", "--p", "1"],
        vec!["verify", "approx", "--p", "2,x"],
        vec!["verify", "approx", "--tol", "-1"],
        vec!["repro", "tensor-hilbert", "--format", "xml"],
        vec!["check", "a.json", "--criterion", "nope"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&[]).status.code(), Some(2));
}
