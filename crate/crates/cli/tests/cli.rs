use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semidiam")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn save(dir: &tempfile::TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

#[test]
fn bundled_witness_fixtures_pass() {
    for (class, t, p) in [("T", "right_t_theta.json", "right_t_phi.json"), ("BL", "bl_theta.json", "bl_phi.json")] {
        let o = run(&[
            "witness",
            "--side=right",
            &format!("--class={class}"),
            "--theta",
            &fixture(t),
            "--phi",
            &fixture(p),
        ]);
        assert_eq!(code(&o), 0, "{class}: {}", String::from_utf8_lossy(&o.stderr));
        let r = json(&o);
        assert_eq!(r["exit_status"], 0);
        assert!(r["verification"].as_array().unwrap().iter().all(|v| v["passed"] == true));
    }
    let o = run(&[
        "witness",
        "--side=left",
        "--class=DBL",
        "--window=1024",
        "--theta",
        &fixture("dbl_theta.json"),
        "--phi",
        &fixture("dbl_phi.json"),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["outputs"]["length"], 2);
}

#[test]
fn corrupted_fixture_fails_verification() {
    let o = run(&[
        "witness",
        "--side=right",
        "--class=BL",
        "--theta",
        &fixture("bl_theta.json"),
        "--phi",
        &fixture("bl_phi_corrupt.json"),
    ]);
    assert_eq!(code(&o), 2);
    let r = json(&o);
    assert_eq!(r["exit_status"], 2);
    assert!(r["verification"].as_array().unwrap().iter().any(|v| v["passed"] == false));
}

#[test]
fn usage_and_capability_codes() {
    assert_eq!(code(&run(&["witness", "--side=right", "--class=Nope", "--seed=1"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["check", "/nonexistent/report.json"])), 1);
    assert_eq!(code(&run(&["witness", "--side=left", "--class=BL", "--seed=1"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["witness", "--side=right", "--class=Inj", "--seed=3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let args = ["refute", "--target=right-cong", "--seed=4", "--depth=2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn saved_report_replays_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "witness",
        "--side=right",
        "--class=BL",
        "--theta",
        &fixture("bl_theta.json"),
        "--phi",
        &fixture("bl_phi.json"),
    ]);
    let mut report = json(&o);
    let p = save(&dir, "report.json", &report);
    assert_eq!(code(&run(&["check", p.to_str().unwrap()])), 0);

    report["outputs"]["length"] = Value::from(7);
    let p = save(&dir, "tampered.json", &report);
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
}

#[test]
fn refutation_certificate_replays_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["refute", "--target=left-cong", "--depth=1", "--gens", &fixture("halving.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cert = json(&o)["outputs"]["certificate"].clone();
    let p = save(&dir, "cert.json", &cert);
    assert_eq!(code(&run(&["refute", "--check", p.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["check", p.to_str().unwrap()])), 0);

    let mut bad = cert.clone();
    bad["proof"] = Value::Null;
    let p = save(&dir, "bad.json", &bad);
    assert_eq!(code(&run(&["check", p.to_str().unwrap()])), 2);
}

#[test]
fn shipped_bl_refutation() {
    let o = run(&["refute", "--target=right-bl2", "--fixture=hats"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["refute", "--target=right-bl2", "--fixture=nope"])), 1);
}

#[test]
fn oracle_on_the_full_transformation_monoid() {
    let o = run(&["oracle", "search", "--gens", &fixture("t2.json")]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["exact"]["diameter"]["finite"], 1);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let o = run(&["oracle", "diam", "--gens", &fixture("t2.json"), "--pairs=0:1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows = std::fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().count(), json(&o)["outputs"]["distances"].as_array().unwrap().len());
}

#[test]
fn partition_commands() {
    let o = run(&["partition", "mul", &fixture("p6_alpha.json"), &fixture("p6_beta.json")]);
    assert_eq!(code(&o), 0);
    let o = run(&["partition", "render", "--plain", &fixture("p6_alpha.json")]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let diagram = dir.path().join("alpha.txt");
    std::fs::write(&diagram, &o.stdout).unwrap();
    let o = run(&["partition", "star", diagram.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["partition", "check", "--theta", &fixture("sym_alpha.json"), "--phi", &fixture("sym_identity.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["partition", "check", "--seed=3", "--pb"])), 0);
}
