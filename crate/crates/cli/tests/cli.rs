use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn hitchin(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hitchin"));
    c.args(args).env_remove("HITCHIN_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = hitchin(&["verify", "all", "--seed", "7", "--trials", "2", "--out", p.to_str().unwrap()], &[]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&hitchin(&["verify", "lagrange", "--n", "0"], &[])), 2);
    assert_eq!(code(&hitchin(&["integrate", "--scenario", "nope"], &[])), 2);
    assert_eq!(code(&hitchin(&["verify", "everything"], &[])), 2);
    assert_eq!(code(&hitchin(&["verify", "admissibility", "--genus", "4"], &[])), 2);
}

#[test]
fn seed_from_environment_wins() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hitchin(&["verify", "relations", "--genus", "2", "--trials", "2", "--seed", "3", "--out", out.to_str().unwrap()], &[("HITCHIN_SEED", "41")]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["seed"], 41);
    assert_eq!(doc["checks"][0]["seeds"][0], 41);
}

#[test]
fn equal_kappa_csv_has_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = hitchin(&["integrate", "--scenario", "g3-equal-kappa", "--t1", "1", "--steps", "10000", "--out", out.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("t,re_a1,im_a1"));
    assert_eq!(lines.count(), 10001);
}

#[test]
fn failing_check_embeds_a_replayable_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.json");
    let o = hitchin(&["verify", "factorization", "--genus", "2", "--p1", "3/2", "--trials", "1", "--out", out.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 1);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let failure = &doc["checks"][0]["failures"][0];
    let point = dir.path().join("point.json");
    fs::write(&point, failure["point"].to_string()).unwrap();
    let o = hitchin(&["hamiltonian", "--point", point.to_str().unwrap(), "--reduction", "canonical", "--grad"], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let h: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(h["H"].is_string());
    assert_eq!(h["gradient"]["alpha11"], "0");
}

#[test]
fn integral_sign_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = hitchin(&["verify", "integrals", "--genus", "3", "--trials", "2", "--out", out.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 1);
    let o = hitchin(&["verify", "integrals", "--genus", "2", "--trials", "2", "--out", out.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0);
}
