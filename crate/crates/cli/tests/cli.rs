use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use angle_realize::geom::verify;
use angle_realize::io;

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_angle-realize"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("ANGLE_SEED")
        .output()
        .unwrap_or_else(|e| panic!("failed to run {args:?}: {e}"))
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("stderr is not JSON: {}", String::from_utf8_lossy(&out.stderr)))
}

const SIX: &str = "2.9,2.5,2.1,1.4,0.9,0.3";

#[test]
fn realize_writes_config_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["realize", "--angles", SIX, "--m", "5", "--output", "out/c.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let config = io::config_from_json(&std::fs::read_to_string(dir.path().join("out/c.json")).unwrap()).unwrap();
    let cert = io::certificate_from_json(&std::fs::read_to_string(dir.path().join("out/c.cert.json")).unwrap()).unwrap();
    assert_eq!(config.len(), 5);
    cert.check(&config).unwrap();
    let targets = angle_realize::AngleMultiset::from_radians([2.9, 2.5, 2.1, 1.4, 0.9, 0.3]).unwrap();
    verify(&config, &targets, 1e-9).unwrap();

    let out = run_in(dir.path(), &["verify", "--config", "out/c.json", "--angles", SIX]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["assignments"].as_array().unwrap().len(), 6);
}

#[test]
fn degrees_convert_on_input() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_in(dir.path(), &["realize", "--angles", "150,100,60,45,30,10", "--degrees"]);
    let r: Vec<String> = [150.0f64, 100.0, 60.0, 45.0, 30.0, 10.0].iter().map(|d| d.to_radians().to_string()).collect();
    let b = run_in(dir.path(), &["realize", "--angles", &r.join(",")]);
    assert!(a.status.success() && b.status.success());
    let (va, vb): (serde_json::Value, serde_json::Value) = (serde_json::from_slice(&a.stdout).unwrap(), serde_json::from_slice(&b.stdout).unwrap());
    assert_eq!(va["config"], vb["config"]);
}

#[test]
fn perturbed_config_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["realize", "--angles", SIX, "--output", "c.json"]).status.success());
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    let x = doc["points"][3][0].as_f64().unwrap();
    doc["points"][3][0] = serde_json::json!(x + 1e-3);
    std::fs::write(dir.path().join("edited.json"), doc.to_string()).unwrap();
    let out = run_in(dir.path(), &["verify", "--config", "edited.json", "--angles", SIX]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "UnmatchedTargets");
    assert!(!err["unmatched"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["realize", "--angles", "1.0", "--bogus"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let out = run_in(dir.path(), &["verify", "--config", "missing.json", "--angles", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "Usage");
    assert_eq!(run_in(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["realize", "--angles", "3.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "InvalidAngle");
}

#[test]
fn manifests_run_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = r#"{
        "version": 1,
        "command": "estimate-prob",
        "parameters": {"dim": 2, "m": 3, "n": 2, "samples": 5000},
        "seed": 9,
        "output_path": "p.json"
    }"#;
    std::fs::write(dir.path().join("m.json"), manifest).unwrap();
    let sub = dir.path().join("sub");
    std::fs::create_dir(&sub).unwrap();
    // paths resolve against the manifest, not the working directory
    assert!(run_in(&sub, &["run", "../m.json"]).status.success());
    let first = std::fs::read(dir.path().join("p.json")).unwrap();
    assert!(run_in(dir.path(), &["run", "m.json"]).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("p.json")).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["samples"], 5000);
    assert!((doc["p_hat"].as_f64().unwrap() - 0.5).abs() < 0.03);

    std::fs::write(dir.path().join("bad.json"), manifest.replace("\"samples\"", "\"sample_count\"")).unwrap();
    assert_eq!(run_in(dir.path(), &["run", "bad.json"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad2.json"), manifest.replace("\"seed\"", "\"rng\"")).unwrap();
    assert_eq!(run_in(dir.path(), &["run", "bad2.json"]).status.code(), Some(2));
}

#[test]
fn realize_manifest_matches_direct_call() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = format!(
        r#"{{"command": "realize", "parameters": {{"angles": [{SIX}], "m": 5, "convex": true}}, "output_path": "via_manifest.json"}}"#
    );
    std::fs::write(dir.path().join("m.json"), manifest).unwrap();
    assert!(run_in(dir.path(), &["run", "m.json"]).status.success());
    assert!(run_in(dir.path(), &["realize", "--angles", SIX, "--m", "5", "--convex", "--output", "direct.json"]).status.success());
    for (a, b) in [("via_manifest.json", "direct.json"), ("via_manifest.cert.json", "direct.cert.json")] {
        assert_eq!(std::fs::read(dir.path().join(a)).unwrap(), std::fs::read(dir.path().join(b)).unwrap());
    }
}

#[test]
fn seed_defaults_and_environment_override() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["estimate-prob", "--dim", "2", "--m", "3", "--n", "2", "--samples", "300"];
    let default = run_in(dir.path(), &args);
    let doc: serde_json::Value = serde_json::from_slice(&default.stdout).unwrap();
    assert_eq!(doc["seed"], 42);
    let env = Command::new(bin()).args(args).env("ANGLE_SEED", "77").output().unwrap();
    let explicit = run_in(dir.path(), &[&args[..], &["--seed", "77"]].concat());
    assert_eq!(env.stdout, explicit.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(doc["seed"], 77);
}

#[test]
fn solve_reports_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["solve", "--angles", "1.0471975511965976,1.0471975511965976,1.0471975511965976", "--m", "3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "Realized");
    assert_eq!(doc["certificate"]["assignments"].as_array().unwrap().len(), 3);
    let out = run_in(dir.path(), &["solve", "--angles", "2.8,0.6", "--m", "3"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "NotFound");
    assert!(doc["config"].is_null());
}

#[test]
fn projection_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["project-exp", "--dims", "3,10", "--eps", "0.04", "--thetas", "0.1", "--samples", "2000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,theta,eps,samples,empirical,bound,pass");
    assert_eq!(lines.len(), 1 + 2 * 2);
    assert!(lines[1].starts_with("3,,0.04,2000,"));
    assert!(lines[2].starts_with("3,0.1,0.04,2000,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn plot_and_enumerate() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.json"), r#"{"version": 1, "dim": 3, "points": [[0,0,0],[1,0,1],[0,1,2]]}"#).unwrap();
    let out = run_in(dir.path(), &["plot", "--config", "t.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "DimensionUnsupported");
    let out = run_in(dir.path(), &["plot", "--config", "t.json", "--project-first-two", "--output", "t.svg"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("t.svg")).unwrap().matches("<circle").count(), 3);
    let out = run_in(dir.path(), &["enumerate", "--config", "t.json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 3);
}

#[test]
fn highdim_realize() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["realize", "--dim", "3", "--eps", "0.3", "--angles", "0.5,1.0,1.5,2.0,2.5", "--output", "h.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = io::config_from_json(&std::fs::read_to_string(dir.path().join("h.json")).unwrap()).unwrap();
    assert_eq!(c.dim(), 3);
}
