use std::process::Command;

fn flatwood() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flatwood"))
}

/// generate at the small test scale: n = 2000 with a widened window keeps
/// the run under a second while exercising every pipeline stage
fn small_generate_args(cmd: &mut Command) -> &mut Command {
    cmd.args([
        "generate",
        "--n",
        "2000",
        "--gamma-lo",
        "0.001953125",
        "--gamma-hi",
        "0.015625",
        "--k",
        "8",
        "--seed",
        "11",
        "--threshold-ratio",
        "0.02",
    ])
}

#[test]
fn generate_writes_artifact_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let status = small_generate_args(&mut flatwood())
        .args(["--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["fallback"], false);
    let coeffs = v["poly"].as_str().unwrap();
    assert_eq!(coeffs.len(), 4 * 2000 + 1);
    assert!(coeffs.chars().all(|c| c == '+' || c == '-'));
    // n = 2000 selects m = 1, mu = 18, so the center zone spans 2*18-1
    assert_eq!(v["report"]["symmetry"]["center_width"], 35);
    assert!(v["report"]["identity_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn generate_coeffstring_format() {
    let output = small_generate_args(&mut flatwood())
        .args(["--format", "coeffstring"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let line = String::from_utf8(output.stdout).unwrap();
    let line = line.trim();
    assert_eq!(line.len(), 8001);
    assert!(line.chars().all(|c| c == '+' || c == '-'));
}

#[test]
fn generate_paper_profile_refused_with_minimal_n() {
    let output = flatwood()
        .args(["generate", "--profile", "paper", "--n", "10240"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("e22"), "diagnostic should state the minimal n: {err}");
}

#[test]
fn analyze_coeff_string() {
    let output = flatwood().args(["analyze", "--coeffs", "+-+"]).output().unwrap();
    assert!(output.status.success());
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["coeffs"], "+-+");
    assert!(v["report"]["certified_max"].as_f64().unwrap() > 2.9);
}

#[test]
fn analyze_rejects_bad_characters() {
    let output = flatwood().args(["analyze", "--coeffs", "+x+"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn search_skew_class() {
    let output = flatwood()
        .args(["search", "--degree", "8", "--class", "skew-reciprocal"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(v["result"]["enumerated"], 16);
    assert_eq!(v["result"]["degree"], 8);
}

#[test]
fn verify_chain_passes() {
    let output = flatwood().args(["verify", "--module", "chain"]).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("2194"));
    assert!(text.contains("2196"));
}

#[test]
fn verify_rs_battery() {
    let output = flatwood().args(["verify", "--module", "rs", "--m", "5"]).output().unwrap();
    assert!(output.status.success());
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(v["parallelogram_defect"].as_f64().unwrap() < 1e-8 * 64.0);
    assert_eq!(v["parallelogram_pass"], true);
}

#[test]
fn usage_error_is_exit_two() {
    let status = flatwood().args(["generate", "--no-such-flag"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn threads_env_var_is_accepted() {
    let output = flatwood()
        .env("FLATWOOD_THREADS", "1")
        .args(["analyze", "--coeffs", "+-+"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let output = flatwood()
        .env("FLATWOOD_THREADS", "zebra")
        .args(["analyze", "--coeffs", "+-+"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
