use std::path::Path;
use std::process::{Command, Output};

fn spade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spade")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn fisher_sinc_prints_closed_form() {
    let out = spade(&["fisher", "--psf", "sinc", "--width", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("quantum_fisher 3.28986"), "{text}");
    assert!(text.contains("(divergent)"));
}

#[test]
fn fisher_gaussian_table() {
    let out = spade(&["fisher", "--psf", "gaussian", "--width", "0.05", "--points", "4"]);
    let text = stdout(&out);
    let table: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("delta ")).skip(1).collect();
    assert_eq!(table.len(), 5);
    assert_eq!(table[0], "0 0");
    let c: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("classical_smalld_coefficient "))
        .unwrap()
        .parse()
        .unwrap();
    // 1/(8σ⁴) at σ = 0.05.
    assert!((c / 20_000.0 - 1.0).abs() < 1e-9, "{c}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(spade(&["fisher", "--psf", "airy"]).status.code(), Some(2));
    assert_eq!(spade(&["fisher", "--width", "-1"]).status.code(), Some(2));
    assert_eq!(spade(&["sweep", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(spade(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_config_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[nested]\nkey = 1\n").unwrap();
    let out = spade(&["sweep", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nested"));
}

fn run_sweep(dir: &Path, config: &str, extra: &[&str]) -> String {
    let cfg = dir.join("sweep.toml");
    std::fs::write(&cfg, config).unwrap();
    let out_dir = dir.join("out");
    let mut args = vec!["sweep", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = spade(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap()
}

#[test]
fn sweep_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_sweep(
        dir.path(),
        "n_trials = 3\nphoton_budget = 500\ndelta_start = 0.5\ndelta_stop = 1.0\ndelta_step = 0.5\n",
        &["--dump-trials"],
    );
    assert!(csv.starts_with("method,delta_true,n_trials,mean,std,bias,mse,mse_over_qcrlb,crlb_ratio,clamp_count\n"));
    assert_eq!(csv.lines().count(), 5);
    let out = dir.path().join("out");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["n_trials"], 3);
    assert!(json["provenance"]["code_version"].is_string());
    assert_eq!(std::fs::read_to_string(out.join("trials.csv")).unwrap().lines().count(), 13);
    assert_eq!(std::fs::read_to_string(out.join("reference.csv")).unwrap().lines().count(), 3);
}

#[test]
fn projection_only_sweep_has_no_direct_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_sweep(dir.path(), "n_trials = 4\nphoton_budget = 1000\nmethods = [\"projection\"]\n", &[]);
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("projection,")));
}

#[test]
fn simulate_dumps_outcome() {
    let out = spade(&["simulate", "--delta", "0.5", "--photons", "1000", "--seed", "4", "--photon-model", "fixed"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let o = &v["outcome"];
    let sum = o["n_0"].as_u64().unwrap() + o["n_a"].as_u64().unwrap() + o["n_lost"].as_u64().unwrap();
    assert_eq!(sum, 1000);
    assert!(v["estimate"]["delta_hat"].as_f64().unwrap() >= 0.0);

    let out = spade(&["simulate", "--delta", "0.5", "--photons", "1000", "--method", "direct"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["frame"]["counts"].as_array().unwrap().len(), 1024);
}

#[test]
fn modes_export_and_hologram_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = spade(&["modes", "export", "--out-dir", d, "--samples", "4096"]);
    assert!(out.status.success());
    let antisym = dir.path().join("mode_antisym.txt");
    let psf_mode = dir.path().join("mode_psf.txt");
    assert!(antisym.exists() && psf_mode.exists());

    let prefix = dir.path().join("mask");
    let out = spade(&["hologram", "synth", "--carrier", "10", "--out", prefix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let pgm = std::fs::read(dir.path().join("mask.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n4096 1\n255\n"));

    let mask = dir.path().join("mask.txt");
    let readout = |input: &Path| {
        let out = spade(&["hologram", "readout", "--mask", mask.to_str().unwrap(), "--input", input.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out).trim().parse::<f64>().unwrap()
    };
    let matched = readout(&antisym);
    let orthogonal = readout(&psf_mode);
    assert!(matched > 0.0);
    assert!(orthogonal <= 1e-4 * matched);
}

#[test]
fn hologram_rejects_undersampled_carrier() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("mask");
    let out = spade(&["hologram", "synth", "--carrier", "100", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
