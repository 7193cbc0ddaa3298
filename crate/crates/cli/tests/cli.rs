use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn jtd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtd"))
        .args(args)
        .env_remove("JTD_THREADS")
        .output()
        .expect("binary runs")
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("exp.toml");
    fs::write(&p, body).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn run_ok(args: &[&str]) {
    let o = jtd(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn metrics_reports_minimum_power() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m");
    let cfg = configs_dir().join("metrics.toml");
    run_ok(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let v = read_json(&out.join("metrics.json"));
    let p = v["p_min_watts"].as_f64().unwrap();
    assert!((p / 8.4681e-6 - 1.0).abs() < 5e-6, "{p}");
    let k = v["flux_coefficient_per_tesla"].as_f64().unwrap();
    assert!((k - 151.0).abs() < 1.0);
    assert_eq!(v["manifest"]["config"]["command"], "metrics");
}

#[test]
fn unknown_key_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "command = \"scd\"\n[junction]\nphi_zero = 0.1\n");
    let o = jtd(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let line = String::from_utf8(o.stderr).unwrap();
    assert_eq!(line.lines().count(), 1);
    let v: Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["error"], "config");
    assert_eq!(v["key"], "phi_zero");
}

#[test]
fn invalid_value_names_its_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "command = \"scd\"\n[junction]\nphi0 = 2.0\n[drive]\nkappa = 5.0\n",
    );
    let out = tmp.path().join("o");
    let o = jtd(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(String::from_utf8(o.stderr).unwrap().trim()).unwrap();
    assert_eq!(v["key"], "phi_esc");
}

#[test]
fn conflicting_command_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "command = \"scd\"\n[drive]\nkappa = 5.0\n");
    let o = jtd(&["detect", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn blow_up_is_a_numeric_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "command = \"scd\"\nruns = 3\n[junction]\ndt = 1e300\n[drive]\nkappa = 5.0\n",
    );
    let out = tmp.path().join("o");
    let o = jtd(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(String::from_utf8(o.stderr).unwrap().trim()).unwrap();
    assert_eq!(v["error"], "numeric");
    assert_eq!(v["module"], "ensemble");
    assert_eq!(v["trajectory"], 0);
}

#[test]
fn scd_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "command = \"scd\"\nruns = 40\nseed = 9\n[junction]\nphi0 = 0.2\n[drive]\nkappa = 5.0\n",
    );
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for (dir, threads) in [(&a, "1"), (&b, "2")] {
        run_ok(&[
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--plot",
            "--threads",
            threads,
        ]);
    }
    for name in ["scd_samples.csv", "scd_hist.svg"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    // Only the output directory differs between the two manifests.
    let mut sa = read_json(&a.join("scd_summary.json"));
    let mut sb = read_json(&b.join("scd_summary.json"));
    sa["manifest"]["config"]["output_dir"] = Value::Null;
    sb["manifest"]["config"]["output_dir"] = Value::Null;
    assert_eq!(sa, sb);
    assert_eq!(sa["n_runs"], 40);
    let csv = fs::read_to_string(a.join("scd_samples.csv")).unwrap();
    assert!(csv.starts_with("index,i_sw\n"));
    assert_eq!(csv.lines().count() as u64 - 1, sa["n_switched"].as_u64().unwrap());
}

#[test]
fn seed_flag_overrides_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "command = \"scd\"\nruns = 10\nseed = 9\n[drive]\nkappa = 5.0\n",
    );
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run_ok(&["--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    run_ok(&["--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap(), "--seed", "10"]);
    assert_ne!(
        fs::read(a.join("scd_samples.csv")).unwrap(),
        fs::read(b.join("scd_samples.csv")).unwrap()
    );
    assert_eq!(read_json(&b.join("scd_summary.json"))["seed"], 10);
}

#[test]
fn detect_writes_summary_and_plots() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("d");
    let cfg = configs_dir().join("detect_cw_nonequilibrium_phi0.2.toml");
    run_ok(&["--config", cfg.to_str().unwrap(), "--runs", "200", "--out", out.to_str().unwrap()]);
    let v = read_json(&out.join("detect_summary.json"));
    assert!(v["auc_star"].as_f64().unwrap() > 0.9);
    assert_eq!(v["detectable"], true);
    for f in ["roc.csv", "scd0_samples.csv", "scd1_samples.csv", "roc.svg", "scd_hist.svg", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn every_shipped_config_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let mut names: Vec<_> = fs::read_dir(configs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    names.sort();
    assert!(names.len() >= 9);
    for cfg in names {
        let stem = cfg.file_stem().unwrap().to_str().unwrap().to_string();
        let out = tmp.path().join(&stem);
        run_ok(&["--config", cfg.to_str().unwrap(), "--runs", "8", "--out", out.to_str().unwrap()]);
        let jsons = fs::read_dir(&out)
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
            .count();
        assert!(jsons >= 2, "{stem}");
    }
}
