use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oltr-lab"))
        .args(args)
        .env_remove("OLTR_LAB_OUTPUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, ranker: &str, attack: &str, out: &Path) -> std::path::PathBuf {
    let cfg = format!(
        r#"{{
  "experiment": {{"name": "small"}},
  "model": {{"kind": "cascade"}},
  "ranker": "{ranker}",
  "attack": {{"kind": "{attack}"}},
  "env": {{"L": 8, "K": 3, "T": 2000}},
  "seeds": {{"count": 3, "base": 5}},
  "output": {{"dir": "{}", "cadence": 250, "round_log": "checkpoints"}}
}}"#,
        out.display()
    );
    let path = dir.join(format!("{ranker}-{attack}.json"));
    fs::write(&path, cfg).unwrap();
    path
}

#[test]
fn thresholds_match_closed_forms() {
    let o = lab(&["thresholds", "--ranker", "toprank", "-L", "50", "-K", "5", "-T", "100000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3495");

    let o = lab(&["thresholds", "--ranker", "batchrank", "-L", "50", "-K", "5", "-T", "100000"]);
    assert_eq!(stdout(&o).trim(), "9211");

    let o = lab(&["thresholds", "--ranker", "cascade_ucb1", "-L", "50", "-K", "5", "-T", "100000"]);
    assert!(!o.status.success());
}

#[test]
fn validate_rejects_malformed_file_without_output() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"experiment\": ").unwrap();
    let o = lab(&["validate", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse"));
    assert!(!out.exists());

    let good = write_config(tmp.path(), "toprank", "atq", &out);
    let o = lab(&["validate", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("ok: small"));
    assert!(!out.exists());
}

#[test]
fn run_writes_all_artifacts_deterministically() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "batchrank", "atq", &out);
    let o = lab(&["run", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "aggregate.csv",
        "summary.json",
        "config.json",
        "cost.svg",
        "n_target.svg",
        "run_5.csv",
        "run_7.csv",
        "rounds_6.jsonl",
    ] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let first = fs::read(out.join("aggregate.csv")).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["T1"], atq_t1());
    assert_eq!(summary["runs"].as_array().unwrap().len(), 3);

    let again = tmp.path().join("again");
    let o = lab(&["run", cfg.to_str().unwrap(), "--output", again.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(first, fs::read(again.join("aggregate.csv")).unwrap());

    // the emitted resolved config runs to the same result
    let resolved = out.join("config.json");
    let third = tmp.path().join("third");
    let o = lab(&["run", resolved.to_str().unwrap(), "--output", third.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(first, fs::read(third.join("aggregate.csv")).unwrap());
}

fn atq_t1() -> u64 {
    (16.0 * 8.0 * 2000f64.ln()).ceil() as u64
}

#[test]
fn environment_variable_overrides_output_dir() {
    let tmp = TempDir::new().unwrap();
    let configured = tmp.path().join("configured");
    let overridden = tmp.path().join("overridden");
    let cfg = write_config(tmp.path(), "toprank", "none", &configured);
    let o = Command::new(env!("CARGO_BIN_EXE_oltr-lab"))
        .args(["run", cfg.to_str().unwrap()])
        .env("OLTR_LAB_OUTPUT", &overridden)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(overridden.join("aggregate.csv").is_file());
    assert!(!configured.exists());
}

#[test]
fn sweep_writes_one_directory_per_attack() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("sweep");
    let cfg = write_config(tmp.path(), "batchrank", "none", &out);
    let o = lab(&["sweep", cfg.to_str().unwrap(), "--attacks", "ga,atq,none"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for a in ["ga", "atq", "none"] {
        let csv = fs::read_to_string(out.join(a).join("aggregate.csv")).unwrap();
        assert!(csv.starts_with("t,n_target_first_mean,"));
    }

    let o = lab(&["sweep", cfg.to_str().unwrap(), "--attacks", "ga,bogus"]);
    assert!(!o.status.success());
}

#[test]
fn unwritable_output_fails_before_writing() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let cfg = write_config(tmp.path(), "toprank", "none", &blocker.join("sub"));
    let o = lab(&["run", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert_eq!(fs::read_to_string(&blocker).unwrap(), "not a directory");
}
