//! Result files and config loading through the filesystem.

use std::fs;

use oltr_core::click_model::ClickModel;
use oltr_core::harness::{run_repetitions, AlphaSource, ExperimentConfig, TargetRule};
use oltr_core::io::{emit_config, emit_results, load_config, EmitOptions, AGGREGATE_HEADER};
use oltr_core::rankers::RankerId;
use oltr_core::types::ItemId;
use oltr_core::LabError;

#[test]
fn aggregate_header_is_stable() {
    assert_eq!(
        AGGREGATE_HEADER,
        "t,n_target_first_mean,n_target_first_var,cost_mean,cost_var,regret_mean,regret_var,runs_ok,runs_failed"
    );
}

fn tiny() -> ExperimentConfig {
    let mut c = ExperimentConfig::new(ClickModel::Cascade, RankerId::CascadeUcb1, 5, 2, 1);
    c.seeds = vec![3];
    c
}

#[test]
fn one_checkpoint_one_seed_golden() {
    let res = run_repetitions(&tiny()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_results(&res, dir.path(), &EmitOptions { per_run: true, ..Default::default() }).unwrap();
    let csv = fs::read_to_string(dir.path().join("aggregate.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], AGGREGATE_HEADER);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[2], "0");
    assert_eq!(fields[4], "0");
    assert_eq!(fields[6], "0");
    assert_eq!(&fields[7..], &["1", "0"]);
    let run = fs::read_to_string(dir.path().join("run_3.csv")).unwrap();
    assert!(run.starts_with("t,n_target_first,cost,regret\n1,"));
    assert_eq!(run.lines().count(), 2);
}

#[test]
fn unwritable_directory_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "x").unwrap();
    let res = run_repetitions(&tiny()).unwrap();
    let err = emit_results(&res, &blocker.join("out"), &EmitOptions::default()).unwrap_err();
    assert!(matches!(err, LabError::Io { .. }));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn config_with_attractiveness_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("alphas.csv"), "# item,alpha\n0,0.9\n1,0.8\n2,0.7\n3,0.3\n").unwrap();
    let cfg_path = dir.path().join("exp.json");
    fs::write(
        &cfg_path,
        r#"{
            "experiment": {"name": "file"},
            "model": {"kind": "cascade"},
            "ranker": "cascade_ucb1",
            "attack": {"kind": "ga", "params": {"target": 3}},
            "env": {"L": 4, "K": 2, "T": 500, "alphas": "alphas.csv"},
            "seeds": [4, 2],
            "output": {"dir": "out", "cadence": 50}
        }"#,
    )
    .unwrap();
    let loaded = load_config(&cfg_path).unwrap();
    let AlphaSource::Table(t) = &loaded.experiment.alphas else {
        panic!("expected a table");
    };
    assert_eq!(t.alphas(), &[0.9, 0.8, 0.7, 0.3]);
    assert_eq!(loaded.experiment.target, TargetRule::Fixed(ItemId(3)));

    let emitted = dir.path().join("emitted.json");
    fs::write(&emitted, emit_config(&loaded).unwrap()).unwrap();
    assert_eq!(load_config(&emitted).unwrap(), loaded);

    // a catalog size that disagrees with the file is rejected
    let text = fs::read_to_string(&cfg_path).unwrap().replace(r#""L": 4"#, r#""L": 5"#);
    fs::write(&cfg_path, text).unwrap();
    assert!(load_config(&cfg_path).is_err());
}
