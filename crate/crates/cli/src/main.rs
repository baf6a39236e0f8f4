use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use oltr_core::attacks::{atq_threshold_batchrank, atq_threshold_toprank, AttackKind, DEFAULT_BASELINE_ROUNDS};
use oltr_core::harness::{auto_atq_threshold, run_repetitions, AggregateResult, AttackSpec};
use oltr_core::io::{emit_config, emit_results, load_config, EmitOptions, LoadedConfig};
use oltr_core::rankers::{RankerId, DEFAULT_TOPRANK_C};

#[derive(Parser)]
#[command(name = "oltr-lab", version, about = "Simulate poisoning attacks on online learning-to-rank")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its results.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config and OLTR_LAB_OUTPUT.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the attack-then-quit length T1 for a ranker.
    Thresholds {
        #[arg(long)]
        ranker: RankerId,
        #[arg(short = 'L')]
        catalog_size: usize,
        #[arg(short = 'K')]
        list_len: usize,
        #[arg(short = 'T')]
        horizon: u64,
        /// TopRank confidence parameter; defaults to 1/T.
        #[arg(long)]
        delta: Option<f64>,
        /// TopRank constant.
        #[arg(long, default_value_t = DEFAULT_TOPRANK_C)]
        c: f64,
    },
    /// Check a config file without running it.
    Validate { config: PathBuf },
    /// Run one environment against several attacks, one subdirectory each.
    Sweep {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        attacks: Vec<AttackKind>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, output } => {
            let cfg = load(&config)?;
            let dir = output.unwrap_or_else(|| cfg.output.effective_dir());
            execute(&cfg, &dir)
        }
        Command::Thresholds {
            ranker,
            catalog_size,
            list_len,
            horizon,
            delta,
            c,
        } => {
            let t1 = match ranker {
                RankerId::BatchRank => atq_threshold_batchrank(catalog_size, horizon as f64)?,
                RankerId::TopRank => {
                    let delta = delta.unwrap_or(1.0 / horizon as f64);
                    atq_threshold_toprank(catalog_size, list_len, delta, c)?
                }
                other => bail!("no attack-then-quit threshold for ranker {other}"),
            };
            println!("{t1}");
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            let e = &cfg.experiment;
            println!(
                "ok: {} ({} vs {}, L={}, K={}, T={}, {} seeds)",
                e.name,
                e.attack.kind(),
                e.ranker,
                e.catalog_size,
                e.list_len,
                e.horizon,
                e.seeds.len()
            );
            Ok(())
        }
        Command::Sweep {
            config,
            attacks,
            output,
        } => {
            let base = load(&config)?;
            let root = output.unwrap_or_else(|| base.output.effective_dir());
            // resolve every attack before running any of them
            let variants = attacks
                .iter()
                .map(|&kind| with_attack(&base, kind).map(|cfg| (kind, cfg)))
                .collect::<Result<Vec<_>>>()?;
            for (kind, cfg) in variants {
                execute(&cfg, &root.join(kind.as_str()))?;
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<LoadedConfig> {
    load_config(path).with_context(|| format!("loading {}", path.display()))
}

fn with_attack(base: &LoadedConfig, kind: AttackKind) -> Result<LoadedConfig> {
    let mut cfg = base.clone();
    let e = &mut cfg.experiment;
    if e.attack.kind() != kind {
        e.attack = match kind {
            AttackKind::None => AttackSpec::None,
            AttackKind::Ga => AttackSpec::Ga { auxiliary_alphas: None },
            AttackKind::Atq => AttackSpec::Atq {
                threshold: auto_atq_threshold(e.ranker, e.catalog_size, e.list_len, e.horizon)?,
            },
            AttackKind::Reduce => AttackSpec::Reduce {
                rounds: DEFAULT_BASELINE_ROUNDS,
            },
            AttackKind::Increase => AttackSpec::Increase {
                rounds: DEFAULT_BASELINE_ROUNDS,
            },
        };
    }
    e.name = format!("{}-{kind}", e.name);
    Ok(cfg)
}

fn execute(cfg: &LoadedConfig, dir: &Path) -> Result<()> {
    let result = run_repetitions(&cfg.experiment)?;
    let opts = EmitOptions {
        charts: cfg.output.charts,
        per_run: cfg.experiment.round_log != Default::default(),
        resolved_config: Some(emit_config(cfg)?),
    };
    emit_results(&result, dir, &opts)?;
    report(&result, dir);
    Ok(())
}

fn report(result: &AggregateResult, dir: &Path) {
    let cfg = &result.config;
    match result.final_row() {
        Some(row) => println!(
            "{}: {} runs ok, {} failed; mean N_T(target) = {:.1}, mean cost = {:.1} -> {}",
            cfg.name,
            row.runs_ok,
            row.runs_failed,
            row.target_first_mean,
            row.cost_mean,
            dir.display()
        ),
        None => println!("{}: every run failed -> {}", cfg.name, dir.display()),
    }
}
