//! Result artifacts: CSV series, a JSON summary and SVG line charts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::attacks::AttackKind;
use crate::error::{LabError, Result};
use crate::harness::{verify_theorem2_bound, AggregateResult, AttackSpec, RunOutcome};
use crate::rankers::RankerId;

pub const AGGREGATE_HEADER: &str =
    "t,n_target_first_mean,n_target_first_var,cost_mean,cost_var,regret_mean,regret_var,runs_ok,runs_failed";
pub const RUN_HEADER: &str = "t,n_target_first,cost,regret";

#[derive(Debug, Clone, Default)]
pub struct EmitOptions {
    pub charts: bool,
    /// Per-seed checkpoint CSVs, plus the round log when one was kept.
    pub per_run: bool,
    /// Written verbatim to `config.json` when present.
    pub resolved_config: Option<String>,
}

/// Formats with 6 significant digits, dropping trailing zeros, in plain
/// notation for exponents in `-4..6` and scientific notation otherwise.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn render_aggregate_csv(result: &AggregateResult) -> String {
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for r in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.t,
            format_sig6(r.target_first_mean),
            format_sig6(r.target_first_var),
            format_sig6(r.cost_mean),
            format_sig6(r.cost_var),
            format_sig6(r.regret_mean),
            format_sig6(r.regret_var),
            r.runs_ok,
            r.runs_failed
        );
    }
    out
}

pub fn render_run_csv(run: &RunOutcome) -> String {
    let mut out = String::from(RUN_HEADER);
    out.push('\n');
    for c in run.metrics.checkpoints() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.t,
            format_sig6(c.target_first as f64),
            format_sig6(c.cost as f64),
            format_sig6(c.regret)
        );
    }
    out
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn render_summary(result: &AggregateResult) -> Value {
    let cfg = &result.config;
    let runs: Vec<Value> = result
        .runs
        .iter()
        .map(|r| {
            let last = r.final_checkpoint();
            let mut v = json!({
                "seed": r.seed,
                "ok": r.is_ok(),
                "failure": r.failure,
                "target": r.target.0,
                "target_alpha": r.alphas.alpha(r.target),
                "rounds_completed": last.map_or(0, |c| c.t),
                "n_target_first": last.map_or(0, |c| c.target_first),
                "cost": last.map_or(0, |c| c.cost),
                "regret": last.map_or(0.0, |c| c.regret),
            });
            if let Some(ok) = r.atq_bound_holds(cfg.horizon) {
                v["atq_bound"] = json!(pass_fail(ok));
            }
            v
        })
        .collect();

    let mut verdicts = serde_json::Map::new();
    if cfg.attack.kind() == AttackKind::Atq {
        let key = match cfg.ranker {
            RankerId::BatchRank => Some("theorem3_bound"),
            RankerId::TopRank => Some("theorem4_bound"),
            _ => None,
        };
        if let Some(key) = key {
            let held = result
                .runs
                .iter()
                .filter(|r| r.atq_bound_holds(cfg.horizon) == Some(true))
                .count();
            let all = held == result.runs.len();
            verdicts.insert(key.into(), json!(pass_fail(all)));
            verdicts.insert(format!("{key}_runs_held"), json!(held));
        }
    }
    if let Ok(v) = verify_theorem2_bound(result) {
        verdicts.insert("theorem2_bound".into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    json!({
        "name": cfg.name,
        "ranker": cfg.ranker.as_str(),
        "model": cfg.model.kind(),
        "attack": cfg.attack.kind().as_str(),
        "L": cfg.catalog_size,
        "K": cfg.list_len,
        "T": cfg.horizon,
        "seeds": cfg.seeds,
        "T1": match cfg.attack { AttackSpec::Atq { threshold } => Some(threshold), _ => None },
        "runs_ok": result.runs_ok(),
        "runs_failed": result.runs_failed(),
        "verdicts": verdicts,
        "runs": runs,
    })
}

/// Line chart of `mean` with a `mean +/- sqrt(var)` band.
fn render_chart(title: &str, points: &[(f64, f64, f64)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    let x_max = points.iter().map(|p| p.0).fold(1.0, f64::max);
    let y_max = points
        .iter()
        .map(|p| p.1 + p.2.sqrt())
        .fold(1.0, f64::max);
    let sx = |x: f64| PAD + x / x_max * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - y.max(0.0) / y_max * (H - 2.0 * PAD);

    let line: Vec<String> = points
        .iter()
        .map(|&(x, m, _)| format!("{:.2},{:.2}", sx(x), sy(m)))
        .collect();
    let upper = points.iter().map(|&(x, m, v)| format!("{:.2},{:.2}", sx(x), sy(m + v.sqrt())));
    let lower = points
        .iter()
        .rev()
        .map(|&(x, m, v)| format!("{:.2},{:.2}", sx(x), sy(m - v.sqrt())));
    let band: Vec<String> = upper.chain(lower).collect();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#,
        W / 2.0
    );
    let (x0, y0, x1, y1) = (PAD, H - PAD, W - PAD, PAD);
    let _ = writeln!(
        svg,
        r#"<polyline points="{x0},{y1} {x0},{y0} {x1},{y0}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x0}" y="{}" font-family="sans-serif" font-size="12">0</text>"#,
        y0 + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x1}" y="{}" text-anchor="end" font-family="sans-serif" font-size="12">t = {}</text>"#,
        y0 + 16.0,
        format_sig6(x_max)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
        x0 - 4.0,
        y1 + 4.0,
        format_sig6(y_max)
    );
    if !points.is_empty() {
        let _ = writeln!(
            svg,
            r##"<polygon points="{}" fill="#1f77b4" fill-opacity="0.2" stroke="none"/>"##,
            band.join(" ")
        );
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
            line.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn check_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let probe = dir.join(".oltr-write-probe");
    fs::write(&probe, b"").map_err(|e| LabError::io(dir, e))?;
    fs::remove_file(&probe).map_err(|e| LabError::io(&probe, e))
}

/// Writes every artifact of `result` into `dir` and returns their paths.
///
/// All contents are rendered before anything is written, each file is first
/// written under a temporary name, and the temporaries are renamed only once
/// all of them were written, so a failure leaves no result files behind.
pub fn emit_results(result: &AggregateResult, dir: &Path, opts: &EmitOptions) -> Result<Vec<PathBuf>> {
    if result.runs.is_empty() {
        return Err(LabError::param("no runs to emit"));
    }
    let mut files: Vec<(String, String)> = vec![("aggregate.csv".into(), render_aggregate_csv(result))];
    if opts.per_run {
        for r in &result.runs {
            files.push((format!("run_{}.csv", r.seed), render_run_csv(r)));
            if !r.round_log.is_empty() {
                let mut lines = String::new();
                for rec in &r.round_log {
                    let line = serde_json::to_string(rec)
                        .map_err(|e| LabError::Internal(format!("round log serialization: {e}")))?;
                    lines.push_str(&line);
                    lines.push('\n');
                }
                files.push((format!("rounds_{}.jsonl", r.seed), lines));
            }
        }
    }
    let summary = serde_json::to_string_pretty(&render_summary(result))
        .map_err(|e| LabError::Internal(format!("summary serialization: {e}")))?;
    files.push(("summary.json".into(), summary + "\n"));
    if let Some(cfg) = &opts.resolved_config {
        files.push(("config.json".into(), cfg.clone() + "\n"));
    }
    if opts.charts {
        let series = |f: fn(&crate::harness::AggregateRow) -> (f64, f64)| -> Vec<(f64, f64, f64)> {
            result
                .rows
                .iter()
                .map(|r| {
                    let (m, v) = f(r);
                    (r.t as f64, m, v)
                })
                .collect()
        };
        let name = &result.config.name;
        files.push((
            "cost.svg".into(),
            render_chart(&format!("{name}: attack cost"), &series(|r| (r.cost_mean, r.cost_var))),
        ));
        files.push((
            "n_target.svg".into(),
            render_chart(
                &format!("{name}: rounds with the target first"),
                &series(|r| (r.target_first_mean, r.target_first_var)),
            ),
        ));
    }

    check_writable(dir)?;
    let mut staged = Vec::new();
    for (name, contents) in &files {
        let tmp = dir.join(format!(".{name}.tmp"));
        if let Err(e) = fs::write(&tmp, contents) {
            for t in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(LabError::io(&tmp, e));
        }
        staged.push(tmp);
    }
    let mut written = Vec::new();
    for ((name, _), tmp) in files.iter().zip(&staged) {
        let dest = dir.join(name);
        fs::rename(tmp, &dest).map_err(|e| LabError::io(&dest, e))?;
        written.push(dest);
    }
    Ok(written)
}
