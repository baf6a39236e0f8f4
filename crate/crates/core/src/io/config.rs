//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "experiment": {"name": "atq-batchrank"},
//!   "model": {"kind": "cascade"},
//!   "ranker": "batchrank",
//!   "attack": {"kind": "atq", "params": {"T1": "auto"}},
//!   "env": {"L": 50, "K": 5, "T": 100000, "alphas": "uniform"},
//!   "seeds": {"count": 10, "base": 0},
//!   "output": {"dir": "results/atq-batchrank", "cadence": 100}
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::attacks::{AttackKind, DEFAULT_BASELINE_ROUNDS};
use crate::click_model::{ClickModel, ClickModelKind, ExaminationProfile};
use crate::error::{LabError, Result};
use crate::harness::{
    auto_atq_threshold, AlphaSource, AttackSpec, ExperimentConfig, RoundLogMode, TargetRule, DEFAULT_CADENCE,
};
use crate::rankers::RankerId;
use crate::types::ItemId;

use super::data::load_attractiveness;

/// Overrides `output.dir` when set.
pub const OUTPUT_ENV_VAR: &str = "OLTR_LAB_OUTPUT";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: ExperimentSection,
    model: ModelSection,
    ranker: String,
    #[serde(default)]
    attack: AttackSection,
    env: EnvSection,
    seeds: SeedsSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttackSection {
    kind: String,
    #[serde(default)]
    params: AttackParams,
}

impl Default for AttackSection {
    fn default() -> Self {
        Self {
            kind: "none".into(),
            params: AttackParams::default(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttackParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<TargetValue>,
    #[serde(rename = "T1", default, skip_serializing_if = "Option::is_none")]
    t1: Option<ThresholdValue>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aux_alphas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum TargetValue {
    Index(usize),
    /// Only `"random"` is accepted.
    Rule(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ThresholdValue {
    Rounds(u64),
    /// Only `"auto"` is accepted.
    Auto(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvSection {
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "T")]
    t: u64,
    #[serde(default = "uniform")]
    alphas: String,
}

fn uniform() -> String {
    "uniform".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum SeedsSection {
    List(Vec<u64>),
    Range(SeedRange),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedRange {
    count: u64,
    #[serde(default)]
    base: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    #[serde(default = "default_dir")]
    dir: PathBuf,
    #[serde(default = "default_cadence")]
    cadence: u64,
    #[serde(default)]
    round_log: RoundLogMode,
    #[serde(default = "default_true")]
    charts: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            cadence: DEFAULT_CADENCE,
            round_log: RoundLogMode::Off,
            charts: true,
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_cadence() -> u64 {
    DEFAULT_CADENCE
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSettings {
    pub dir: PathBuf,
    pub charts: bool,
}

impl OutputSettings {
    /// `output.dir`, unless overridden by the environment.
    pub fn effective_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_ENV_VAR) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.dir.clone(),
        }
    }
}

/// A fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub experiment: ExperimentConfig,
    pub output: OutputSettings,
    /// Where the attractiveness table came from, if not generated.
    pub alphas_path: Option<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_config(&text, path)
}

/// Parses and resolves a configuration. Relative attractiveness paths are
/// taken relative to the directory of `path`.
pub fn parse_config(text: &str, path: &Path) -> Result<LoadedConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => LabError::Schema(format!("{}: {e}", path.display())),
            _ => LabError::ConfigParse {
                path: path.to_path_buf(),
                message: e.to_string(),
            },
        }
    })?;
    resolve(file, path.parent().unwrap_or(Path::new("")))
}

fn resolve(file: ConfigFile, base: &Path) -> Result<LoadedConfig> {
    let env = &file.env;
    if env.k > env.l {
        return Err(LabError::param(format!(
            "K = {} exceeds L = {}: the list cannot be longer than the catalog",
            env.k, env.l
        )));
    }
    let ranker: RankerId = file.ranker.parse()?;
    let attack_kind: AttackKind = file.attack.kind.parse()?;

    let model = match file.model.kind.as_str() {
        "cascade" => {
            if file.model.chi.is_some() {
                return Err(LabError::Schema("model.chi applies only to the pbm model".into()));
            }
            ClickModel::Cascade
        }
        "pbm" => ClickModel::PositionBased(match &file.model.chi {
            Some(chi) => ExaminationProfile::new(chi.clone())?,
            None => ExaminationProfile::harmonic(env.k),
        }),
        other => {
            return Err(LabError::Schema(format!(
                "unknown click model {other:?} (expected \"cascade\" or \"pbm\")"
            )))
        }
    };

    let params = &file.attack.params;
    let reject = |name: &str| {
        Err(LabError::Schema(format!(
            "attack.params.{name} does not apply to attack {attack_kind}"
        )))
    };
    if params.t1.is_some() && attack_kind != AttackKind::Atq {
        return reject("T1");
    }
    if params.n.is_some() && !matches!(attack_kind, AttackKind::Reduce | AttackKind::Increase) {
        return reject("N");
    }
    if params.aux_alphas.is_some() && attack_kind != AttackKind::Ga {
        return reject("aux_alphas");
    }
    let baseline_rounds = params.n.unwrap_or(DEFAULT_BASELINE_ROUNDS);
    let attack = match attack_kind {
        AttackKind::None => AttackSpec::None,
        AttackKind::Ga => AttackSpec::Ga {
            auxiliary_alphas: params.aux_alphas.clone(),
        },
        AttackKind::Atq => AttackSpec::Atq {
            threshold: match &params.t1 {
                None => auto_atq_threshold(ranker, env.l, env.k, env.t)?,
                Some(ThresholdValue::Auto(s)) if s == "auto" => auto_atq_threshold(ranker, env.l, env.k, env.t)?,
                Some(ThresholdValue::Rounds(n)) => *n,
                Some(ThresholdValue::Auto(s)) => {
                    return Err(LabError::Schema(format!(
                        "attack.params.T1 must be a round count or \"auto\", got {s:?}"
                    )))
                }
            },
        },
        AttackKind::Reduce => AttackSpec::Reduce {
            rounds: baseline_rounds,
        },
        AttackKind::Increase => AttackSpec::Increase {
            rounds: baseline_rounds,
        },
    };

    let target = match &params.target {
        None => TargetRule::RandomSuboptimal,
        Some(TargetValue::Rule(s)) if s == "random" => TargetRule::RandomSuboptimal,
        Some(TargetValue::Index(i)) => TargetRule::Fixed(ItemId(*i)),
        Some(TargetValue::Rule(s)) => {
            return Err(LabError::Schema(format!(
                "attack.params.target must be an item index or \"random\", got {s:?}"
            )))
        }
    };

    let (alphas, alphas_path) = if env.alphas == "uniform" {
        (AlphaSource::Uniform, None)
    } else {
        let p = base.join(&env.alphas);
        let table = load_attractiveness(&p)?;
        (AlphaSource::Table(table), Some(p))
    };

    let seeds = match &file.seeds {
        SeedsSection::List(s) => s.clone(),
        SeedsSection::Range(r) => (0..r.count).map(|i| r.base + i).collect(),
    };

    let experiment = ExperimentConfig {
        name: file.experiment.name.clone(),
        model,
        ranker,
        attack,
        catalog_size: env.l,
        list_len: env.k,
        horizon: env.t,
        seeds,
        alphas,
        target,
        cadence: file.output.cadence,
        round_log: file.output.round_log,
    };
    experiment.validate()?;
    Ok(LoadedConfig {
        experiment,
        output: OutputSettings {
            dir: file.output.dir.clone(),
            charts: file.output.charts,
        },
        alphas_path,
    })
}

/// Serializes a resolved configuration so that loading it again yields the
/// same [`LoadedConfig`]. Defaults are written out explicitly.
pub fn emit_config(cfg: &LoadedConfig) -> Result<String> {
    let e = &cfg.experiment;
    let alphas = match (&e.alphas, &cfg.alphas_path) {
        (AlphaSource::Uniform, _) => uniform(),
        (AlphaSource::Table(_), Some(p)) => p.to_string_lossy().into_owned(),
        (AlphaSource::Table(_), None) => {
            return Err(LabError::param(
                "an in-memory attractiveness table has no file to refer to",
            ))
        }
    };
    let mut params = AttackParams {
        target: match e.target {
            TargetRule::RandomSuboptimal => Some(TargetValue::Rule("random".into())),
            TargetRule::Fixed(i) => Some(TargetValue::Index(i.0)),
        },
        ..AttackParams::default()
    };
    match &e.attack {
        AttackSpec::None => {}
        AttackSpec::Ga { auxiliary_alphas } => params.aux_alphas = auxiliary_alphas.clone(),
        AttackSpec::Atq { threshold } => params.t1 = Some(ThresholdValue::Rounds(*threshold)),
        AttackSpec::Reduce { rounds } | AttackSpec::Increase { rounds } => params.n = Some(*rounds),
    }
    let file = ConfigFile {
        experiment: ExperimentSection { name: e.name.clone() },
        model: ModelSection {
            kind: match e.model.kind() {
                ClickModelKind::Cascade => "cascade".into(),
                ClickModelKind::PositionBased => "pbm".into(),
            },
            chi: e.model.profile().map(|p| p.as_slice().to_vec()),
        },
        ranker: e.ranker.to_string(),
        attack: AttackSection {
            kind: e.attack.kind().to_string(),
            params,
        },
        env: EnvSection {
            l: e.catalog_size,
            k: e.list_len,
            t: e.horizon,
            alphas,
        },
        seeds: SeedsSection::List(e.seeds.clone()),
        output: OutputSection {
            dir: cfg.output.dir.clone(),
            cadence: e.cadence,
            round_log: e.round_log,
            charts: cfg.output.charts,
        },
    };
    serde_json::to_string_pretty(&file).map_err(|e| LabError::Internal(format!("config serialization: {e}")))
}
