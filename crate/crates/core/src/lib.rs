//! Simulation of data-poisoning attacks against online learning-to-rank.
//!
//! The crate models users with stochastic click models, implements five
//! bandit rankers, and provides two attackers that push a chosen target
//! item to the top of the ranking: a list-poisoning attack that swaps
//! shown items for low-attractiveness auxiliary items, and an
//! attack-then-quit click-poisoning attack. The [`harness`] wires them into
//! a reproducible round loop and aggregates repeated runs.

pub mod attacks;
pub mod click_model;
pub mod error;
pub mod harness;
pub mod io;
pub mod kl;
pub mod metrics;
pub mod rankers;
pub mod rng;
pub mod types;

pub use click_model::{optimal_list, ClickModel, ClickModelKind, ExaminationProfile};
pub use error::{LabError, Result};
pub use metrics::{regret_increment, Checkpoint, RunMetrics};
pub use rankers::{build_ranker, Ranker, RankerId, RankerSetup};
pub use rng::RngStream;
pub use types::{AttractionTable, ClickVector, ItemId, RankedList};
pub use attacks::{AttackKind, AttackLedger, Attacker};
pub use harness::{
    run_one, run_repetitions, verify_theorem2_bound, AggregateResult, AttackSpec, ExperimentConfig, RunOutcome,
};
pub use io::{load_config, LoadedConfig};
