//! The online rankers under attack.
//!
//! Each ranker proposes a list for round `t` and then receives a click
//! vector it assumes was produced by that list. Rankers own their own
//! [`RngStream`] for tie-breaking so they never perturb the user's clicks.

mod batch_rank;
mod cascade;
mod pbm_ucb;
mod top_rank;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use batch_rank::{stage_display_target, BatchRank, BatchView};
pub use cascade::{cascade_ucb1_index, CascadeBandit, CascadeIndex};
pub use pbm_ucb::{pbm_ucb_index, PbmUcb};
pub use top_rank::{edge_threshold, TopRank, DEFAULT_TOPRANK_C};

use crate::click_model::ClickModel;
use crate::error::{LabError, Result};
use crate::rng::RngStream;
use crate::types::{ClickVector, RankedList};

pub trait Ranker: Send {
    fn id(&self) -> RankerId;

    /// The list the ranker wants shown in round `t` (1-based).
    fn propose(&mut self, t: u64) -> Result<RankedList>;

    /// Folds in feedback the ranker attributes to `proposed`.
    fn update(&mut self, t: u64, proposed: &RankedList, feedback: &ClickVector) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RankerId {
    #[serde(rename = "cascade_ucb1")]
    CascadeUcb1,
    #[serde(rename = "cascade_klucb")]
    CascadeKlUcb,
    #[serde(rename = "pbm_ucb")]
    PbmUcb,
    #[serde(rename = "batchrank")]
    BatchRank,
    #[serde(rename = "toprank")]
    TopRank,
}

impl RankerId {
    pub const ALL: [RankerId; 5] = [
        RankerId::CascadeUcb1,
        RankerId::CascadeKlUcb,
        RankerId::PbmUcb,
        RankerId::BatchRank,
        RankerId::TopRank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RankerId::CascadeUcb1 => "cascade_ucb1",
            RankerId::CascadeKlUcb => "cascade_klucb",
            RankerId::PbmUcb => "pbm_ucb",
            RankerId::BatchRank => "batchrank",
            RankerId::TopRank => "toprank",
        }
    }
}

impl fmt::Display for RankerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankerId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        RankerId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| LabError::Schema(format!("unknown ranker id {s:?}")))
    }
}

/// Static inputs every ranker is built from.
#[derive(Debug, Clone)]
pub struct RankerSetup<'a> {
    /// Number of items the ranker believes it is ranking.
    pub n_items: usize,
    pub list_len: usize,
    pub horizon: u64,
    pub model: &'a ClickModel,
}

pub fn build_ranker(id: RankerId, setup: &RankerSetup<'_>, rng: RngStream) -> Result<Box<dyn Ranker>> {
    if setup.list_len == 0 || setup.list_len > setup.n_items {
        return Err(LabError::param(format!(
            "list length {} invalid for {} items",
            setup.list_len, setup.n_items
        )));
    }
    Ok(match id {
        RankerId::CascadeUcb1 => Box::new(CascadeBandit::new(
            CascadeIndex::Ucb1,
            setup.n_items,
            setup.list_len,
            rng,
        )),
        RankerId::CascadeKlUcb => Box::new(CascadeBandit::new(
            CascadeIndex::KlUcb,
            setup.n_items,
            setup.list_len,
            rng,
        )),
        RankerId::PbmUcb => {
            let profile = setup.model.profile().cloned().ok_or_else(|| {
                LabError::param("pbm_ucb needs the position-based model's examination profile")
            })?;
            Box::new(PbmUcb::new(profile, setup.n_items, setup.list_len, rng)?)
        }
        RankerId::BatchRank => Box::new(BatchRank::new(
            setup.n_items,
            setup.list_len,
            setup.horizon,
            rng,
        )?),
        RankerId::TopRank => Box::new(TopRank::new(
            setup.n_items,
            setup.list_len,
            DEFAULT_TOPRANK_C,
            1.0 / setup.horizon as f64,
            rng,
        )?),
    })
}

pub(crate) fn check_feedback(proposed: &RankedList, feedback: &ClickVector, n_items: usize) -> Result<()> {
    if feedback.n_items() != n_items {
        return Err(LabError::Feedback(format!(
            "click vector covers {} items, ranker knows {n_items}",
            feedback.n_items()
        )));
    }
    if !feedback.valid_for(proposed) {
        return Err(LabError::Feedback(
            "click on an item outside the proposed list".into(),
        ));
    }
    Ok(())
}
