//! PBM-UCB: a UCB ranker for the position-based model with a known
//! examination profile.

use crate::click_model::ExaminationProfile;
use crate::error::{LabError, Result};
use crate::kl::exploration_level;
use crate::rng::{sort_desc_random_ties, RngStream};
use crate::types::{ClickVector, ItemId, RankedList};

use super::{check_feedback, Ranker, RankerId};

/// `S / Ñ + sqrt((N / Ñ) * level / (2 Ñ))`, infinite when `Ñ = 0`.
pub fn pbm_ucb_index(clicks: f64, weighted: f64, displays: f64, level: f64) -> f64 {
    if weighted <= 0.0 {
        return f64::INFINITY;
    }
    clicks / weighted + ((displays / weighted) * level / (2.0 * weighted)).sqrt()
}

#[derive(Debug, Clone)]
pub struct PbmUcb {
    profile: ExaminationProfile,
    list_len: usize,
    clicks: Vec<u64>,
    /// Sum of examination probabilities over the positions an item was shown at.
    weighted: Vec<f64>,
    displays: Vec<u64>,
    rng: RngStream,
}

impl PbmUcb {
    pub fn new(profile: ExaminationProfile, n_items: usize, list_len: usize, rng: RngStream) -> Result<Self> {
        if profile.len() < list_len {
            return Err(LabError::param(format!(
                "examination profile of length {} shorter than list length {list_len}",
                profile.len()
            )));
        }
        Ok(Self {
            profile,
            list_len,
            clicks: vec![0; n_items],
            weighted: vec![0.0; n_items],
            displays: vec![0; n_items],
            rng,
        })
    }

    pub fn index_of(&self, item: ItemId, t: u64) -> f64 {
        let i = item.0;
        pbm_ucb_index(
            self.clicks[i] as f64,
            self.weighted[i],
            self.displays[i] as f64,
            exploration_level(t as f64),
        )
    }
}

impl Ranker for PbmUcb {
    fn id(&self) -> RankerId {
        RankerId::PbmUcb
    }

    fn propose(&mut self, t: u64) -> Result<RankedList> {
        let mut scored: Vec<(ItemId, f64)> = (0..self.clicks.len())
            .map(|i| (ItemId(i), self.index_of(ItemId(i), t)))
            .collect();
        sort_desc_random_ties(&mut scored, &mut self.rng, |&(_, u)| u);
        Ok(RankedList::from_vec_unchecked(
            scored.into_iter().take(self.list_len).map(|(i, _)| i).collect(),
        ))
    }

    fn update(&mut self, _t: u64, proposed: &RankedList, feedback: &ClickVector) -> Result<()> {
        check_feedback(proposed, feedback, self.clicks.len())?;
        for (k, &item) in proposed.items().iter().enumerate() {
            self.weighted[item.0] += self.profile.chi(k + 1);
            self.displays[item.0] += 1;
            self.clicks[item.0] += u64::from(feedback.get(item));
        }
        Ok(())
    }
}
