//! CascadeUCB1 and CascadeKLUCB.
//!
//! Both keep, per item, the number of times it was examined and how often it
//! was clicked when examined. An item is examined at every position up to
//! and including the last click; when there is no click every position was
//! examined.

use crate::error::Result;
use crate::kl::{exploration_level, kl_upper_bound};
use crate::rng::{sort_desc_random_ties, RngStream};
use crate::types::{ClickVector, ItemId, RankedList};

use super::{check_feedback, Ranker, RankerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CascadeIndex {
    /// `mean + 3 sqrt(ln(t - 1) / n)`
    Ucb1,
    /// Largest `q` with `n D_KL(mean || q) <= ln t + 3 ln ln t`.
    KlUcb,
}

/// CascadeUCB1 index at round `t`; `ln(t - 1)` is clamped at 0 for `t <= 2`.
pub fn cascade_ucb1_index(mean: f64, n: u64, t: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let log_term = (t.saturating_sub(1).max(1) as f64).ln();
    mean + 3.0 * (log_term / n as f64).sqrt()
}

#[derive(Debug, Clone)]
pub struct CascadeBandit {
    index: CascadeIndex,
    list_len: usize,
    examined: Vec<u64>,
    clicked: Vec<u64>,
    rng: RngStream,
}

impl CascadeBandit {
    pub fn new(index: CascadeIndex, n_items: usize, list_len: usize, rng: RngStream) -> Self {
        Self {
            index,
            list_len,
            examined: vec![0; n_items],
            clicked: vec![0; n_items],
            rng,
        }
    }

    pub fn examined(&self, item: ItemId) -> u64 {
        self.examined[item.0]
    }

    pub fn mean(&self, item: ItemId) -> f64 {
        match self.examined[item.0] {
            0 => 0.0,
            n => self.clicked[item.0] as f64 / n as f64,
        }
    }

    /// Index of `item` at round `t`. Unexamined items are infinitely
    /// optimistic, which realises the initial pass over the catalog.
    pub fn index_of(&self, item: ItemId, t: u64) -> f64 {
        let n = self.examined[item.0];
        if n == 0 {
            return f64::INFINITY;
        }
        let mean = self.mean(item);
        match self.index {
            CascadeIndex::Ucb1 => cascade_ucb1_index(mean, n, t),
            CascadeIndex::KlUcb => kl_upper_bound(mean, n as f64, exploration_level(t as f64)),
        }
    }
}

impl Ranker for CascadeBandit {
    fn id(&self) -> RankerId {
        match self.index {
            CascadeIndex::Ucb1 => RankerId::CascadeUcb1,
            CascadeIndex::KlUcb => RankerId::CascadeKlUcb,
        }
    }

    fn propose(&mut self, t: u64) -> Result<RankedList> {
        let mut scored: Vec<(ItemId, f64)> = (0..self.examined.len())
            .map(|i| (ItemId(i), self.index_of(ItemId(i), t)))
            .collect();
        sort_desc_random_ties(&mut scored, &mut self.rng, |&(_, u)| u);
        Ok(RankedList::from_vec_unchecked(
            scored.into_iter().take(self.list_len).map(|(i, _)| i).collect(),
        ))
    }

    fn update(&mut self, _t: u64, proposed: &RankedList, feedback: &ClickVector) -> Result<()> {
        check_feedback(proposed, feedback, self.examined.len())?;
        // s is the last clicked position, or K without a click
        let clicks = feedback.by_position(proposed);
        let last_click = clicks.iter().rposition(|&c| c);
        let examined_upto = last_click.map_or(proposed.len(), |k| k + 1);
        for (k, item) in proposed.items()[..examined_upto].iter().enumerate() {
            self.examined[item.0] += 1;
            if Some(k) == last_click {
                self.clicked[item.0] += 1;
            }
        }
        Ok(())
    }
}
