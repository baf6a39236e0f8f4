//! Per-run bookkeeping: regret increments and checkpointed metric series.

use serde::{Deserialize, Serialize};

use crate::click_model::ClickModel;
use crate::error::{LabError, Result};
use crate::types::{AttractionTable, RankedList};

/// Expected clicks lost by showing `shown` instead of `optimal`.
pub fn regret_increment(
    model: &ClickModel,
    alphas: &AttractionTable,
    optimal: &RankedList,
    shown: &RankedList,
) -> f64 {
    model.expected_clicks(alphas, optimal) - model.expected_clicks(alphas, shown)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: u64,
    /// Rounds so far with the target at position 1 of the proposed list.
    pub target_first: u64,
    pub cost: u64,
    pub regret: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunMetrics {
    list_len: usize,
    checkpoints: Vec<Checkpoint>,
}

impl RunMetrics {
    pub fn new(list_len: usize) -> Self {
        Self {
            list_len,
            checkpoints: Vec::new(),
        }
    }

    /// Appends a checkpoint, enforcing monotone series and the
    /// `target_first <= t`, `cost <= K t` bounds.
    pub fn push(&mut self, cp: Checkpoint) -> Result<()> {
        if cp.target_first > cp.t {
            return Err(LabError::Internal(format!(
                "target-first count {} exceeds round {}",
                cp.target_first, cp.t
            )));
        }
        if cp.cost > self.list_len as u64 * cp.t {
            return Err(LabError::Internal(format!(
                "cost {} exceeds K*t at round {}",
                cp.cost, cp.t
            )));
        }
        if let Some(prev) = self.checkpoints.last() {
            // regret is a float sum; allow rounding noise on zero-regret rounds
            let regret_drop = prev.regret - cp.regret;
            if cp.t <= prev.t
                || cp.target_first < prev.target_first
                || cp.cost < prev.cost
                || regret_drop > 1e-9
            {
                return Err(LabError::Internal(format!(
                    "non-monotone checkpoint at t={} after t={}",
                    cp.t, prev.t
                )));
            }
        }
        self.checkpoints.push(cp);
        Ok(())
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn list_len(&self) -> usize {
        self.list_len
    }
}
