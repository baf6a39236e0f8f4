//! BatchRank: an elimination ranker that splits position intervals once
//! KL confidence bounds separate the items competing for them.
//!
//! Each active batch owns a contiguous position interval and a set of items.
//! Within a stage every batch item is displayed `n_l = ceil(16 * 4^l * ln T)`
//! times; clicks are credited only to the least-displayed items so that all
//! items reach `n_l` together. At that point the batch either splits, drops
//! items whose upper bound falls below the `len(b)`-th best lower bound, or
//! (when it has exactly as many items as positions) stays as it is.

use crate::error::{LabError, Result};
use crate::kl::{exploration_level, kl_lower_bound, kl_upper_bound};
use crate::rng::RngStream;
use crate::types::{ClickVector, ItemId, RankedList};

use super::{check_feedback, Ranker, RankerId};

/// Displays per item required to finish stage `stage` with horizon `horizon`.
pub fn stage_display_target(stage: u32, horizon: u64) -> u64 {
    let scale = 4f64.powi(stage as i32);
    (16.0 * scale * (horizon as f64).ln()).ceil() as u64
}

#[derive(Debug, Clone)]
struct Batch {
    /// 1-based, inclusive.
    first: usize,
    last: usize,
    stage: u32,
    items: Vec<ItemId>,
    clicks: Vec<u64>,
    displays: Vec<u64>,
}

impl Batch {
    fn new(first: usize, last: usize, items: Vec<ItemId>) -> Self {
        let n = items.len();
        Self {
            first,
            last,
            stage: 0,
            items,
            clicks: vec![0; n],
            displays: vec![0; n],
        }
    }

    fn len_positions(&self) -> usize {
        self.last - self.first + 1
    }

    fn slot(&self, item: ItemId) -> Option<usize> {
        self.items.iter().position(|&i| i == item)
    }

    fn min_displays(&self) -> u64 {
        self.displays.iter().copied().min().unwrap_or(0)
    }
}

/// Read-only snapshot of one active batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchView {
    pub first: usize,
    pub last: usize,
    pub stage: u32,
    pub items: Vec<ItemId>,
}

#[derive(Debug, Clone)]
pub struct BatchRank {
    n_items: usize,
    list_len: usize,
    horizon: u64,
    level: f64,
    batches: Vec<Batch>,
    rng: RngStream,
}

impl BatchRank {
    pub fn new(n_items: usize, list_len: usize, horizon: u64, rng: RngStream) -> Result<Self> {
        if horizon < 2 {
            return Err(LabError::param("BatchRank needs a horizon of at least 2"));
        }
        if list_len == 0 || list_len > n_items {
            return Err(LabError::param(format!(
                "list length {list_len} invalid for {n_items} items"
            )));
        }
        Ok(Self {
            n_items,
            list_len,
            horizon,
            level: exploration_level(horizon as f64),
            batches: vec![Batch::new(1, list_len, (0..n_items).map(ItemId).collect())],
            rng,
        })
    }

    pub fn batches(&self) -> Vec<BatchView> {
        self.batches
            .iter()
            .map(|b| BatchView {
                first: b.first,
                last: b.last,
                stage: b.stage,
                items: b.items.clone(),
            })
            .collect()
    }

    /// `(U, L)` KL bounds for an item with `clicks` out of `n` displays.
    pub fn bounds(&self, clicks: u64, n: u64) -> (f64, f64) {
        let mean = clicks as f64 / n as f64;
        (
            kl_upper_bound(mean, n as f64, self.level),
            kl_lower_bound(mean, n as f64, self.level),
        )
    }

    fn display_batch(&mut self, b: usize, out: &mut [Option<ItemId>]) {
        let batch = &self.batches[b];
        let mut order: Vec<usize> = (0..batch.items.len()).collect();
        self.rng.shuffle(&mut order);
        order.sort_by_key(|&s| batch.displays[s]);
        let mut chosen: Vec<usize> = order[..batch.len_positions()].to_vec();
        self.rng.shuffle(&mut chosen);
        for (offset, s) in chosen.into_iter().enumerate() {
            out[batch.first - 1 + offset] = Some(batch.items[s]);
        }
    }

    fn collect_clicks(&mut self, b: usize, proposed: &RankedList, feedback: &ClickVector) -> Result<()> {
        let batch = &mut self.batches[b];
        let n_min = batch.min_displays();
        for k in batch.first..=batch.last {
            let item = proposed
                .at(k)
                .ok_or_else(|| LabError::Internal(format!("no item at position {k}")))?;
            let s = batch.slot(item).ok_or_else(|| {
                LabError::Internal(format!("item {item} at position {k} is not in its batch"))
            })?;
            if batch.displays[s] == n_min {
                batch.clicks[s] += u64::from(feedback.get(item));
                batch.displays[s] += 1;
            }
        }
        Ok(())
    }

    /// Returns the batches replacing batch `b` (itself, possibly advanced,
    /// or its two children).
    fn update_batch(&mut self, batch: Batch) -> Vec<Batch> {
        let target = stage_display_target(batch.stage, self.horizon);
        if batch.min_displays() != target {
            return vec![batch];
        }
        let len = batch.len_positions();
        let n = batch.items.len();
        let mut ranked: Vec<(ItemId, f64, f64)> = (0..n)
            .map(|s| {
                let (u, l) = self.bounds(batch.clicks[s], target);
                (batch.items[s], u, l)
            })
            .collect();
        self.rng.shuffle(&mut ranked);
        ranked.sort_by(|a, b| b.2.total_cmp(&a.2));

        // suffix_max_u[k] = max U over ranked[k..]
        let mut suffix_max_u = vec![f64::NEG_INFINITY; n + 1];
        for k in (0..n).rev() {
            suffix_max_u[k] = suffix_max_u[k + 1].max(ranked[k].1);
        }
        let mut split = 0;
        for k in 1..len {
            if ranked[k - 1].2 > suffix_max_u[k] {
                split = k;
            }
        }

        if split > 0 {
            let upper: Vec<ItemId> = ranked[..split].iter().map(|r| r.0).collect();
            let lower: Vec<ItemId> = ranked[split..].iter().map(|r| r.0).collect();
            let mid = batch.first + split;
            vec![
                Batch::new(batch.first, mid - 1, upper),
                Batch::new(mid, batch.last, lower),
            ]
        } else if n > len {
            let cutoff = ranked[len - 1].2;
            let kept: Vec<ItemId> = ranked
                .iter()
                .filter(|r| r.1 >= cutoff)
                .map(|r| r.0)
                .collect();
            let mut next = Batch::new(batch.first, batch.last, kept);
            next.stage = batch.stage + 1;
            vec![next]
        } else {
            vec![batch]
        }
    }

    fn check_structure(&self) -> Result<()> {
        let mut expected_first = 1;
        let mut seen = vec![false; self.n_items];
        for b in &self.batches {
            if b.first != expected_first || b.last < b.first {
                return Err(LabError::Internal(format!(
                    "batch interval ({}, {}) breaks the position partition",
                    b.first, b.last
                )));
            }
            if b.items.len() < b.len_positions() {
                return Err(LabError::Internal(format!(
                    "batch ({}, {}) has {} items for {} positions",
                    b.first,
                    b.last,
                    b.items.len(),
                    b.len_positions()
                )));
            }
            for &i in &b.items {
                if std::mem::replace(&mut seen[i.0], true) {
                    return Err(LabError::Internal(format!("item {i} in two batches")));
                }
            }
            expected_first = b.last + 1;
        }
        if expected_first != self.list_len + 1 {
            return Err(LabError::Internal("batches do not cover every position".into()));
        }
        Ok(())
    }
}

impl Ranker for BatchRank {
    fn id(&self) -> RankerId {
        RankerId::BatchRank
    }

    fn propose(&mut self, _t: u64) -> Result<RankedList> {
        let mut slots = vec![None; self.list_len];
        for b in 0..self.batches.len() {
            self.display_batch(b, &mut slots);
        }
        let items = slots
            .into_iter()
            .enumerate()
            .map(|(k, s)| s.ok_or_else(|| LabError::Internal(format!("position {} unfilled", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RankedList::from_vec_unchecked(items))
    }

    fn update(&mut self, _t: u64, proposed: &RankedList, feedback: &ClickVector) -> Result<()> {
        check_feedback(proposed, feedback, self.n_items)?;
        if proposed.len() != self.list_len {
            return Err(LabError::Feedback(format!(
                "proposed list has {} positions, expected {}",
                proposed.len(),
                self.list_len
            )));
        }
        for b in 0..self.batches.len() {
            self.collect_clicks(b, proposed, feedback)?;
        }
        let current = std::mem::take(&mut self.batches);
        let mut next = Vec::with_capacity(current.len() + 1);
        for batch in current {
            next.extend(self.update_batch(batch));
        }
        self.batches = next;
        self.check_structure()
    }
}
