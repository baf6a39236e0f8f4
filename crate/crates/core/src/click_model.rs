//! Stochastic click models: the cascade model and the position-based model.
//!
//! Both are instances of the general model where the click probability of
//! position `k` depends only on the shown list. [`ClickModel::click_prob`]
//! exposes that `v(R, a_k, k)` function directly.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::rng::RngStream;
use crate::types::{AttractionTable, ClickVector, ItemId, RankedList};

/// Per-position examination probabilities `chi(1) > chi(2) > ... > chi(K)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExaminationProfile(Vec<f64>);

impl ExaminationProfile {
    pub fn new(chis: Vec<f64>) -> Result<Self> {
        if chis.is_empty() {
            return Err(LabError::param("examination profile is empty"));
        }
        if let Some(c) = chis.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(LabError::param(format!(
                "examination probability {c} outside [0, 1]"
            )));
        }
        if chis.windows(2).any(|w| w[0] <= w[1]) {
            return Err(LabError::param(
                "examination profile must be strictly decreasing",
            ));
        }
        Ok(Self(chis))
    }

    /// `chi(k) = 1/k` for `k = 1..=K`.
    pub fn harmonic(k: usize) -> Self {
        Self((1..=k).map(|i| 1.0 / i as f64).collect())
    }

    /// Examination probability of 1-based position `k`.
    #[inline]
    pub fn chi(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClickModelKind {
    Cascade,
    #[serde(rename = "pbm")]
    PositionBased,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClickModel {
    Cascade,
    PositionBased(ExaminationProfile),
}

impl ClickModel {
    pub fn kind(&self) -> ClickModelKind {
        match self {
            ClickModel::Cascade => ClickModelKind::Cascade,
            ClickModel::PositionBased(_) => ClickModelKind::PositionBased,
        }
    }

    pub fn profile(&self) -> Option<&ExaminationProfile> {
        match self {
            ClickModel::Cascade => None,
            ClickModel::PositionBased(p) => Some(p),
        }
    }

    /// Largest number of clicks a single round can produce for a list of
    /// length `k`.
    pub fn max_clicks(&self, k: usize) -> usize {
        match self {
            ClickModel::Cascade => 1,
            ClickModel::PositionBased(_) => k,
        }
    }

    fn check_list(&self, list: &RankedList) -> Result<()> {
        if let ClickModel::PositionBased(p) = self {
            if list.len() > p.len() {
                return Err(LabError::param(format!(
                    "list of length {} exceeds examination profile of length {}",
                    list.len(),
                    p.len()
                )));
            }
        }
        Ok(())
    }

    /// Probability that the item at 1-based position `k` of `list` is clicked.
    pub fn click_prob(&self, alphas: &AttractionTable, list: &RankedList, k: usize) -> Result<f64> {
        if k == 0 || k > list.len() {
            return Err(LabError::param(format!(
                "position {k} outside 1..={}",
                list.len()
            )));
        }
        self.check_list(list)?;
        let items = list.items();
        Ok(match self {
            ClickModel::PositionBased(p) => p.chi(k) * alphas.alpha(items[k - 1]),
            ClickModel::Cascade => {
                let examined: f64 = items[..k - 1]
                    .iter()
                    .map(|&a| 1.0 - alphas.alpha(a))
                    .product();
                examined * alphas.alpha(items[k - 1])
            }
        })
    }

    /// Expected number of clicks on `list` in one round.
    pub fn expected_clicks(&self, alphas: &AttractionTable, list: &RankedList) -> f64 {
        match self {
            ClickModel::PositionBased(p) => list
                .items()
                .iter()
                .enumerate()
                .map(|(i, &a)| p.chi(i + 1) * alphas.alpha(a))
                .sum(),
            ClickModel::Cascade => {
                1.0 - list
                    .items()
                    .iter()
                    .map(|&a| 1.0 - alphas.alpha(a))
                    .product::<f64>()
            }
        }
    }

    /// Samples the click at each position of `list`.
    pub fn sample_positions(
        &self,
        alphas: &AttractionTable,
        list: &RankedList,
        rng: &mut RngStream,
    ) -> Result<Vec<bool>> {
        self.check_list(list)?;
        let mut out = vec![false; list.len()];
        match self {
            ClickModel::Cascade => {
                for (k, &item) in list.items().iter().enumerate() {
                    if rng.bernoulli(alphas.alpha(item))? {
                        out[k] = true;
                        break;
                    }
                }
            }
            ClickModel::PositionBased(p) => {
                for (k, &item) in list.items().iter().enumerate() {
                    let examined = rng.bernoulli(p.chi(k + 1))?;
                    let attracted = rng.bernoulli(alphas.alpha(item))?;
                    out[k] = examined && attracted;
                }
            }
        }
        Ok(out)
    }

    /// Samples a full click vector over all `alphas.len()` items.
    pub fn sample_clicks(
        &self,
        alphas: &AttractionTable,
        list: &RankedList,
        rng: &mut RngStream,
    ) -> Result<ClickVector> {
        let by_pos = self.sample_positions(alphas, list, rng)?;
        Ok(ClickVector::from_positions(list, &by_pos, alphas.len()))
    }

    /// The `k` most attractive catalog items in descending attractiveness.
    ///
    /// This maximizes expected clicks under both models; under the cascade
    /// model any permutation of the same set does too, and the descending
    /// order is the canonical representative.
    pub fn optimal_list(&self, alphas: &AttractionTable, k: usize) -> Result<RankedList> {
        optimal_list(alphas, k)
    }
}

/// See [`ClickModel::optimal_list`].
pub fn optimal_list(alphas: &AttractionTable, k: usize) -> Result<RankedList> {
    if k == 0 || k > alphas.catalog_size() {
        return Err(LabError::param(format!(
            "cannot pick {k} items from a catalog of {}",
            alphas.catalog_size()
        )));
    }
    let ids: Vec<ItemId> = alphas.catalog_by_attraction().into_iter().take(k).collect();
    Ok(RankedList::from_vec_unchecked(ids))
}
