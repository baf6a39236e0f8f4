//! Domain types shared by every module: items, attractiveness tables,
//! ranked lists and click vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub usize);

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Per-item attractiveness, the hidden environment parameter.
///
/// The first `catalog_size` entries are the original catalog and must be
/// pairwise distinct. Auxiliary items appended by a list-poisoning attacker
/// follow them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractionTable {
    alphas: Vec<f64>,
    catalog_size: usize,
}

impl AttractionTable {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(LabError::param("attraction table is empty"));
        }
        check_unit_interval(&alphas)?;
        let mut sorted = alphas.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(LabError::param(format!(
                "duplicate attractiveness {} in catalog",
                w[0]
            )));
        }
        let catalog_size = alphas.len();
        Ok(Self {
            alphas,
            catalog_size,
        })
    }

    /// Returns a copy extended with auxiliary items. Their ids start at
    /// `catalog_size()`.
    pub fn with_auxiliary(&self, aux: &[f64]) -> Result<Self> {
        check_unit_interval(aux)?;
        let mut alphas = self.alphas[..self.catalog_size].to_vec();
        alphas.extend_from_slice(aux);
        Ok(Self {
            alphas,
            catalog_size: self.catalog_size,
        })
    }

    #[inline]
    pub fn alpha(&self, item: ItemId) -> f64 {
        self.alphas[item.0]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Number of original catalog items `L`.
    pub fn catalog_size(&self) -> usize {
        self.catalog_size
    }

    /// Catalog plus auxiliary items.
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Original catalog items sorted by descending attractiveness.
    pub fn catalog_by_attraction(&self) -> Vec<ItemId> {
        let mut ids: Vec<ItemId> = (0..self.catalog_size).map(ItemId).collect();
        ids.sort_by(|a, b| self.alpha(*b).total_cmp(&self.alpha(*a)));
        ids
    }

    pub fn min_catalog_alpha(&self) -> f64 {
        self.alphas[..self.catalog_size]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_unit_interval(alphas: &[f64]) -> Result<()> {
    match alphas.iter().position(|a| !(0.0..=1.0).contains(a)) {
        Some(i) => Err(LabError::param(format!(
            "attractiveness {} of item {i} outside [0, 1]",
            alphas[i]
        ))),
        None => Ok(()),
    }
}

/// An ordered list of `K` distinct items.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankedList(Vec<ItemId>);

impl RankedList {
    /// Builds a list, checking distinctness and that every id is below
    /// `n_items`.
    pub fn new(items: Vec<ItemId>, n_items: usize) -> Result<Self> {
        if items.is_empty() {
            return Err(LabError::param("ranked list is empty"));
        }
        for (k, item) in items.iter().enumerate() {
            if item.0 >= n_items {
                return Err(LabError::param(format!(
                    "item {item} at position {} outside catalog of {n_items}",
                    k + 1
                )));
            }
            if items[..k].contains(item) {
                return Err(LabError::param(format!("item {item} listed twice")));
            }
        }
        Ok(Self(items))
    }

    pub(crate) fn from_vec_unchecked(items: Vec<ItemId>) -> Self {
        debug_assert!(!items.is_empty());
        Self(items)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> ItemId {
        self.0[0]
    }

    /// Item at 1-based position `k`.
    pub fn at(&self, k: usize) -> Option<ItemId> {
        k.checked_sub(1).and_then(|i| self.0.get(i)).copied()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.contains(&item)
    }

    /// 1-based position of `item`, if shown.
    pub fn position_of(&self, item: ItemId) -> Option<usize> {
        self.0.iter().position(|&x| x == item).map(|i| i + 1)
    }
}

impl fmt::Display for RankedList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{item}")?;
        }
        write!(f, ")")
    }
}

/// Binary click feedback for one round, indexed by item over the whole
/// catalog the ranker knows about.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClickVector {
    clicks: Vec<bool>,
}

impl ClickVector {
    pub fn zeros(n_items: usize) -> Self {
        Self {
            clicks: vec![false; n_items],
        }
    }

    /// Builds a vector from the clicks observed at each position of `list`.
    pub fn from_positions(list: &RankedList, by_position: &[bool], n_items: usize) -> Self {
        let mut v = Self::zeros(n_items);
        for (item, &c) in list.items().iter().zip(by_position) {
            v.clicks[item.0] = c;
        }
        v
    }

    pub fn n_items(&self) -> usize {
        self.clicks.len()
    }

    #[inline]
    pub fn get(&self, item: ItemId) -> bool {
        self.clicks[item.0]
    }

    #[inline]
    pub fn set(&mut self, item: ItemId, clicked: bool) {
        self.clicks[item.0] = clicked;
    }

    pub fn total(&self) -> usize {
        self.clicks.iter().filter(|&&c| c).count()
    }

    pub fn clicked_items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.clicks
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| ItemId(i))
    }

    /// Clicks read off at each position of `list`.
    pub fn by_position(&self, list: &RankedList) -> Vec<bool> {
        list.items().iter().map(|&i| self.get(i)).collect()
    }

    /// True when no item outside `list` carries a click.
    pub fn valid_for(&self, list: &RankedList) -> bool {
        self.clicked_items().all(|i| list.contains(i))
    }

    /// Number of items whose click differs between the two vectors.
    pub fn hamming(&self, other: &ClickVector) -> usize {
        self.clicks
            .iter()
            .zip(&other.clicks)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.clicks
    }
}
