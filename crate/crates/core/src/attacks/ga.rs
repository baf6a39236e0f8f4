//! Generalized list poisoning.
//!
//! The attacker uploads `2K - 1` auxiliary items `eta_1 > ... > eta_{2K-1}`,
//! all less attractive than every catalog item, and protects the list
//! `(target, eta_1, ..., eta_{K-1})`. Any proposed item outside the protected
//! list at position `k` is replaced by `eta_{K+k-1}`, so the ranker learns
//! that everything outside the protected list is worse than `eta_{K-1}`.

use crate::error::{LabError, Result};
use crate::types::{AttractionTable, ItemId, RankedList};

/// Attractiveness of `eta_1..eta_{2K-1}`: `eta_k = alpha_min (2K - k) / (2K + 1)`.
pub fn auxiliary_alphas(alpha_min: f64, list_len: usize) -> Vec<f64> {
    let k2 = 2 * list_len;
    (1..k2)
        .map(|k| alpha_min * (k2 - k) as f64 / (k2 + 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    target: ItemId,
    list_len: usize,
    /// `eta_1..eta_{2K-1}`
    auxiliary: Vec<ItemId>,
    auxiliary_alphas: Vec<f64>,
    protected: Vec<ItemId>,
    /// `in_protected[id]` over the augmented catalog.
    in_protected: Vec<bool>,
}

impl GaConfig {
    /// Builds the attack for `target` with the default auxiliary
    /// attractiveness schedule. Auxiliary ids follow the catalog.
    pub fn new(alphas: &AttractionTable, target: ItemId, list_len: usize) -> Result<Self> {
        let aux = auxiliary_alphas(alphas.min_catalog_alpha(), list_len);
        Self::with_auxiliary_alphas(alphas, target, list_len, aux)
    }

    pub fn with_auxiliary_alphas(
        alphas: &AttractionTable,
        target: ItemId,
        list_len: usize,
        aux_alphas: Vec<f64>,
    ) -> Result<Self> {
        let l = alphas.catalog_size();
        if list_len == 0 {
            return Err(LabError::param("list length must be positive"));
        }
        if target.0 >= l {
            return Err(LabError::param(format!(
                "target {target} is not a catalog item (L = {l})"
            )));
        }
        if aux_alphas.len() != 2 * list_len - 1 {
            return Err(LabError::param(format!(
                "need {} auxiliary items, got {}",
                2 * list_len - 1,
                aux_alphas.len()
            )));
        }
        if aux_alphas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(LabError::param(
                "auxiliary attractiveness must strictly decrease",
            ));
        }
        if aux_alphas[0] >= alphas.min_catalog_alpha() {
            return Err(LabError::param(
                "auxiliary items must be less attractive than every catalog item",
            ));
        }
        if aux_alphas.iter().any(|a| *a < 0.0) {
            return Err(LabError::param("auxiliary attractiveness below 0"));
        }
        let auxiliary: Vec<ItemId> = (l..l + aux_alphas.len()).map(ItemId).collect();
        let mut protected = vec![target];
        protected.extend_from_slice(&auxiliary[..list_len - 1]);
        let mut in_protected = vec![false; l + auxiliary.len()];
        for p in &protected {
            in_protected[p.0] = true;
        }
        Ok(Self {
            target,
            list_len,
            auxiliary,
            auxiliary_alphas: aux_alphas,
            protected,
            in_protected,
        })
    }

    pub fn target(&self) -> ItemId {
        self.target
    }

    /// `eta_k` for 1-based `k`.
    pub fn eta(&self, k: usize) -> ItemId {
        self.auxiliary[k - 1]
    }

    pub fn auxiliary(&self) -> &[ItemId] {
        &self.auxiliary
    }

    pub fn auxiliary_alphas(&self) -> &[f64] {
        &self.auxiliary_alphas
    }

    /// `(target, eta_1, ..., eta_{K-1})`
    pub fn protected(&self) -> &[ItemId] {
        &self.protected
    }

    pub fn is_protected(&self, item: ItemId) -> bool {
        self.in_protected.get(item.0).copied().unwrap_or(false)
    }

    /// The catalog extended with the auxiliary items, as the user sees it.
    pub fn augment(&self, alphas: &AttractionTable) -> Result<AttractionTable> {
        alphas.with_auxiliary(&self.auxiliary_alphas)
    }

    pub fn n_items(&self) -> usize {
        self.in_protected.len()
    }
}

/// Rewrites `proposed`, returning the shown list and the number of replaced
/// positions that actually changed. Protected items are never moved.
pub fn ga_perturb_list(cfg: &GaConfig, proposed: &RankedList) -> Result<(RankedList, u64)> {
    if proposed.len() != cfg.list_len {
        return Err(LabError::param(format!(
            "proposed list has {} positions, attack built for {}",
            proposed.len(),
            cfg.list_len
        )));
    }
    if proposed.items().iter().all(|&a| cfg.is_protected(a)) {
        return Ok((proposed.clone(), 0));
    }
    let mut cost = 0;
    let shown: Vec<ItemId> = proposed
        .items()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if cfg.is_protected(a) {
                a
            } else {
                // position k = i + 1 maps to eta_{K + k - 1}
                let eta = cfg.eta(cfg.list_len + i);
                cost += u64::from(eta != a);
                eta
            }
        })
        .collect();
    let shown = RankedList::new(shown, cfg.n_items())
        .map_err(|e| LabError::Internal(format!("list poisoning produced an invalid list: {e}")))?;
    Ok((shown, cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(l: usize) -> AttractionTable {
        AttractionTable::new((0..l).map(|i| 0.9 - 0.1 * i as f64).collect()).unwrap()
    }

    fn list(xs: &[usize], n: usize) -> RankedList {
        RankedList::new(xs.iter().copied().map(ItemId).collect(), n).unwrap()
    }

    #[test]
    fn auxiliary_schedule() {
        let a = auxiliary_alphas(0.11, 3);
        assert_eq!(a.len(), 5);
        let expected: Vec<f64> = (1..6).map(|k| 0.11 * (6 - k) as f64 / 7.0).collect();
        assert_eq!(a, expected);
        assert!(a[0] < 0.11);
    }

    #[test]
    fn protected_list_untouched() {
        let cfg = GaConfig::new(&table(6), ItemId(4), 3).unwrap();
        let p = list(&[4, 6, 7], cfg.n_items());
        assert_eq!(cfg.protected(), p.items());
        assert_eq!(ga_perturb_list(&cfg, &p).unwrap(), (p.clone(), 0));
        // permutation of the protected set is also left alone
        let q = list(&[7, 4, 6], cfg.n_items());
        assert_eq!(ga_perturb_list(&cfg, &q).unwrap().1, 0);
    }

    #[test]
    fn substitution_by_position() {
        // L = 6, K = 3: eta_k has id 5 + k
        let cfg = GaConfig::new(&table(6), ItemId(0), 3).unwrap();
        let n = cfg.n_items();
        let (shown, cost) = ga_perturb_list(&cfg, &list(&[0, 5, 6], n)).unwrap();
        assert_eq!(shown, list(&[0, cfg.eta(4).0, 6], n));
        assert_eq!(cost, 1);

        let (shown, cost) = ga_perturb_list(&cfg, &list(&[3, 1, 9], n)).unwrap();
        assert_eq!(shown, list(&[cfg.eta(3).0, cfg.eta(4).0, cfg.eta(5).0], n));
        assert_eq!(cost, 3);

        // an auxiliary item already sitting in its substitution slot is free
        let (shown, cost) = ga_perturb_list(&cfg, &list(&[0, cfg.eta(4).0, 2], n)).unwrap();
        assert_eq!(shown, list(&[0, cfg.eta(4).0, cfg.eta(5).0], n));
        assert_eq!(cost, 1);
    }

    #[test]
    fn invalid_configurations() {
        let t = table(4);
        assert!(GaConfig::new(&t, ItemId(4), 2).is_err());
        assert!(GaConfig::with_auxiliary_alphas(&t, ItemId(1), 2, vec![0.65, 0.05, 0.01]).is_err());
        assert!(GaConfig::with_auxiliary_alphas(&t, ItemId(1), 2, vec![0.05, 0.05, 0.01]).is_err());
        assert!(GaConfig::with_auxiliary_alphas(&t, ItemId(1), 2, vec![0.05, 0.01]).is_err());
        assert!(GaConfig::with_auxiliary_alphas(&t, ItemId(1), 2, vec![0.05, 0.02, 0.01]).is_ok());
    }
}
