//! Attackers that sit between the ranker and the user.
//!
//! List poisoning rewrites the proposed list before the user sees it; click
//! poisoning rewrites the user's clicks before the ranker sees them. A run
//! uses at most one attacker.

mod atq;
mod baseline;
mod ga;
mod thresholds;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use atq::{atq_perturb_clicks, AtqConfig};
pub use baseline::{baseline_increase, baseline_reduce, DEFAULT_BASELINE_ROUNDS};
pub use ga::{auxiliary_alphas, ga_perturb_list, GaConfig};
pub use thresholds::{atq_threshold_batchrank, atq_threshold_toprank};

use crate::error::{LabError, Result};
use crate::types::{ClickVector, ItemId, RankedList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    None,
    /// Generalized list poisoning.
    Ga,
    /// Attack-then-quit click poisoning.
    Atq,
    /// Zero every shown non-target click for the first N rounds.
    Reduce,
    /// Force the target's click to 1 when shown, for the first N rounds.
    Increase,
}

impl AttackKind {
    pub const ALL: [AttackKind; 5] = [
        AttackKind::None,
        AttackKind::Ga,
        AttackKind::Atq,
        AttackKind::Reduce,
        AttackKind::Increase,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::Ga => "ga",
            AttackKind::Atq => "atq",
            AttackKind::Reduce => "reduce",
            AttackKind::Increase => "increase",
        }
    }

    pub fn poisons_lists(self) -> bool {
        self == AttackKind::Ga
    }

    pub fn poisons_clicks(self) -> bool {
        matches!(self, AttackKind::Atq | AttackKind::Reduce | AttackKind::Increase)
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttackKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        AttackKind::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| LabError::Schema(format!("unknown attack id {s:?}")))
    }
}

/// Running attack cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackLedger {
    pub cumulative_cost: u64,
    pub attacked_rounds: u64,
    pub last_attacked_round: Option<u64>,
}

impl AttackLedger {
    pub fn record(&mut self, t: u64, increment: u64) {
        if increment > 0 {
            self.cumulative_cost += increment;
            self.attacked_rounds += 1;
            self.last_attacked_round = Some(t);
        }
    }
}

/// A configured attacker for one run.
#[derive(Debug, Clone)]
pub enum Attacker {
    None,
    Ga(GaConfig),
    Atq(AtqConfig),
    Reduce { target: ItemId, rounds: u64 },
    Increase { target: ItemId, rounds: u64 },
}

impl Attacker {
    pub fn kind(&self) -> AttackKind {
        match self {
            Attacker::None => AttackKind::None,
            Attacker::Ga(_) => AttackKind::Ga,
            Attacker::Atq(_) => AttackKind::Atq,
            Attacker::Reduce { .. } => AttackKind::Reduce,
            Attacker::Increase { .. } => AttackKind::Increase,
        }
    }

    /// The list shown to the user and the number of replaced positions.
    pub fn perturb_list(&self, proposed: &RankedList) -> Result<(RankedList, u64)> {
        match self {
            Attacker::Ga(cfg) => ga_perturb_list(cfg, proposed),
            _ => Ok((proposed.clone(), 0)),
        }
    }

    /// The clicks forwarded to the ranker and the number of flipped entries.
    pub fn perturb_clicks(&self, t: u64, proposed: &RankedList, observed: &ClickVector) -> (ClickVector, u64) {
        match self {
            Attacker::Atq(cfg) => atq_perturb_clicks(cfg, t, proposed, observed),
            Attacker::Reduce { target, rounds } => {
                baseline_reduce(t, *rounds, *target, proposed, observed)
            }
            Attacker::Increase { target, rounds } => {
                baseline_increase(t, *rounds, *target, proposed, observed)
            }
            Attacker::None | Attacker::Ga(_) => (observed.clone(), 0),
        }
    }
}

/// Flips `clicks[item]` to `value`, returning 1 if it changed.
pub(crate) fn force(clicks: &mut ClickVector, item: ItemId, value: bool) -> u64 {
    let changed = clicks.get(item) != value;
    clicks.set(item, value);
    u64::from(changed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        for k in AttackKind::ALL {
            assert_eq!(k.as_str().parse::<AttackKind>().unwrap(), k);
        }
        assert!("atq2".parse::<AttackKind>().is_err());
        assert!(AttackKind::Ga.poisons_lists() && !AttackKind::Ga.poisons_clicks());
        assert!(!AttackKind::None.poisons_lists() && !AttackKind::None.poisons_clicks());
    }

    #[test]
    fn ledger_tracks_last_attack() {
        let mut l = AttackLedger::default();
        l.record(1, 2);
        l.record(2, 0);
        l.record(3, 1);
        assert_eq!(l.cumulative_cost, 3);
        assert_eq!(l.attacked_rounds, 2);
        assert_eq!(l.last_attacked_round, Some(3));
    }
}
