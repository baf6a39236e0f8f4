//! Attack-then-quit click poisoning.

use serde::{Deserialize, Serialize};

use crate::types::{ClickVector, ItemId, RankedList};

use super::force;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtqConfig {
    pub target: ItemId,
    /// Last attacked round `T1`.
    pub threshold: u64,
}

/// For `t <= T1` the shown target is reported clicked and every other shown
/// item unclicked; unshown items pass through. After `T1` the clicks are
/// forwarded untouched.
pub fn atq_perturb_clicks(
    cfg: &AtqConfig,
    t: u64,
    proposed: &RankedList,
    observed: &ClickVector,
) -> (ClickVector, u64) {
    let mut out = observed.clone();
    if t > cfg.threshold {
        return (out, 0);
    }
    let mut cost = 0;
    for &item in proposed.items() {
        cost += force(&mut out, item, item == cfg.target);
    }
    (out, cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (AtqConfig, RankedList) {
        let cfg = AtqConfig {
            target: ItemId(2),
            threshold: 10,
        };
        let l = RankedList::new(vec![ItemId(0), ItemId(2), ItemId(3)], 5).unwrap();
        (cfg, l)
    }

    #[test]
    fn quits_after_threshold() {
        let (cfg, l) = setup();
        let mut c = ClickVector::zeros(5);
        c.set(ItemId(0), true);
        assert_eq!(atq_perturb_clicks(&cfg, 11, &l, &c), (c.clone(), 0));
    }

    #[test]
    fn nothing_to_change() {
        let (cfg, l) = setup();
        let mut c = ClickVector::zeros(5);
        c.set(ItemId(2), true);
        assert_eq!(atq_perturb_clicks(&cfg, 10, &l, &c), (c.clone(), 0));
    }

    #[test]
    fn moves_a_cascade_click_to_the_target() {
        let (cfg, l) = setup();
        let mut c = ClickVector::zeros(5);
        c.set(ItemId(0), true);
        let (out, cost) = atq_perturb_clicks(&cfg, 1, &l, &c);
        assert_eq!(cost, 2);
        assert_eq!(out.total(), 1);
        assert!(out.get(ItemId(2)));
        assert!(out.valid_for(&l));
    }

    #[test]
    fn target_not_shown_zeroes_shown_clicks() {
        let cfg = AtqConfig {
            target: ItemId(4),
            threshold: 10,
        };
        let l = RankedList::new(vec![ItemId(0), ItemId(1)], 5).unwrap();
        let mut c = ClickVector::zeros(5);
        c.set(ItemId(0), true);
        c.set(ItemId(1), true);
        let (out, cost) = atq_perturb_clicks(&cfg, 3, &l, &c);
        assert_eq!((out.total(), cost), (0, 2));
    }
}
