//! Two naive click-poisoning baselines that attack only the first `N`
//! rounds.

use crate::types::{ClickVector, ItemId, RankedList};

use super::force;

pub const DEFAULT_BASELINE_ROUNDS: u64 = 2000;

/// Zeroes the clicks of every shown non-target item for `t <= rounds`.
pub fn baseline_reduce(
    t: u64,
    rounds: u64,
    target: ItemId,
    proposed: &RankedList,
    observed: &ClickVector,
) -> (ClickVector, u64) {
    let mut out = observed.clone();
    if t > rounds {
        return (out, 0);
    }
    let cost = proposed
        .items()
        .iter()
        .filter(|&&i| i != target)
        .map(|&i| force(&mut out, i, false))
        .sum();
    (out, cost)
}

/// Reports the target clicked whenever it is shown, for `t <= rounds`.
pub fn baseline_increase(
    t: u64,
    rounds: u64,
    target: ItemId,
    proposed: &RankedList,
    observed: &ClickVector,
) -> (ClickVector, u64) {
    let mut out = observed.clone();
    if t > rounds || !proposed.contains(target) {
        return (out, 0);
    }
    let cost = force(&mut out, target, true);
    (out, cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list() -> RankedList {
        RankedList::new(vec![ItemId(0), ItemId(1), ItemId(2)], 4).unwrap()
    }

    fn clicks(items: &[usize]) -> ClickVector {
        let mut c = ClickVector::zeros(4);
        for &i in items {
            c.set(ItemId(i), true);
        }
        c
    }

    #[test]
    fn reduce() {
        let c = clicks(&[0, 2]);
        assert_eq!(baseline_reduce(2001, 2000, ItemId(1), &list(), &c), (c.clone(), 0));
        assert_eq!(baseline_reduce(5, 2000, ItemId(1), &list(), &c), (clicks(&[]), 2));
        let only_target = clicks(&[1]);
        assert_eq!(
            baseline_reduce(5, 2000, ItemId(1), &list(), &only_target),
            (only_target.clone(), 0)
        );
    }

    #[test]
    fn increase() {
        let c = clicks(&[0]);
        assert_eq!(baseline_increase(5, 2000, ItemId(3), &list(), &c), (c.clone(), 0));
        assert_eq!(baseline_increase(5, 2000, ItemId(2), &list(), &c), (clicks(&[0, 2]), 1));
        assert_eq!(baseline_increase(2001, 2000, ItemId(2), &list(), &c), (c.clone(), 0));
    }
}
