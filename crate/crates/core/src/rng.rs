//! Seeded randomness for simulation runs.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed (expanded with
//! `SeedableRng::seed_from_u64`) and a 64-bit stream id. The ChaCha8 output
//! sequence is fixed by the published algorithm, so trajectories are
//! reproducible bit-for-bit on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};

/// Stream ids used by the harness so that environment generation, ranker
/// tie-breaking and user clicks never share draws.
pub mod streams {
    pub const ENVIRONMENT: u64 = 1;
    pub const RANKER: u64 = 2;
    pub const USER: u64 = 3;
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Draws 1 with probability `p`. Exactly one uniform is consumed per call,
    /// including the degenerate `p = 0` and `p = 1` cases.
    pub fn bernoulli(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(LabError::param(format!(
                "bernoulli probability {p} outside [0, 1]"
            )));
        }
        Ok(self.uniform() < p)
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.inner);
    }
}

/// Sorts `items` by `key` descending, breaking ties uniformly at random.
///
/// Items are shuffled first and then stably sorted, so every ordering of a
/// tied group is equally likely.
pub fn sort_desc_random_ties<T, F>(items: &mut [T], rng: &mut RngStream, mut key: F)
where
    F: FnMut(&T) -> f64,
{
    rng.shuffle(items);
    items.sort_by(|a, b| key(b).total_cmp(&key(a)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_probabilities() {
        let mut rng = RngStream::new(7);
        for _ in 0..1000 {
            assert!(!rng.bernoulli(0.0).unwrap());
            assert!(rng.bernoulli(1.0).unwrap());
        }
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let mut rng = RngStream::new(7);
        assert!(rng.bernoulli(-0.1).is_err());
        assert!(rng.bernoulli(1.5).is_err());
        assert!(rng.bernoulli(f64::NAN).is_err());
    }

    #[test]
    fn fair_coin_mean_within_three_standard_errors() {
        let mut rng = RngStream::new(42);
        let n = 1_000_000;
        let hits = (0..n).filter(|_| rng.bernoulli(0.5).unwrap()).count();
        let mean = hits as f64 / n as f64;
        assert!((mean - 0.5).abs() <= 3.0 * (0.25 / n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::with_stream(99, 3);
        let mut b = RngStream::with_stream(99, 3);
        let xs: Vec<u64> = (0..64).map(|_| a.uniform().to_bits()).collect();
        let ys: Vec<u64> = (0..64).map(|_| b.uniform().to_bits()).collect();
        assert_eq!(xs, ys);
        let mut c = RngStream::with_stream(99, 4);
        assert_ne!(xs[0], c.uniform().to_bits());
    }

    #[test]
    fn random_tie_break_covers_all_orders() {
        let mut rng = RngStream::new(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let mut v = vec![0usize, 1, 2];
            sort_desc_random_ties(&mut v, &mut rng, |_| 1.0);
            seen.insert(v);
        }
        assert_eq!(seen.len(), 6);
    }
}
