//! Bernoulli KL divergence and the KL confidence bounds used by
//! CascadeKLUCB and BatchRank.
//!
//! Bounds are found by bisection on `q` (absolute tolerance 1e-9, at most
//! 100 halvings). The boundary estimates 0 and 1 use closed forms.

/// Absolute tolerance of the bound bisection.
pub const BOUND_TOLERANCE: f64 = 1e-9;
const MAX_BISECTIONS: usize = 100;

/// `D_KL(p || q)` between Bernoulli distributions, with `0 log 0 = 0` and
/// `x log(x/0) = +inf` for `x > 0`.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    fn term(x: f64, y: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else if y == 0.0 {
            f64::INFINITY
        } else {
            x * (x / y).ln()
        }
    }
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// Exploration level `ln t + 3 ln ln t`, with `ln ln t` clamped at zero for
/// `t < e^e` so the level stays finite and non-negative.
pub fn exploration_level(t: f64) -> f64 {
    let lt = t.max(1.0).ln();
    lt + 3.0 * lt.max(1.0).ln()
}

/// Largest `q` in `[mean, 1]` with `n * D_KL(mean || q) <= level`.
pub fn kl_upper_bound(mean: f64, n: f64, level: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&mean));
    if n <= 0.0 || mean >= 1.0 {
        return 1.0;
    }
    let budget = level.max(0.0) / n;
    if mean <= 0.0 {
        // n * ln(1 / (1 - q)) = level
        return 1.0 - (-budget).exp();
    }
    let (mut lo, mut hi) = (mean, 1.0);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BOUND_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if kl_bernoulli(mean, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest `q` in `[0, mean]` with `n * D_KL(mean || q) <= level`.
///
/// At `mean = 1` this returns 1, the value BatchRank's attack analysis uses
/// for an item clicked on every display.
pub fn kl_lower_bound(mean: f64, n: f64, level: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&mean));
    if n <= 0.0 || mean <= 0.0 {
        return 0.0;
    }
    if mean >= 1.0 {
        return 1.0;
    }
    let budget = level.max(0.0) / n;
    let (mut lo, mut hi) = (0.0, mean);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BOUND_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if kl_bernoulli(mean, mid) <= budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn divergence_conventions() {
        assert_eq!(kl_bernoulli(0.0, 0.0), 0.0);
        assert_eq!(kl_bernoulli(1.0, 1.0), 0.0);
        assert_eq!(kl_bernoulli(0.5, 0.0), f64::INFINITY);
        assert_eq!(kl_bernoulli(0.5, 1.0), f64::INFINITY);
        assert!((kl_bernoulli(0.0, 0.5) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exploration_level_guard() {
        assert_eq!(exploration_level(1.0), 0.0);
        assert_eq!(exploration_level(2.0), 2f64.ln());
        let t = 1e5f64;
        assert!((exploration_level(t) - (t.ln() + 3.0 * t.ln().ln())).abs() < 1e-12);
    }

    #[test]
    fn zero_mean_closed_form() {
        let (n, f) = (185.0, 18.843_336_538_016_4);
        let u = kl_upper_bound(0.0, n, f);
        assert!((u - (1.0 - (-f / n).exp())).abs() < 1e-15);
        assert_eq!(kl_lower_bound(0.0, n, f), 0.0);
        assert_eq!(kl_upper_bound(1.0, n, f), 1.0);
        assert_eq!(kl_lower_bound(1.0, n, f), 1.0);
    }

    #[test]
    fn bisection_hits_the_level() {
        // 100 * D_KL(0.5 || U) = 5, evaluated directly at the returned point
        let u = kl_upper_bound(0.5, 100.0, 5.0);
        assert!((100.0 * kl_bernoulli(0.5, u) - 5.0).abs() < 1e-6);
        assert!(100.0 * kl_bernoulli(0.5, u) <= 5.0);
        let l = kl_lower_bound(0.5, 100.0, 5.0);
        assert!((l - (1.0 - u)).abs() < 2e-9, "symmetry: {l} vs {u}");
    }

    proptest! {
        #[test]
        fn upper_bound_brackets_the_level(mean in 0.001f64..0.999, n in 1.0f64..5000.0, level in 0.01f64..30.0) {
            let u = kl_upper_bound(mean, n, level);
            prop_assert!(u >= mean && u <= 1.0);
            prop_assert!(n * kl_bernoulli(mean, u) <= level);
            if u < 1.0 - 1e-6 {
                prop_assert!(level < n * kl_bernoulli(mean, u + 1e-6));
            }
        }

        #[test]
        fn lower_bound_brackets_the_level(mean in 0.001f64..0.999, n in 1.0f64..5000.0, level in 0.01f64..30.0) {
            let l = kl_lower_bound(mean, n, level);
            prop_assert!(l <= mean && l >= 0.0);
            prop_assert!(n * kl_bernoulli(mean, l) <= level);
            if l > 1e-6 {
                prop_assert!(level < n * kl_bernoulli(mean, l - 1e-6));
            }
        }
    }
}
