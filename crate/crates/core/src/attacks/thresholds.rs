//! Attack lengths `T1` that make attack-then-quit succeed against BatchRank
//! and TopRank. Both are rounded up to whole rounds.

use crate::error::{LabError, Result};

/// `ceil(16 L ln T)`.
pub fn atq_threshold_batchrank(catalog_size: usize, horizon: f64) -> Result<u64> {
    if catalog_size == 0 {
        return Err(LabError::param("catalog size must be at least 1"));
    }
    if horizon.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) || !horizon.is_finite() {
        return Err(LabError::param(format!("horizon {horizon} too small")));
    }
    Ok(round_up(16.0 * catalog_size as f64 * horizon.ln()))
}

/// `ceil(4 ln(c / delta) / (K/L + (1 - sqrt(1 + 8K/L)) / 4))`.
pub fn atq_threshold_toprank(catalog_size: usize, list_len: usize, delta: f64, c: f64) -> Result<u64> {
    if list_len == 0 || list_len > catalog_size {
        return Err(LabError::param(format!(
            "need 1 <= K <= L, got K = {list_len}, L = {catalog_size}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) || c <= 0.0 {
        return Err(LabError::param(format!(
            "need 0 < delta <= 1 and c > 0, got delta = {delta}, c = {c}"
        )));
    }
    let ratio = list_len as f64 / catalog_size as f64;
    let denominator = ratio + (1.0 - (1.0 + 8.0 * ratio).sqrt()) / 4.0;
    if denominator <= 0.0 {
        return Err(LabError::param(format!(
            "non-positive threshold denominator {denominator}"
        )));
    }
    let numerator = 4.0 * (c / delta).ln();
    Ok(round_up((numerator / denominator).max(0.0)))
}

fn round_up(x: f64) -> u64 {
    x.ceil() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batchrank_examples() {
        assert_eq!(atq_threshold_batchrank(50, 1e5).unwrap(), 9211);
        assert_eq!(atq_threshold_batchrank(10, 1e5).unwrap(), 1843);
        assert_eq!(atq_threshold_batchrank(1, std::f64::consts::E).unwrap(), 16);
        assert!(atq_threshold_batchrank(0, 1e5).is_err());
    }

    #[test]
    fn toprank_examples() {
        // independently evaluated at 40 digits: 3494.354...
        assert_eq!(atq_threshold_toprank(50, 5, 1e-5, 3.43).unwrap(), 3495);
        let full = atq_threshold_toprank(7, 7, 1e-5, 3.43).unwrap();
        assert_eq!(full, (8.0 * (3.43f64 / 1e-5).ln()).ceil() as u64);
        assert_eq!(atq_threshold_toprank(50, 5, 1.0, 1.0).unwrap(), 0);
        assert!(atq_threshold_toprank(5, 6, 1e-5, 3.43).is_err());
        assert!(atq_threshold_toprank(5, 2, 0.0, 3.43).is_err());
    }
}
