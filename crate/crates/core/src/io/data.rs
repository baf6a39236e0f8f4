use std::collections::HashSet;
use std::path::Path;

use crate::error::{LabError, Result};
use crate::rng::RngStream;
use crate::types::AttractionTable;

/// `L` independent `U(0, 1)` draws. Zeros and exact ties are re-drawn.
pub fn generate_synthetic_alphas(catalog_size: usize, rng: &mut RngStream) -> Result<AttractionTable> {
    if catalog_size == 0 {
        return Err(LabError::param("catalog size must be at least 1"));
    }
    let mut seen = HashSet::with_capacity(catalog_size);
    let mut alphas = Vec::with_capacity(catalog_size);
    while alphas.len() < catalog_size {
        let a = rng.uniform();
        if a > 0.0 && seen.insert(a.to_bits()) {
            alphas.push(a);
        }
    }
    AttractionTable::new(alphas)
}

/// Parses `index,alpha` records. Lines starting with `#` and blank lines are
/// skipped; every index in `0..L` must appear exactly once.
pub fn parse_attractiveness(text: &str, path: &Path) -> Result<AttractionTable> {
    let err = |line: usize, message: String| LabError::Attractiveness {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut records: Vec<(usize, usize, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (idx, alpha) = line
            .split_once(',')
            .ok_or_else(|| err(line_no, format!("expected `index,alpha`, got {line:?}")))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("bad item index {:?}", idx.trim())))?;
        let alpha: f64 = alpha
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("bad attractiveness {:?}", alpha.trim())))?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(err(line_no, format!("attractiveness {alpha} outside [0, 1]")));
        }
        records.push((line_no, idx, alpha));
    }
    if records.is_empty() {
        return Err(err(0, "no records".into()));
    }
    let n = records.len();
    let mut alphas = vec![None; n];
    for &(line_no, idx, alpha) in &records {
        if idx >= n {
            return Err(err(line_no, format!("index {idx} out of range for {n} records")));
        }
        if alphas[idx].is_some() {
            return Err(err(line_no, format!("index {idx} appears twice")));
        }
        alphas[idx] = Some(alpha);
    }
    let alphas: Vec<f64> = alphas.into_iter().map(|a| a.expect("all indices present")).collect();
    let mut seen = HashSet::new();
    for &(line_no, idx, alpha) in &records {
        if !seen.insert(alpha.to_bits()) {
            return Err(err(line_no, format!("attractiveness {alpha} of item {idx} ties another item")));
        }
    }
    AttractionTable::new(alphas)
}

pub fn load_attractiveness(path: &Path) -> Result<AttractionTable> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_attractiveness(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_is_deterministic_and_in_support() {
        let a = generate_synthetic_alphas(200, &mut RngStream::new(3)).unwrap();
        let b = generate_synthetic_alphas(200, &mut RngStream::new(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.alphas().iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn synthetic_mean() {
        let n = 10_000;
        let a = generate_synthetic_alphas(n, &mut RngStream::new(9)).unwrap();
        let mean = a.alphas().iter().sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() <= 3.0 * (1.0 / 12.0 / n as f64).sqrt());
    }

    #[test]
    fn parses_records_in_any_order() {
        let t = parse_attractiveness("# header\n1,0.2\n\n0, 0.7\n2,0.5\n", Path::new("a.csv")).unwrap();
        assert_eq!(t.alphas(), &[0.7, 0.2, 0.5]);
    }

    #[test]
    fn rejects_bad_files() {
        let p = Path::new("a.csv");
        for bad in [
            "0,0.5\n0,0.4\n",
            "0,0.5\n2,0.4\n",
            "0,0.5\n1,0.5\n",
            "0,1.5\n",
            "0;0.5\n",
            "x,0.5\n",
            "# nothing\n",
        ] {
            assert!(
                matches!(parse_attractiveness(bad, p), Err(LabError::Attractiveness { .. })),
                "{bad:?}"
            );
        }
        let e = parse_attractiveness("0,0.5\n0,0.4\n", p).unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }
}
