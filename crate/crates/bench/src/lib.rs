//! Criterion benchmarks for the rankers and click models live in `benches/`.
