//! Criterion benchmarks for `orderkit`; see `benches/`.
