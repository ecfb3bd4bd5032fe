//! Criterion benchmarks for `bbp-core`; see `benches/`.
