//! Criterion benchmarks for `lovelock-core`; see `benches/`.
