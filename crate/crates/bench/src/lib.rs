//! Criterion benchmarks for `kraus-landscape`; see `benches/`.
