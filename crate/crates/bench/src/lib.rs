//! Criterion benchmarks for the quatspec operators; see `benches/`.
