//! Criterion benchmarks for `trotter-core`; see `benches/`.
