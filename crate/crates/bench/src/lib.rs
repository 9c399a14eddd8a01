//! Criterion benchmarks for `iwt-core`; see `benches/core.rs`.
