//! Benchmarks for nsfd-core live under `benches/`.
