//! Benchmarks for the series and R-matrix pipeline; see `benches/`.
