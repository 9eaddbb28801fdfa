//! Criterion benchmarks for `hodge-spectra`; see `benches/`.
