//! Benchmark-only crate; see `benches/derivations.rs`.
