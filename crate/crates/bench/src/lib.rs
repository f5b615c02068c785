//! Benchmark crate; see benches/engine.rs.
