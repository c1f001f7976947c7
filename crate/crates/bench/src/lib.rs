//! Criterion benchmarks for ball counting, four-point δ and the embedding
//! of net words. Run with `cargo bench -p growtight-bench`.
