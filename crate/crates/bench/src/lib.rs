//! Benchmark-only package; the benchmarks live in `benches/kernels.rs`.
//! Run them with `cargo bench -p drudefd-bench`.
