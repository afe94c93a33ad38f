//! Criterion benchmarks for `chshstar-core`; run with `cargo bench -p chshstar-bench`.
