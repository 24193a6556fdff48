//! Shared inputs for the criterion benches.

use qdds_core::{Benchmark, BenchmarkKind, SwarmConfig};

/// Free coefficients of a 10-tap linear-phase low-pass design.
#[allow(clippy::excessive_precision)]
pub const HALF_10: [f64; 5] = [
    0.070824792496751651,
    -0.063184376757871669,
    -0.038806613903081974,
    0.013227497402604124,
    0.39889122413816075,
];

pub fn benchmark(kind: BenchmarkKind, dim: usize) -> Benchmark {
    Benchmark::new(kind, dim).expect("valid benchmark dimension")
}

pub fn config(dim: usize, population: usize, iters: usize) -> SwarmConfig {
    SwarmConfig::new(dim, population, iters, 0x5eed)
}
