//! Deterministic inputs shared by the benchmarks.

use bimatch::{Instance, RngHandle};

/// `d` weight matrices of size `n×n` with entries uniform in `0..=max`.
pub fn uniform_instance(n: usize, d: usize, max: u64, seed: u64) -> Instance {
    let mut rng = RngHandle::from_seed(seed);
    let w: Vec<Vec<Vec<i64>>> = (0..d)
        .map(|_| (0..n).map(|_| (0..n).map(|_| rng.draw(max + 1) as i64 - 1).collect()).collect())
        .collect();
    Instance::from_i64(n, d, &w).expect("square nonempty weights")
}
