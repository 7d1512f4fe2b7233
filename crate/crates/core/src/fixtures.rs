//! Small named instances used by tests, benches and the CLI docs.

use crate::instance::Instance;

/// The d = 2, n = 4 instance whose optimum under `y1² + y2²` is the
/// matching {(1,1),(2,4),(3,3),(4,2)} with image (2,4).
pub fn example_one() -> Instance {
    let w1 = vec![vec![1, 0, 0, 0], vec![1, 0, 0, 1], vec![1, 1, 0, 0], vec![0, 0, 0, 1]];
    let w2 = vec![vec![1, 1, 0, 1], vec![0, 0, 1, 1], vec![0, 0, 1, 0], vec![1, 1, 0, 0]];
    Instance::from_i64(4, 2, &[w1, w2]).expect("fixture is well formed")
}

/// n = 2, d = 1 with a single unit weight on edge (1,1). Its determinant
/// polynomial is `a11·a22·b - a12·a21`.
pub fn unit_corner() -> Instance {
    Instance::from_i64(2, 1, &[vec![vec![1, 0], vec![0, 0]]]).expect("fixture is well formed")
}
