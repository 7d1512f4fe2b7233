//! Exact interpolation at the nodes `t = 1, 2, …, N`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Monomial coefficients `c_0..c_{N-1}` of the unique polynomial of degree
/// below `N` taking `values[t-1]` at `t = 1..=N`, which must have integer
/// coefficients.
///
/// Uses Newton's forward-difference form. Everything is scaled by `(N-1)!`
/// so the expansion stays in the integers; the final division is exact.
/// Returns `None` when some coefficient is not an integer.
pub fn interpolate_integer(values: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = values.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // diffs[k] = Δ^k f(1)
    let mut work = values.to_vec();
    let mut diffs = Vec::with_capacity(n);
    for k in 0..n {
        diffs.push(work[0].clone());
        for i in 0..n - 1 - k {
            work[i] = &work[i + 1] - &work[i];
        }
    }
    // scale[k] = (N-1)! / k!
    let mut scale = vec![BigInt::one(); n];
    for k in (0..n - 1).rev() {
        scale[k] = &scale[k + 1] * BigInt::from(k + 1);
    }
    let full = scale[0].clone();

    // Horner on the Newton basis: p <- p·(t - (k+1)) + Δ^k·(N-1)!/k!
    let mut poly: Vec<BigInt> = vec![&diffs[n - 1] * &scale[n - 1]];
    for k in (0..n - 1).rev() {
        let root = BigInt::from(k + 1);
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (deg, c) in poly.iter().enumerate() {
            next[deg + 1] += c;
            next[deg] -= c * &root;
        }
        next[0] += &diffs[k] * &scale[k];
        poly = next;
    }
    poly.truncate(n);
    poly.into_iter()
        .map(|c| {
            let (q, r) = c.div_rem(&full);
            r.is_zero().then_some(q)
        })
        .collect()
}

/// `Σ c_e t^e`.
pub fn evaluate(coefficients: &[BigInt], t: &BigInt) -> BigInt {
    coefficients.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}
