use std::collections::BTreeMap;

use bimatch::brute::matchings;
use bimatch::fixtures::example_one;
use bimatch::randomized::{
    bareiss_determinant, det_at, evaluate, interpolate_integer, support, ASubstitution, Encoding, DEFAULT_EVAL_CAP,
};
use bimatch::{brute_force_projections, Error, Instance, Projection, RngHandle};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    matchings(n)
        .map(|p| {
            let prod: BigInt = p.edges().map(|(i, j)| m[i][j].clone()).product();
            if p.sign() > 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, d: usize, max: i64) -> Instance {
    let w: Vec<Vec<Vec<i64>>> =
        (0..d).map(|_| (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=max)).collect()).collect()).collect();
    Instance::from_i64(n, d, &w).unwrap()
}

#[test]
fn bareiss_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 0..=6usize {
        for _ in 0..10 {
            let m: Vec<Vec<BigInt>> =
                (0..n).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-20i64..=20))).collect()).collect();
            assert_eq!(bareiss_determinant(m.clone()), leibniz(&m), "n={n}");
        }
    }
    // Zero leading pivot forces a row swap.
    let m = vec![vec![0, 1, 2], vec![3, 0, 4], vec![5, 6, 0]];
    let m: Vec<Vec<BigInt>> = m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    assert_eq!(bareiss_determinant(m.clone()), leibniz(&m));
}

/// Coefficients by Gauss-Jordan on the Vandermonde system at `t = 1..=N`.
fn vandermonde(values: &[BigInt]) -> Vec<BigRational> {
    let n = values.len();
    let mut m: Vec<Vec<BigRational>> = (1..=n as i64)
        .map(|t| (0..n).map(|k| BigRational::from(num_traits::pow(BigInt::from(t), k))).collect())
        .collect();
    let mut rhs: Vec<BigRational> = values.iter().cloned().map(BigRational::from).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).unwrap();
        m.swap(c, p);
        rhs.swap(c, p);
        let inv = BigRational::one() / &m[c][c];
        m[c].iter_mut().for_each(|x| *x *= &inv);
        rhs[c] *= &inv;
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[c].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, pv)| *x -= &f * pv);
                let r = rhs[c].clone();
                rhs[i] -= &f * r;
            }
        }
    }
    rhs
}

#[test]
fn interpolation_matches_vandermonde() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for n in 1..=12usize {
        let coeffs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect();
        let values: Vec<BigInt> = (1..=n as i64).map(|t| evaluate(&coeffs, &BigInt::from(t))).collect();
        let got = interpolate_integer(&values).unwrap();
        assert_eq!(got, coeffs);
        let oracle: Vec<BigRational> = vandermonde(&values);
        assert_eq!(got.into_iter().map(BigRational::from).collect::<Vec<_>>(), oracle);
    }
    // t(t-1)/2 takes integer values but has a non-integer coefficient.
    let values: Vec<BigInt> = (1..=3i64).map(|t| BigInt::from(t * (t - 1) / 2)).collect();
    assert_eq!(interpolate_integer(&values), None);
}

#[test]
fn det_at_matches_explicit_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=2);
        let inst = random_instance(&mut rng, n, d, 2);
        let mut h = RngHandle::from_seed(rng.gen());
        let a = ASubstitution::random(n, 10, &mut h);
        let u = BigInt::from(n) * inst.max_abs_weight();
        let base: BigInt = u + 1;
        for t in [0u64, 1, 2, 5] {
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let e: BigInt = (0..d).map(|k| inst.weight(k, i, j) * num_traits::pow(base.clone(), k)).sum();
                            let e = usize::try_from(&e).unwrap();
                            BigInt::from(a.get(i, j)) * num_traits::pow(BigInt::from(t), e)
                        })
                        .collect()
                })
                .collect();
            assert_eq!(det_at(&inst, &a, t).unwrap(), leibniz(&m));
        }
    }
}

#[test]
fn support_coefficients_are_signed_matching_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=2);
        let inst = random_instance(&mut rng, n, d, 2);
        let mut h = RngHandle::from_seed(rng.gen());
        let a = ASubstitution::random(n, 2 * (n * n) as u64, &mut h);
        let mut expected: BTreeMap<Projection, BigInt> = BTreeMap::new();
        for m in matchings(n) {
            let prod: BigInt = m.edges().map(|(i, j)| BigInt::from(a.get(i, j))).product();
            *expected.entry(inst.project(&m).unwrap()).or_insert_with(BigInt::zero) += if m.sign() > 0 { prod } else { -prod };
        }
        expected.retain(|_, g| !g.is_zero());
        let sup = support(&inst, &a, DEFAULT_EVAL_CAP).unwrap();
        assert_eq!(sup.coefficients, expected);
        assert!(sup.points.is_subset(&brute_force_projections(&inst).unwrap()));
    }
}

#[test]
fn support_is_sound_on_example_one() {
    let ex = example_one();
    let exact = brute_force_projections(&ex).unwrap();
    for seed in 0..50 {
        let mut h = RngHandle::from_seed(seed);
        let a = ASubstitution::random(4, 32, &mut h);
        let sup = support(&ex, &a, DEFAULT_EVAL_CAP).unwrap();
        assert!(sup.points.is_subset(&exact), "seed {seed}");
    }
}

#[test]
fn scale_guard_and_negative_weights() {
    let ex = example_one();
    let a = ASubstitution::random(4, 8, &mut RngHandle::from_seed(1));
    // u = 4, so 25 nodes are needed.
    assert!(matches!(support(&ex, &a, 24), Err(Error::ScaleGuard { .. })));
    assert!(support(&ex, &a, 25).is_ok());
    let neg = Instance::from_i64(1, 1, &[vec![vec![-1]]]).unwrap();
    assert_eq!(Encoding::new(&neg, DEFAULT_EVAL_CAP), Err(Error::NegativeWeights));
}
