mod common;

use common::*;
use hyperpoly_core::capacity::{
    capacity_estimate, capacity_upper_bound_at, decide_polytope, vdw_bound, vdw_ratio, Verdict, IN_THRESHOLD,
    NOT_THRESHOLD,
};
use hyperpoly_core::combinatorics::newton_polytope_contains;
use hyperpoly_core::oracle::expand;
use hyperpoly_core::scaling::matrix_sinkhorn_reference;
use hyperpoly_core::{Error, PolynomialOracle};
use proptest::prelude::*;

/// `x` rescaled so that `Π x_i = 1`.
fn unit_product(mut x: Vec<f64>) -> Vec<f64> {
    let g = (x.iter().map(|v| v.ln()).sum::<f64>() / x.len() as f64).exp();
    x.iter_mut().for_each(|v| *v /= g);
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn capacity_lies_between_values_and_the_gradient_bound(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = rng(seed);
        let oracle = PolynomialOracle::product(nonnegative(&mut rng, n, 0.0)).unwrap();
        let cap = capacity_estimate(&oracle, 1e-10).unwrap().capacity;
        for _ in 0..10 {
            let x = unit_product(positive_point(&mut rng, n));
            let value = oracle.eval(&x).unwrap();
            let upper = capacity_upper_bound_at(&oracle, &x).unwrap();
            prop_assert!(value >= cap * (1.0 - 1e-7), "q(x) = {} below Cap = {}", value, cap);
            prop_assert!(upper >= cap * (1.0 - 1e-7), "bound {} below Cap = {}", upper, cap);
        }
    }

    #[test]
    fn decision_matches_hull_membership(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        // integer coefficients, as the default coefficient floor assumes
        let mut m = binary(&mut rng, n, 0.4);
        for i in 0..n {
            m[(i, (i * 5 + 1) % n)] = 1.0;
        }
        let oracle = PolynomialOracle::product(m).unwrap();
        let inside = newton_polytope_contains(&expand(&oracle).unwrap().support(), &vec![1.0; n]).unwrap().inside;
        let report = decide_polytope(&oracle).unwrap();
        let expected = if inside { Verdict::InPolytope } else { Verdict::NotInPolytope };
        prop_assert_eq!(report.verdict, expected, "min value {}", report.min_value_found);
    }
}

#[test]
fn doubly_stochastic_products_have_unit_capacity() {
    let mut rng = rng(30);
    for n in 2..=6 {
        let a = matrix_sinkhorn_reference(&nonnegative(&mut rng, n, 0.0), 2000).unwrap();
        let cap = capacity_estimate(&PolynomialOracle::product(a).unwrap(), 1e-10).unwrap();
        assert!((cap.capacity - 1.0).abs() <= 1e-6, "n={n}: {}", cap.capacity);
        assert!(cap.argmin.iter().all(|v| (v - 1.0).abs() <= 1e-3), "{:?}", cap.argmin);
    }
}

#[test]
fn gradient_bound_fails_for_the_powersum() {
    // n^n / (Σ x_i^n)^(n-1) on Π x = 1, strictly below Cap = n away from e
    let mut rng = rng(31);
    for n in 2..=5 {
        let oracle = PolynomialOracle::powersum(n);
        let cap = capacity_estimate(&oracle, 1e-10).unwrap().capacity;
        assert!((cap - n as f64).abs() <= 1e-6);
        let x = unit_product(positive_point(&mut rng, n));
        let bound = capacity_upper_bound_at(&oracle, &x).unwrap();
        let closed = (n as f64).powi(n as i32) / (x.iter().map(|v| v.powi(n as i32)).sum::<f64>()).powi(n as i32 - 1);
        assert!(rel_err(bound, closed) <= 1e-9);
        assert!(bound < cap, "n={n}: {bound} vs {cap}");
    }
}

#[test]
fn mixed_derivative_over_capacity_respects_the_bounds() {
    let mut rng = rng(32);
    for n in 2..=5 {
        for _ in 0..4 {
            let product = PolynomialOracle::product(nonnegative(&mut rng, n, 0.0)).unwrap();
            let det = PolynomialOracle::determinantal(pd_tuple(&mut rng, n)).unwrap();
            for oracle in [product, det] {
                let r = vdw_ratio(&oracle).unwrap();
                assert!(r.lower_bound_holds && r.upper_bound_holds, "{:?} n={n}: {}", oracle.kind(), r.ratio);
                assert_eq!(r.lower_bound, vdw_bound(n));
            }
        }
    }
    assert!((vdw_bound(3) - 6.0 / 27.0).abs() < 1e-15);
}

#[test]
fn capacity_of_a_polynomial_without_e_in_its_polytope_is_unbounded() {
    // x1 (x1 + x2) has the term x1 x2; x1^2 alone does not, and its
    // logarithm falls without bound on Σ y = 0
    let m = hyperpoly_core::Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
    let square = PolynomialOracle::product(m).unwrap();
    assert!(capacity_estimate(&square, 1e-8).is_ok());
    let poly = hyperpoly_core::oracle::ExplicitPolynomial::new(
        2,
        [(hyperpoly_core::ExponentVector::new(vec![2, 0]).unwrap(), 1.0)],
    )
    .unwrap();
    let err = capacity_estimate(&PolynomialOracle::explicit(poly), 1e-8).unwrap_err();
    assert!(matches!(err, Error::Unbounded(_)));
}

#[test]
fn verdict_thresholds() {
    assert_eq!(Verdict::from_value(IN_THRESHOLD), Verdict::InPolytope);
    assert_eq!(Verdict::from_value(0.0), Verdict::InPolytope);
    assert_eq!(Verdict::from_value(-0.5), Verdict::Inconclusive);
    assert_eq!(Verdict::from_value(NOT_THRESHOLD), Verdict::NotInPolytope);
    assert_eq!(Verdict::from_value(f64::NEG_INFINITY), Verdict::NotInPolytope);
}
