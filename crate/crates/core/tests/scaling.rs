mod common;

use common::*;
use hyperpoly_core::capacity::{decide_polytope, Verdict};
use hyperpoly_core::scaling::{
    ds_defect, hs_step, matrix_sinkhorn_reference, row_normalized, sinkhorn_decide, sinkhorn_iterations, ScalingState,
    SinkhornVerdict,
};
use hyperpoly_core::spectra::trace_in_direction;
use hyperpoly_core::{Matrix, PolynomialOracle};
use proptest::prelude::*;

fn column_sums(m: &Matrix) -> Vec<f64> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)]).sum()).collect()
}

/// 0/1 matrix whose rows are all nonzero, so `Q(e) ≥ 1`.
fn binary_rows(rng: &mut rand_chacha::ChaCha8Rng, n: usize, density: f64) -> Matrix {
    let mut m = binary(rng, n, density);
    for i in 0..n {
        m[(i, (i * 3 + 2) % n)] = 1.0;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdict_is_permanent_positivity(seed in any::<u64>(), n in 2usize..=7) {
        let mut rng = rng(seed);
        let m = binary_rows(&mut rng, n, 0.3);
        let expected = permanent(&m) > 0.5;
        let report = sinkhorn_decide(&PolynomialOracle::product(m).unwrap()).unwrap();
        prop_assert_eq!(report.verdict == SinkhornVerdict::Positive, expected, "{:?}", report.trajectory.last());
        prop_assert!(!report.heuristic);
    }

    #[test]
    fn log_gradient_is_the_coordinate_trace(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let alpha = positive_point(&mut rng, n);
        let oracle = PolynomialOracle::product(nonzero_rows(&mut rng, n, 0.3)).unwrap();
        let state = ScalingState::at(&oracle, &alpha, 0).unwrap();
        for i in 0..n {
            let mut part = vec![0.0; n];
            part[i] = alpha[i];
            let tr = trace_in_direction(&oracle, &part, &alpha).unwrap();
            prop_assert!((tr - state.ratios[i]).abs() <= 1e-7 * state.ratios[i].max(1.0), "{} vs {}", tr, state.ratios[i]);
        }
    }
}

#[test]
fn scaling_agrees_with_the_polytope_decision() {
    let mut rng = rng(40);
    for n in 3..=6 {
        for _ in 0..8 {
            let oracle = PolynomialOracle::product(binary_rows(&mut rng, n, 0.35)).unwrap();
            let scaled = sinkhorn_decide(&oracle).unwrap().verdict == SinkhornVerdict::Positive;
            let decided = decide_polytope(&oracle).unwrap().verdict == Verdict::InPolytope;
            assert_eq!(scaled, decided);
        }
    }
}

#[test]
fn positive_runs_end_below_the_threshold() {
    let mut rng = rng(41);
    for n in 2..=8 {
        let oracle = PolynomialOracle::product(nonnegative(&mut rng, n, 0.0)).unwrap();
        let report = sinkhorn_decide(&oracle).unwrap();
        assert_eq!(report.verdict, SinkhornVerdict::Positive);
        let first = report.trajectory.first().unwrap().defect;
        let last = report.trajectory.last().unwrap().defect;
        assert!(last <= 1.0 / n as f64 && last <= first, "n={n}: {first} -> {last}");
        assert!(report.iterations <= report.max_iterations);
    }
}

#[test]
fn doubly_stochastic_points_are_fixed() {
    let mut rng = rng(42);
    for n in 2..=6 {
        let a = matrix_sinkhorn_reference(&nonnegative(&mut rng, n, 0.0), 2000).unwrap();
        let oracle = PolynomialOracle::product(a).unwrap();
        let e = vec![1.0; n];
        assert!(ds_defect(&oracle, &e).unwrap() <= 1e-12);
        let next = hs_step(&oracle, &ScalingState::at(&oracle, &e, 0).unwrap()).unwrap();
        assert!(next.alpha.iter().all(|v| (v - 1.0).abs() <= 1e-6), "{:?}", next.alpha);
        // a non-balanced point moves
        let mut skew = e.clone();
        skew[0] = 3.0;
        let moved = hs_step(&oracle, &ScalingState::at(&oracle, &skew, 0).unwrap()).unwrap();
        let product: f64 = moved.alpha.iter().product();
        assert!((product - 1.0).abs() <= 1e-12);
        assert!(ds_defect(&oracle, &skew).unwrap() > 1e-6);
    }
}

#[test]
fn matrix_reference_balances_rows_and_columns() {
    let mut rng = rng(43);
    for n in 2..=7 {
        // strictly positive, so convergence is geometric
        let m = matrix_sinkhorn_reference(&nonnegative(&mut rng, n, 0.0), 3000).unwrap();
        for s in column_sums(&m) {
            assert!((s - 1.0).abs() <= 1e-9);
        }
        for i in 0..n {
            let s: f64 = m.row(i).iter().sum();
            assert!((s - 1.0).abs() <= 1e-6, "row {i}: {s}");
        }
    }
    let r = row_normalized(&Matrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 2.0]]).unwrap()).unwrap();
    assert_eq!(r.row(0), &[0.25, 0.75]);
    assert!(matrix_sinkhorn_reference(&Matrix::from_rows(&[vec![-1.0]]).unwrap(), 1).is_err());
}

#[test]
fn a_zero_column_is_certified_negative() {
    let m = Matrix::from_rows(&[vec![1.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    let report = sinkhorn_decide(&PolynomialOracle::product(m).unwrap()).unwrap();
    assert_eq!(report.verdict, SinkhornVerdict::Negative);
    assert_eq!(report.certificate, Some(1));
}

#[test]
fn iteration_count_formula() {
    assert_eq!(sinkhorn_iterations(4, 1.0, 8.0), 32);
    assert_eq!(sinkhorn_iterations(5, 1e6, 2.0), (2.0 * 5.0 * 1e6_f64.ln()).ceil() as usize);
}
