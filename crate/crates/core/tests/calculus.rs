mod common;

use common::*;
use hyperpoly_core::calculus::{
    brute_mixed_discriminant, gradient, gradient_log, mixed_form, partial_derivative, polarization_mixed_derivative,
    random_complex_mixed_derivative, restrict, ryser_permanent,
};
use hyperpoly_core::{Matrix, PolynomialOracle};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn euler_identity(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let x = positive_point(&mut rng, n);
        for oracle in every_family(&mut rng, n) {
            let g = gradient(&oracle, &x).unwrap();
            let lhs: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
            let rhs = n as f64 * oracle.eval(&x).unwrap();
            prop_assert!(rel_err(lhs, rhs) <= 1e-8, "{:?}: {} vs {}", oracle.kind(), lhs, rhs);
        }
    }

    #[test]
    fn partials_match_central_differences(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = rng(seed);
        let x = positive_point(&mut rng, n);
        let h = 1e-5;
        for oracle in every_family(&mut rng, n) {
            for i in 0..n {
                let mut up = x.clone();
                let mut down = x.clone();
                up[i] += h;
                down[i] -= h;
                let fd = (oracle.eval(&up).unwrap() - oracle.eval(&down).unwrap()) / (2.0 * h);
                let exact = partial_derivative(&oracle, &x, i).unwrap();
                let scale = oracle.eval(&x).unwrap() / x[i];
                prop_assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(scale), "{:?} i={}: {} vs {}", oracle.kind(), i, fd, exact);
            }
        }
    }

    #[test]
    fn restriction_reproduces_the_line(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng(seed);
        let x = real_point(&mut rng, n);
        let v = real_point(&mut rng, n);
        for oracle in every_family(&mut rng, n) {
            let r = restrict(&oracle, &x, &v).unwrap();
            prop_assert_eq!(r.degree(), n);
            for t in [-1.5, -0.3, 0.0, 0.7, 2.0] {
                let point: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + t * b).collect();
                let direct = oracle.eval(&point).unwrap();
                let size = oracle.eval(&point.iter().map(|p| p.abs()).collect::<Vec<_>>()).unwrap().max(1.0);
                prop_assert!((r.evaluate(t) - direct).abs() <= 1e-8 * size);
            }
        }
    }

    #[test]
    fn log_gradient_sums_to_degree(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = rng(seed);
        let x = positive_point(&mut rng, n);
        for oracle in every_family(&mut rng, n) {
            let g = gradient_log(&oracle, &x).unwrap();
            prop_assert!((g.ratios.iter().sum::<f64>() - n as f64).abs() <= 1e-8);
        }
    }
}

#[test]
fn polarization_uses_two_to_the_n_minus_one_calls() {
    let mut rng = rng(10);
    for n in 1..=10 {
        let oracle = PolynomialOracle::product(nonnegative(&mut rng, n, 0.0)).unwrap();
        oracle.reset_calls();
        polarization_mixed_derivative(&oracle).unwrap();
        assert_eq!(oracle.call_count(), 1 << (n - 1));
    }
}

#[test]
fn canonical_mixed_form_is_polarization() {
    let mut rng = rng(11);
    for n in 2..=6 {
        let canonical: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        for oracle in every_family(&mut rng, n) {
            let a = mixed_form(&oracle, &canonical).unwrap();
            let b = polarization_mixed_derivative(&oracle).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{:?}: {a} vs {b}", oracle.kind());
        }
    }
}

#[test]
fn mixed_form_of_product_is_permanent_of_images() {
    // M_q(x_1..x_n) for q = Π (Mx)_i is per(M X) with X = [x_1 .. x_n]
    let mut rng = rng(12);
    for n in 2..=5 {
        let m = nonnegative(&mut rng, n, 0.2);
        let tuple: Vec<Vec<f64>> = (0..n).map(|_| positive_point(&mut rng, n)).collect();
        let x = Matrix::from_fn(n, n, |i, j| tuple[j][i]);
        let reference = permanent(&m.matmul(&x));
        let oracle = PolynomialOracle::product(m).unwrap();
        let value = mixed_form(&oracle, &tuple).unwrap();
        assert!(rel_err(value, reference) <= 1e-9, "n={n}: {value} vs {reference}");
    }
}

#[test]
fn mixed_discriminant_of_diagonal_tuple_is_permanent() {
    let mut rng = rng(13);
    for n in 1..=7 {
        let rows = nonnegative(&mut rng, n, 0.2);
        let mats: Vec<Matrix> =
            (0..n).map(|i| Matrix::from_fn(n, n, |a, b| if a == b { rows[(i, a)] } else { 0.0 })).collect();
        let md = brute_mixed_discriminant(&mats).unwrap();
        let reference = permanent(&rows);
        assert!(rel_err(md.value, reference) <= 1e-8, "n={n}: {} vs {reference}", md.value);
        assert!(rel_err(md.inclusion_exclusion, reference) <= 1e-8);
    }
}

#[test]
fn mixed_discriminant_matches_permutation_expansion() {
    let mut rng = rng(14);
    for n in 1..=5 {
        for _ in 0..10 {
            let mats = psd_tuple(&mut rng, n);
            let reference = mixed_discriminant(&mats);
            let md = brute_mixed_discriminant(&mats).unwrap();
            assert!((md.value - reference).abs() <= 1e-8 * reference.abs().max(1.0), "{} vs {reference}", md.value);
            let oracle = PolynomialOracle::determinantal(mats).unwrap();
            let polar = polarization_mixed_derivative(&oracle).unwrap();
            assert!((polar - reference).abs() <= 1e-8 * reference.abs().max(1.0));
        }
    }
}

#[test]
fn ryser_matches_permutation_sum_on_signed_matrices() {
    let mut rng = rng(15);
    for n in 1..=7 {
        let m = Matrix::from_fn(n, n, |i, j| ((i * 7 + j * 3 + n) % 5) as f64 - 2.0 + 0.1 * rng_entry(&mut rng));
        let a = ryser_permanent(&m).unwrap();
        let b = permanent(&m);
        assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "n={n}: {a} vs {b}");
    }
}

fn rng_entry(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    rng.random_range(-1.0..1.0)
}

#[test]
fn monte_carlo_is_unbiased() {
    let mut rng = rng(16);
    for trial in 0..3u64 {
        let m = nonnegative(&mut rng, 5, 0.2);
        let truth = permanent(&m);
        let oracle = PolynomialOracle::product(m).unwrap();
        let mc = random_complex_mixed_derivative(&oracle, 100_000, trial).unwrap();
        assert_eq!(mc.samples, 100_000);
        assert!((mc.mean - truth).abs() <= 3.0 * mc.std_error, "{} vs {truth} (se {})", mc.mean, mc.std_error);
        let again = random_complex_mixed_derivative(&oracle, 100_000, trial).unwrap();
        assert_eq!(mc, again);
    }
}
