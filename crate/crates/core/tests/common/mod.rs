//! Generators and brute-force reference computations shared by the
//! integration tests. Nothing here calls into the algorithms under test.
#![allow(dead_code)]

use hyperpoly_core::oracle::expand;
use hyperpoly_core::seed::stream_rng;
use hyperpoly_core::{Matrix, PolynomialOracle};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, 0xace)
}

pub fn nonnegative(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| if rng.random::<f64>() < zero_prob { 0.0 } else { rng.random_range(0.1..2.0) })
}

pub fn binary(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| if rng.random::<f64>() < density { 1.0 } else { 0.0 })
}

/// `n` integer Gram matrices `B Bᵀ` with random rank and support, so some
/// tuples are singular in the mixed sense.
pub fn psd_tuple(rng: &mut ChaCha8Rng, n: usize) -> Vec<Matrix> {
    (0..n)
        .map(|_| {
            let rank = rng.random_range(1..=2);
            let active: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.6).collect();
            let b = Matrix::from_fn(n, rank, |i, _| if active[i] { rng.random_range(-2i32..=2) as f64 } else { 0.0 });
            b.matmul(&b.transpose())
        })
        .collect()
}

/// Real symmetric positive definite matrices, for cases that need `p(e) > 0`.
pub fn pd_tuple(rng: &mut ChaCha8Rng, n: usize) -> Vec<Matrix> {
    (0..n)
        .map(|_| {
            let b = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let mut g = b.matmul(&b.transpose());
            g.add_scaled(0.1, &Matrix::identity(n));
            g
        })
        .collect()
}

pub fn positive_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.2..2.0)).collect()
}

pub fn real_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()
}

/// Random 0/1 adjacency matrix containing the cycle `0 → 1 → … → 0`.
pub fn cyclic_adjacency(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut a = binary(rng, n, 0.3);
    for i in 0..n {
        a[(i, (i + 1) % n)] = 1.0;
    }
    a
}

/// Nonnegative matrix with at least one nonzero entry per row, so its
/// product polynomial is not identically zero.
pub fn nonzero_rows(rng: &mut ChaCha8Rng, n: usize, zero_prob: f64) -> Matrix {
    let mut m = nonnegative(rng, n, zero_prob);
    for i in 0..n {
        if (0..n).all(|j| m[(i, j)] == 0.0) {
            let j = rng.random_range(0..n);
            m[(i, j)] = 1.0;
        }
    }
    m
}

/// One oracle of every family at size `n`, each positive on the open orthant.
pub fn every_family(rng: &mut ChaCha8Rng, n: usize) -> Vec<PolynomialOracle> {
    let product = PolynomialOracle::product(nonzero_rows(rng, n, 0.3)).unwrap();
    let explicit = expand(&PolynomialOracle::product(nonzero_rows(rng, n, 0.5)).unwrap()).unwrap();
    vec![
        product,
        PolynomialOracle::determinantal(pd_tuple(rng, n)).unwrap(),
        PolynomialOracle::trace(cyclic_adjacency(rng, n)).unwrap(),
        PolynomialOracle::powersum(n),
        PolynomialOracle::explicit(explicit),
    ]
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                rec(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn sign(p: &[usize]) -> f64 {
    let inversions =
        (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn permanent(m: &Matrix) -> f64 {
    permutations(m.rows()).iter().map(|p| p.iter().enumerate().map(|(i, &j)| m[(i, j)]).product::<f64>()).sum()
}

pub fn has_matching(m: &Matrix) -> bool {
    permutations(m.rows()).iter().any(|p| p.iter().enumerate().all(|(i, &j)| m[(i, j)] != 0.0))
}

/// `Σ_{σ,τ} sgn(σ) sgn(τ) Π_i A_i[σ(i), τ(i)]`.
pub fn mixed_discriminant(mats: &[Matrix]) -> f64 {
    let perms = permutations(mats.len());
    let mut total = 0.0;
    for s in &perms {
        for t in &perms {
            let term: f64 = mats.iter().enumerate().map(|(i, a)| a[(s[i], t[i])]).product();
            total += sign(s) * sign(t) * term;
        }
    }
    total
}

pub fn to_nalgebra(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn combination(mats: &[Matrix], w: &[f64]) -> DMatrix<f64> {
    let n = mats[0].rows();
    let mut out = DMatrix::zeros(n, n);
    for (a, &wi) in mats.iter().zip(w) {
        out += to_nalgebra(a) * wi;
    }
    out
}

/// Eigenvalues of the pencil `(A(x), A(d))` for positive definite `A(d)`,
/// ascending: the roots of `det(A(x) − t A(d))`.
pub fn pencil_eigenvalues(mats: &[Matrix], x: &[f64], d: &[f64]) -> Vec<f64> {
    let ax = combination(mats, x);
    let ad = combination(mats, d);
    let l = ad.cholesky().expect("direction matrix is positive definite").l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * ax * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
