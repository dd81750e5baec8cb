//! Random instance generators shared by the verification suites, the
//! benchmark and the tests. Everything draws from a caller-supplied RNG.

use hyperpoly_core::Matrix;
use rand::seq::SliceRandom;
use rand::Rng;

/// 0/1 matrix with independent entries of probability `density`.
pub fn binary_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| if rng.random::<f64>() < density { 1.0 } else { 0.0 })
}

/// Binary matrix with density drawn so that roughly half the draws have a
/// perfect matching at the sizes used here.
pub fn mixed_binary_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let density = rng.random_range(0.15..0.5);
    binary_matrix(rng, n, density)
}

/// Nonnegative matrix with uniform entries, each zeroed with probability
/// `zero_prob`.
pub fn nonnegative_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, zero_prob: f64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| if rng.random::<f64>() < zero_prob { 0.0 } else { rng.random::<f64>() })
}

pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn permutation_matrix(p: &[usize]) -> Matrix {
    Matrix::from_fn(p.len(), p.len(), |i, j| if p[i] == j { 1.0 } else { 0.0 })
}

/// A convex combination of `n + 1` random permutation matrices.
pub fn doubly_stochastic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let k = n + 1;
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = Matrix::zeros(n, n);
    for w in weights {
        m.add_scaled(w / total, &permutation_matrix(&permutation(rng, n)));
    }
    m
}

/// `n` integer Gram matrices `B Bᵀ`. With probability one half a random
/// group of `k` matrices is confined to a common `(k−1)`-dimensional
/// coordinate subspace, forcing the mixed discriminant to vanish. A random
/// unimodular change of basis then hides the coordinate structure, so all
/// coefficients stay integral.
pub fn psd_tuple<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Matrix> {
    let mut row_sets: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let size = rng.random_range(1..=n);
            let mut rows = permutation(rng, n);
            rows.truncate(size);
            rows
        })
        .collect();
    if n >= 2 && rng.random::<bool>() {
        let k = rng.random_range(2..=n);
        let mut group = permutation(rng, n);
        group.truncate(k);
        let mut space = permutation(rng, n);
        space.truncate(k - 1);
        for i in group {
            let size = rng.random_range(1..=k - 1);
            let mut rows = space.clone();
            rows.shuffle(rng);
            rows.truncate(size);
            row_sets[i] = rows;
        }
    }
    let basis = unimodular(rng, n);
    row_sets
        .iter()
        .map(|rows| {
            let rank = rng.random_range(1..=2);
            let b = Matrix::from_fn(
                n,
                rank,
                |i, _| {
                    if rows.contains(&i) {
                        rng.random_range(-2i32..=2) as f64
                    } else {
                        0.0
                    }
                },
            );
            let g = b.matmul(&b.transpose());
            basis.matmul(&g).matmul(&basis.transpose())
        })
        .collect()
}

/// Unit lower-triangular integer matrix with small off-diagonal entries.
fn unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => rng.random_range(-1i32..=1) as f64,
        std::cmp::Ordering::Less => 0.0,
    })
}

/// Point with entries uniform in `[lo, hi)`.
pub fn positive_point<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Standard normal vector (Box–Muller).
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            (-2.0 * (1.0 - u).ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        })
        .collect()
}

/// Nonempty proper-or-full random subset of `0..n` as a bitmask.
pub fn subset_mask<R: Rng + ?Sized>(rng: &mut R, n: usize) -> u64 {
    loop {
        let m = rng.random::<u64>() & ((1u64 << n) - 1);
        if m != 0 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperpoly_core::seed::stream_rng;

    #[test]
    fn doubly_stochastic_sums() {
        let mut rng = stream_rng(3, 0);
        let m = doubly_stochastic(&mut rng, 5);
        for i in 0..5 {
            let r: f64 = m.row(i).iter().sum();
            let c: f64 = (0..5).map(|k| m[(k, i)]).sum();
            assert!((r - 1.0).abs() < 1e-14 && (c - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn psd_tuples_are_integral_and_valid() {
        let mut rng = stream_rng(4, 0);
        for n in 2..=6 {
            let t = psd_tuple(&mut rng, n);
            assert!(t.iter().all(|m| m.as_slice().iter().all(|v| v.fract() == 0.0)));
            hyperpoly_core::oracle::DeterminantalInstance::new(t).unwrap();
        }
    }
}
