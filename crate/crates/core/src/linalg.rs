//! Small dense linear algebra: just what the oracles and root finders need.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
// method resolution differs when dev-dependencies turn on num-traits/std
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Field scalars the oracles evaluate over: `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn finite(self) -> bool;

    fn powu(self, mut k: u32) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: T, other: &Matrix<T>) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.modulus()))
    }

    /// Determinant by Gaussian elimination with complete pivoting.
    ///
    /// Complete pivoting picks diagonal pivots on positive semidefinite
    /// input, which keeps graded PSD matrices accurate.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = T::one();
        for k in 0..n {
            let (mut pr, mut pc, mut best) = (k, k, -1.0);
            for i in k..n {
                for j in k..n {
                    let m = a[i * n + j].modulus();
                    if m > best {
                        best = m;
                        pr = i;
                        pc = j;
                    }
                }
            }
            if best == 0.0 {
                return T::zero();
            }
            if pr != k {
                for j in 0..n {
                    a.swap(k * n + j, pr * n + j);
                }
                det = -det;
            }
            if pc != k {
                for i in 0..n {
                    a.swap(i * n + k, i * n + pc);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det = det * pivot;
            for i in (k + 1)..n {
                let factor = a[i * n + k] / pivot;
                if factor == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let v = a[k * n + j];
                    a[i * n + j] = a[i * n + j] - factor * v;
                }
            }
        }
        det
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<f64> {
    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Cholesky factor `L` with `self = L Lᵀ`, or `None` if not positive definite.
    pub fn cholesky(&self) -> Option<Matrix<f64>> {
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Some(l)
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: Matrix<f64>,
}

/// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
pub fn symmetric_eigen(a: &Matrix<f64>) -> SymmetricEigen {
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::<f64>::identity(n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            diag += m[(i, i)] * m[(i, i)];
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    SymmetricEigen { values, vectors }
}

/// Numerical rank of a symmetric matrix: eigenvalues with modulus above
/// `rel_tol * max |eigenvalue|`.
pub fn symmetric_rank(a: &Matrix<f64>, rel_tol: f64) -> usize {
    let eig = symmetric_eigen(a);
    let top = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return 0;
    }
    eig.values.iter().filter(|v| v.abs() > rel_tol * top).count()
}

/// Diagonal similarity balancing of a square matrix (radix 2).
fn balance(a: &mut [Vec<f64>]) {
    let n = a.len();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= ginv;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration. `h` is indexed from 1 (row and column 0 are ignored).
fn hessenberg_eigenvalues(h: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex64>> {
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += h[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = h[l - 1][l - 1].abs() + h[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h[l][l - 1].abs() + s == s {
                    h[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = h[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                y = h[nn - 1][nn - 1];
                w = h[nn][nn - 1] * h[nn - 1][nn];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return Err(Error::NoConvergence);
                    }
                    if its == 10 || its == 20 || its == 40 {
                        t += x;
                        for i in 1..=nn {
                            h[i][i] -= x;
                        }
                        let s = h[nn][nn - 1].abs() + h[nn - 1][nn - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = h[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / h[m + 1][m] + h[m][m + 1];
                        q = h[m + 1][m + 1] - z - r - s;
                        r = h[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = h[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (h[m - 1][m - 1].abs() + z.abs() + h[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        h[i][i - 2] = 0.0;
                        if i != m + 2 {
                            h[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = h[k][k - 1];
                            q = h[k + 1][k - 1];
                            r = 0.0;
                            if k != nn - 1 {
                                r = h[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    h[k][k - 1] = -h[k][k - 1];
                                }
                            } else {
                                h[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = h[k][j] + q * h[k + 1][j];
                                if k != nn - 1 {
                                    p += r * h[k + 2][j];
                                    h[k + 2][j] -= p * z;
                                }
                                h[k + 1][j] -= p * y;
                                h[k][j] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * h[i][k] + y * h[i][k + 1];
                                if k != nn - 1 {
                                    p += z * h[i][k + 2];
                                    h[i][k + 2] -= p * r;
                                }
                                h[i][k + 1] -= p * q;
                                h[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// All complex roots of `Σ coeffs[k] t^k` (ascending coefficients, nonzero
/// leading term) from the eigenvalues of the balanced companion matrix,
/// each refined by a few Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let mut roots = companion_eigenvalues(coeffs)?;
    for root in roots.iter_mut() {
        *root = newton_polish(coeffs, *root);
    }
    Ok(roots)
}

/// Eigenvalues of the balanced companion matrix of `Σ coeffs[k] t^k`,
/// without refinement. Complex roots come in exact conjugate pairs.
pub fn companion_eigenvalues(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::DegenerateDirection { leading: lead });
    }
    if deg == 1 {
        return Ok(vec![Complex64::new(-coeffs[0] / lead, 0.0)]);
    }
    let mut h = vec![vec![0.0; deg + 1]; deg + 1];
    for j in 1..=deg {
        h[1][j] = -coeffs[deg - j] / lead;
    }
    for i in 2..=deg {
        h[i][i - 1] = 1.0;
    }
    let mut inner: Vec<Vec<f64>> = (1..=deg).map(|i| h[i][1..].to_vec()).collect();
    balance(&mut inner);
    for i in 1..=deg {
        h[i][1..].copy_from_slice(&inner[i - 1]);
    }
    hessenberg_eigenvalues(&mut h, deg)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton refinement of an approximate root, accepted only while the
/// residual decreases.
pub fn newton_polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let (mut value, mut slope) = horner(coeffs, z);
    for _ in 0..3 {
        if slope.norm() == 0.0 || value.norm() == 0.0 {
            break;
        }
        let candidate = z - value / slope;
        let (cv, cs) = horner(coeffs, candidate);
        if !(cv.norm() < value.norm()) {
            break;
        }
        z = candidate;
        value = cv;
        slope = cs;
    }
    if z.im.abs() <= 1e-15 * z.re.abs() {
        z.im = 0.0;
    }
    z
}

/// Simultaneous Aberth–Ehrlich refinement of the roots not marked `fixed`.
/// Each update divides out every other root, fixed ones included, so a
/// simple root next to a multiple one is not pulled towards it. An update
/// is kept only if it lowers the residual.
pub fn aberth_polish(coeffs: &[f64], roots: &mut [Complex64], fixed: &[bool]) {
    for _ in 0..32 {
        let mut moved = 0.0_f64;
        for i in 0..roots.len() {
            if fixed[i] {
                continue;
            }
            let z = roots[i];
            let (value, slope) = horner(coeffs, z);
            if value.norm() == 0.0 {
                continue;
            }
            let ratio = value / slope;
            let repel = roots
                .iter()
                .enumerate()
                .filter(|&(j, r)| j != i && *r != z)
                .fold(Complex64::new(0.0, 0.0), |s, (_, &r)| s + (z - r).inv());
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            let candidate = z - step;
            if !candidate.is_finite() || !(horner(coeffs, candidate).0.norm() < value.norm()) {
                continue;
            }
            roots[i] = candidate;
            moved = moved.max(step.norm() / candidate.norm().max(1.0));
        }
        if moved <= f64::EPSILON {
            break;
        }
    }
    for z in roots.iter_mut() {
        if z.im.abs() <= 1e-15 * z.re.abs() {
            z.im = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_small_matrices() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        assert!((a.determinant() - 5.0).abs() < 1e-14);
        let p = Matrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert!((p.determinant() - 1.0).abs() < 1e-14);
        let singular = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(singular.determinant(), 0.0);
    }

    #[test]
    fn complex_determinant() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let a = Matrix::from_rows(&[vec![i, one], vec![one, i]]).unwrap();
        // i*i - 1 = -2
        assert!((a.determinant() - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn jacobi_recovers_spectrum() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]]).unwrap();
        let eig = symmetric_eigen(&a);
        let expect = [1.0, 3.0, 5.0];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
        assert_eq!(symmetric_rank(&a, 1e-8), 3);
        let low = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(symmetric_rank(&low, 1e-8), 1);
    }

    #[test]
    fn roots_of_real_and_complex_polynomials() {
        // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
        let mut roots = polynomial_roots(&[-6.0, 11.0, -6.0, 1.0]).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (r, e) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r.re - e).abs() < 1e-12 && r.im.abs() < 1e-12);
        }
        // t^2 + 1
        let roots = polynomial_roots(&[1.0, 0.0, 1.0]).unwrap();
        for r in roots {
            assert!(r.re.abs() < 1e-12 && (r.im.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_of_wilkinson_like_polynomial() {
        // prod_{k=1..10} (t - k)
        let mut coeffs = vec![1.0];
        for k in 1..=10 {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * k as f64;
            }
            coeffs = next;
        }
        let mut roots = polynomial_roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (k, r) in roots.iter().enumerate() {
            assert!((r.re - (k + 1) as f64).abs() < 1e-8, "{r}");
        }
    }

    #[test]
    fn cholesky_detects_indefinite() {
        let pd = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = pd.cholesky().unwrap();
        let back = l.matmul(&l.transpose());
        assert!((back[(1, 1)] - 3.0).abs() < 1e-14);
        let indefinite = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(indefinite.cholesky().is_none());
    }
}
