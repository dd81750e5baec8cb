//! Polynomial families and the counting evaluation oracle.
//!
//! Every polynomial here is homogeneous of degree `n` in `n` variables with
//! nonnegative coefficients. Algorithms see a polynomial only through
//! [`PolynomialOracle::eval`] and [`PolynomialOracle::eval_complex`], and each
//! of those calls bumps an atomic counter.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
// method resolution differs when dev-dependencies turn on num-traits/std
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{symmetric_eigen, Matrix, Scalar};
use crate::{Error, Result};

/// Largest `n` for which a family may be expanded into explicit terms.
pub const MAX_EXPAND_N: usize = 12;

/// Largest `n` for which determinantal and trace families are expanded by
/// sampling on the torus (`(n+1)^(n-1)` evaluations).
pub const MAX_TORUS_EXPAND_N: usize = 8;

/// From this size on, trace evaluation raises `D(x)A` to the n-th power by
/// repeated squaring instead of `n - 1` successive products.
const TRACE_SQUARING_FROM: usize = 8;

/// An exponent vector in `I_{n,n}`: `n` nonnegative integers summing to `n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        let n = exponents.len();
        let total: u64 = exponents.iter().map(|&r| u64::from(r)).sum();
        if n == 0 || total != n as u64 {
            return Err(Error::InvalidExponent(format!("{exponents:?} has length {n} but sums to {total}")));
        }
        Ok(Self(exponents))
    }

    /// The all-ones vector `(1, ..., 1)`.
    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `Σ_{i ∈ S} r_i` for the subset encoded by `mask`.
    pub fn subset_sum(&self, mask: u64) -> u32 {
        self.0.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &r)| r).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&r| f64::from(r)).collect()
    }

    /// Every vector of `I_{n,n}` in lexicographic order.
    pub fn enumerate(n: usize) -> Vec<ExponentVector> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left;
                out.push(ExponentVector(cur.clone()));
                return;
            }
            for r in (0..=left).rev() {
                cur[i] = r;
                rec(i + 1, left - r, cur, out);
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(0, n as u32, &mut vec![0; n], &mut out);
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// A polynomial stored as its nonzero terms; the key set is the support.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitPolynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, f64>,
}

impl ExplicitPolynomial {
    /// Collects `(exponent, coefficient)` pairs. Repeated exponents are summed
    /// and zero coefficients dropped; negative or non-finite ones are rejected.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (ExponentVector, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("n must be positive".into()));
        }
        let mut map: BTreeMap<ExponentVector, f64> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != n {
                return Err(Error::InvalidExponent(format!("{exp} has length {} not {n}", exp.len())));
            }
            if !coef.is_finite() || coef < 0.0 {
                return Err(Error::InvalidCoefficient(coef));
            }
            *map.entry(exp).or_insert(0.0) += coef;
        }
        map.retain(|_, c| *c > 0.0);
        Ok(Self { n, terms: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, f64> {
        &self.terms
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> f64 {
        self.terms.get(exp).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> crate::combinatorics::SupportSet {
        crate::combinatorics::SupportSet::from_vectors(self.n, self.terms.keys().cloned())
            .expect("terms are validated on construction")
    }

    fn evaluate<S: Scalar>(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (exp, &c) in &self.terms {
            let mut m = S::from_real(c);
            for (&xi, &r) in x.iter().zip(exp.as_slice()) {
                if r > 0 {
                    m = m * xi.powu(r);
                }
            }
            acc += m;
        }
        acc
    }
}

/// `det(Σ x_i A_i)` for symmetric positive semidefinite `A_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminantalInstance {
    n: usize,
    matrices: Vec<Matrix>,
}

/// Asymmetry accepted in a determinantal matrix (relative to `max(1, |A|)`).
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted in a determinantal matrix (relative to `max(1, |A|)`).
pub const PSD_FLOOR: f64 = -1e-9;

impl DeterminantalInstance {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let n = matrices.len();
        if n == 0 {
            return Err(Error::Dimension("need at least one matrix".into()));
        }
        let mut checked = Vec::with_capacity(n);
        for (index, a) in matrices.into_iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!("matrix {index} is {}x{}, expected {n}x{n}", a.rows(), a.cols())));
            }
            if a.as_slice().iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            let scale = a.max_modulus().max(1.0);
            let asymmetry = a.asymmetry();
            if asymmetry > SYMMETRY_TOL * scale {
                return Err(Error::NotSymmetric { index, asymmetry });
            }
            let sym = a.symmetrized();
            let eig = symmetric_eigen(&sym);
            let min_eigenvalue = eig.values[0];
            if min_eigenvalue < PSD_FLOOR * scale {
                return Err(Error::NotPsd { index, min_eigenvalue });
            }
            if min_eigenvalue < 0.0 {
                // rebuild with the negative round-off eigenvalues clipped
                let v = &eig.vectors;
                let clipped =
                    Matrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * eig.values[k].max(0.0) * v[(j, k)]).sum());
                checked.push(clipped.symmetrized());
            } else {
                checked.push(sym);
            }
        }
        Ok(Self { n, matrices: checked })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `Σ_i w_i A_i`.
    pub fn combination(&self, weights: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for (a, &w) in self.matrices.iter().zip(weights) {
            if w != 0.0 {
                m.add_scaled(w, a);
            }
        }
        m
    }

    fn evaluate<S: Scalar>(&self, x: &[S]) -> S {
        let n = self.n;
        let mut m = Matrix::<S>::zeros(n, n);
        for (a, &xi) in self.matrices.iter().zip(x) {
            if xi == S::zero() {
                continue;
            }
            for r in 0..n {
                for c in 0..n {
                    let v = a[(r, c)];
                    if v != 0.0 {
                        m[(r, c)] += xi * S::from_real(v);
                    }
                }
            }
        }
        m.determinant()
    }
}

/// `Π_i (Σ_j A(i,j) x_j)` for an entrywise nonnegative `A`; its mixed
/// derivative is `Per(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductInstance {
    n: usize,
    matrix: Matrix,
}

impl ProductInstance {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.rows();
        if n == 0 || !matrix.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", matrix.rows(), matrix.cols())));
        }
        for i in 0..n {
            for j in 0..n {
                let v = matrix[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite);
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { row: i, col: j, value: v });
                }
            }
        }
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    fn evaluate<S: Scalar>(&self, x: &[S]) -> S {
        let mut acc = S::one();
        for i in 0..self.n {
            let mut row = S::zero();
            for (&a, &xj) in self.matrix.row(i).iter().zip(x) {
                if a != 0.0 {
                    row += S::from_real(a) * xj;
                }
            }
            acc = acc * row;
        }
        acc
    }

    /// Exact multiplication of the linear forms into explicit terms.
    fn expand(&self) -> Result<ExplicitPolynomial> {
        let n = self.n;
        let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        acc.insert(vec![0; n], 1.0);
        for i in 0..n {
            let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for (exp, &c) in &acc {
                for j in 0..n {
                    let a = self.matrix[(i, j)];
                    if a == 0.0 {
                        continue;
                    }
                    let mut e = exp.clone();
                    e[j] += 1;
                    *next.entry(e).or_insert(0.0) += c * a;
                }
            }
            acc = next;
        }
        let terms = acc.into_iter().map(|(e, c)| ExponentVector::new(e).map(|e| (e, c))).collect::<Result<Vec<_>>>()?;
        ExplicitPolynomial::new(n, terms)
    }
}

/// `tr((D(x) A)^n)` for a 0/1 adjacency matrix `A`; its mixed derivative is
/// `n` times the number of Hamiltonian circuits.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceInstance {
    n: usize,
    adjacency: Matrix,
}

impl TraceInstance {
    pub fn new(adjacency: Matrix) -> Result<Self> {
        let n = adjacency.rows();
        if n == 0 || !adjacency.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", adjacency.rows(), adjacency.cols())));
        }
        for i in 0..n {
            for j in 0..n {
                let v = adjacency[(i, j)];
                if v != 0.0 && v != 1.0 {
                    return Err(Error::NotBinary { row: i, col: j, value: v });
                }
            }
        }
        Ok(Self { n, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.adjacency
    }

    fn scaled<S: Scalar>(&self, x: &[S]) -> Matrix<S> {
        Matrix::from_fn(self.n, self.n, |i, j| x[i] * S::from_real(self.adjacency[(i, j)]))
    }

    fn evaluate<S: Scalar>(&self, x: &[S]) -> S {
        if self.n >= TRACE_SQUARING_FROM {
            self.evaluate_by_squaring(x)
        } else {
            self.evaluate_naive(x)
        }
    }

    fn evaluate_naive<S: Scalar>(&self, x: &[S]) -> S {
        let base = self.scaled(x);
        let mut power = base.clone();
        for _ in 1..self.n {
            power = power.matmul(&base);
        }
        power.trace()
    }

    fn evaluate_by_squaring<S: Scalar>(&self, x: &[S]) -> S {
        let mut base = self.scaled(x);
        let mut k = self.n;
        let mut acc: Option<Matrix<S>> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.matmul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        acc.map_or(S::zero(), |m| m.trace())
    }
}

/// One of the supported polynomial families.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Explicit(ExplicitPolynomial),
    Determinantal(DeterminantalInstance),
    Product(ProductInstance),
    Trace(TraceInstance),
    PowerSum { n: usize },
}

/// Family tag of an [`Instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Kind {
    Explicit,
    Determinantal,
    Product,
    Trace,
    PowerSum,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Explicit => "explicit",
            Kind::Determinantal => "determinantal",
            Kind::Product => "product",
            Kind::Trace => "trace",
            Kind::PowerSum => "powersum",
        }
    }

    /// Families that are hyperbolic in direction `e` with the orthant in the
    /// cone by construction.
    pub fn is_p_hyperbolic_family(self) -> bool {
        matches!(self, Kind::Determinantal | Kind::Product)
    }
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Explicit(p) => p.n,
            Instance::Determinantal(d) => d.n,
            Instance::Product(p) => p.n,
            Instance::Trace(t) => t.n,
            Instance::PowerSum { n } => *n,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Instance::Explicit(_) => Kind::Explicit,
            Instance::Determinantal(_) => Kind::Determinantal,
            Instance::Product(_) => Kind::Product,
            Instance::Trace(_) => Kind::Trace,
            Instance::PowerSum { .. } => Kind::PowerSum,
        }
    }

    fn evaluate<S: Scalar>(&self, x: &[S]) -> S {
        match self {
            Instance::Explicit(p) => p.evaluate(x),
            Instance::Determinantal(d) => d.evaluate(x),
            Instance::Product(p) => p.evaluate(x),
            Instance::Trace(t) => t.evaluate(x),
            Instance::PowerSum { n } => {
                let mut acc = S::zero();
                for &xi in x {
                    acc += xi.powu(*n as u32);
                }
                acc
            }
        }
    }
}

/// Unvalidated description of an instance, as read from an instance file.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSpec {
    Explicit { n: usize, terms: Vec<(Vec<u32>, f64)> },
    Determinantal { n: usize, matrices: Vec<Vec<Vec<f64>>> },
    Product { n: usize, matrix: Vec<Vec<f64>> },
    Trace { n: usize, adjacency: Vec<Vec<f64>> },
    PowerSum { n: usize },
}

fn square(n: usize, rows: &[Vec<f64>], what: &str) -> Result<Matrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("{what} must be {n}x{n}")));
    }
    Matrix::from_rows(rows)
}

impl InstanceSpec {
    pub fn into_instance(self) -> Result<Instance> {
        match self {
            InstanceSpec::Explicit { n, terms } => {
                let terms = terms
                    .into_iter()
                    .map(|(e, c)| {
                        if e.len() != n {
                            return Err(Error::Dimension(format!("exponent {e:?} has length {} not {n}", e.len())));
                        }
                        ExponentVector::new(e).map(|e| (e, c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Instance::Explicit(ExplicitPolynomial::new(n, terms)?))
            }
            InstanceSpec::Determinantal { n, matrices } => {
                if matrices.len() != n {
                    return Err(Error::Dimension(format!("expected {n} matrices, got {}", matrices.len())));
                }
                let ms = matrices
                    .iter()
                    .enumerate()
                    .map(|(i, m)| square(n, m, &format!("matrix {i}")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Instance::Determinantal(DeterminantalInstance::new(ms)?))
            }
            InstanceSpec::Product { n, matrix } => {
                Ok(Instance::Product(ProductInstance::new(square(n, &matrix, "matrix")?)?))
            }
            InstanceSpec::Trace { n, adjacency } => {
                Ok(Instance::Trace(TraceInstance::new(square(n, &adjacency, "adjacency")?)?))
            }
            InstanceSpec::PowerSum { n } => {
                if n == 0 {
                    return Err(Error::Dimension("n must be positive".into()));
                }
                Ok(Instance::PowerSum { n })
            }
        }
    }
}

/// Validates a description and wraps it in a counting oracle.
pub fn make_oracle(spec: InstanceSpec) -> Result<PolynomialOracle> {
    Ok(PolynomialOracle::new(spec.into_instance()?))
}

/// Black-box access to a polynomial with evaluation accounting.
///
/// Evaluation takes `&self`; the counter is atomic, so one oracle may be
/// shared across threads.
#[derive(Debug)]
pub struct PolynomialOracle {
    instance: Instance,
    calls: AtomicU64,
}

impl Clone for PolynomialOracle {
    fn clone(&self) -> Self {
        Self { instance: self.instance.clone(), calls: AtomicU64::new(self.call_count()) }
    }
}

impl PolynomialOracle {
    pub fn new(instance: Instance) -> Self {
        Self { instance, calls: AtomicU64::new(0) }
    }

    pub fn powersum(n: usize) -> Self {
        Self::new(Instance::PowerSum { n })
    }

    pub fn product(matrix: Matrix) -> Result<Self> {
        Ok(Self::new(Instance::Product(ProductInstance::new(matrix)?)))
    }

    pub fn determinantal(matrices: Vec<Matrix>) -> Result<Self> {
        Ok(Self::new(Instance::Determinantal(DeterminantalInstance::new(matrices)?)))
    }

    pub fn trace(adjacency: Matrix) -> Result<Self> {
        Ok(Self::new(Instance::Trace(TraceInstance::new(adjacency)?)))
    }

    pub fn explicit(poly: ExplicitPolynomial) -> Self {
        Self::new(Instance::Explicit(poly))
    }

    /// Degree, which is also the number of variables.
    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn kind(&self) -> Kind {
        self.instance.kind()
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    fn check<S: Scalar>(&self, x: &[S]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::Dimension(format!(
                "point has length {} but the oracle has {} variables",
                x.len(),
                self.n()
            )));
        }
        if x.iter().any(|v| !v.finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Value at a real point.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        self.calls.fetch_add(1, Ordering::Relaxed);
        Ok(self.instance.evaluate(x))
    }

    /// Value at a complex point, by the same formula over `C`.
    pub fn eval_complex(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check(z)?;
        self.calls.fetch_add(1, Ordering::Relaxed);
        Ok(self.instance.evaluate(z))
    }
}

/// Expands an oracle into explicit terms.
///
/// Explicit, product and power-sum instances expand exactly from their
/// structure. Determinantal and trace instances are expanded from oracle
/// values on the torus of `(n+1)`-th roots of unity (an exact inverse DFT for
/// polynomials of degree at most `n` per variable); coefficients below
/// `1e-10 · p(e)`, or below the roundoff of the samples, are treated as zero.
pub fn expand(oracle: &PolynomialOracle) -> Result<ExplicitPolynomial> {
    let n = oracle.n();
    if n > MAX_EXPAND_N {
        return Err(Error::Budget { what: "explicit expansion", n, limit: MAX_EXPAND_N });
    }
    match oracle.instance() {
        Instance::Explicit(p) => Ok(p.clone()),
        Instance::Product(p) => p.expand(),
        Instance::PowerSum { n } => {
            let n = *n;
            let terms = (0..n).map(|i| {
                let mut e = vec![0; n];
                e[i] = n as u32;
                (ExponentVector(e), 1.0)
            });
            ExplicitPolynomial::new(n, terms)
        }
        Instance::Determinantal(_) | Instance::Trace(_) => expand_on_torus(oracle),
    }
}

impl Instance {
    /// First-order bound on the roundoff of evaluating at `x`, in units of
    /// `eps`. Products sum the error of each linear form times the other
    /// factors; determinants use Hadamard's bound on `Σ |x_i| |A_i|`; the
    /// remaining families have nonnegative parameters and are evaluated at
    /// `|x|`. Makes no oracle calls.
    pub fn roundoff_scale(&self, x: &[f64]) -> f64 {
        let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        match self {
            Instance::Determinantal(d) => {
                let n = d.n();
                let mut sum = Matrix::zeros(n, n);
                for (a, &w) in d.matrices().iter().zip(&abs) {
                    sum.add_scaled(w, &Matrix::from_fn(n, n, |i, j| a[(i, j)].abs()));
                }
                (0..n).map(|j| (0..n).map(|i| sum[(i, j)] * sum[(i, j)]).sum::<f64>().sqrt()).product()
            }
            Instance::Product(p) => {
                let m = p.matrix();
                let n = m.rows();
                let forms: Vec<(f64, f64)> = (0..n)
                    .map(|i| (0..n).fold((0.0, 0.0), |(v, a), j| (v + m[(i, j)] * x[j], a + m[(i, j)] * abs[j])))
                    .collect();
                (0..n)
                    .map(|i| {
                        forms[i].1
                            * forms.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f.0.abs()).product::<f64>()
                    })
                    .sum()
            }
            other => other.evaluate(&abs),
        }
    }
}

fn expand_on_torus(oracle: &PolynomialOracle) -> Result<ExplicitPolynomial> {
    let n = oracle.n();
    if n > MAX_TORUS_EXPAND_N {
        return Err(Error::Budget { what: "torus expansion", n, limit: MAX_TORUS_EXPAND_N });
    }
    if n == 1 {
        let c = oracle.eval(&[1.0])?;
        return ExplicitPolynomial::new(1, [(ExponentVector(vec![1]), c.max(0.0))]);
    }
    let m = n - 1;
    let grid = n + 1;
    let total = grid.pow(m as u32);
    let roots: Vec<Complex64> =
        (0..grid).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / grid as f64)).collect();
    // samples with the last variable fixed to 1
    let mut values = Vec::with_capacity(total);
    let mut point = vec![Complex64::new(1.0, 0.0); n];
    for idx in 0..total {
        let mut rest = idx;
        for slot in point.iter_mut().take(m) {
            *slot = roots[rest % grid];
            rest /= grid;
        }
        values.push(oracle.eval_complex(&point)?);
    }
    // inverse DFT along each axis
    let mut stride = 1;
    let mut scratch = vec![Complex64::new(0.0, 0.0); grid];
    for _axis in 0..m {
        for base in 0..total {
            if (base / stride) % grid != 0 {
                continue;
            }
            for (r, s) in scratch.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..grid {
                    acc += values[base + k * stride] * roots[(grid - (r * k) % grid) % grid];
                }
                *s = acc / grid as f64;
            }
            for (r, s) in scratch.iter().enumerate() {
                values[base + r * stride] = *s;
            }
        }
        stride *= grid;
    }
    let at_ones = oracle.eval(&vec![1.0; n])?;
    let threshold = (1e-10 * at_ones.abs())
        .max(1e3 * f64::EPSILON * oracle.instance().roundoff_scale(&vec![1.0; n]))
        .max(f64::MIN_POSITIVE);
    let mut terms = Vec::new();
    for exp in ExponentVector::enumerate(n) {
        let mut idx = 0;
        let mut mul = 1;
        for &r in &exp.as_slice()[..m] {
            idx += r as usize * mul;
            mul *= grid;
        }
        let c = values[idx].re;
        if c.abs() > threshold {
            if c < 0.0 {
                return Err(Error::Numerical(format!("negative coefficient {c:e} for {exp} in expansion")));
            }
            terms.push((exp, c));
        }
    }
    ExplicitPolynomial::new(n, terms)
}

/// Human-readable label used in reports.
pub fn describe(instance: &Instance) -> String {
    format!("{}(n={})", instance.kind().as_str(), instance.n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn determinantal_diagonal_evaluation() {
        let o =
            PolynomialOracle::determinantal(vec![mat(&[&[1.0, 0.0], &[0.0, 0.0]]), mat(&[&[0.0, 0.0], &[0.0, 1.0]])])
                .unwrap();
        assert!((o.eval(&[2.0, 3.0]).unwrap() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn product_and_powersum_evaluation() {
        let o = PolynomialOracle::product(mat(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert_eq!(o.eval(&[1.0, 1.0]).unwrap(), 4.0);
        assert_eq!(PolynomialOracle::powersum(2).eval(&[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn trace_of_two_cycle() {
        let o = PolynomialOracle::trace(mat(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(o.eval(&[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(o.eval(&[3.0, 5.0]).unwrap(), 30.0);
    }

    #[test]
    fn trace_squaring_matches_naive() {
        let n = 9;
        let adj = Matrix::from_fn(n, n, |i, j| if (i * 7 + j * 3) % 4 == 0 && i != j { 1.0 } else { 0.0 });
        let t = TraceInstance::new(adj).unwrap();
        let x: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 * 0.1).collect();
        let a = t.evaluate_naive(&x);
        let b = t.evaluate_by_squaring(&x);
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn explicit_evaluation() {
        let p = ExplicitPolynomial::new(2, [(ExponentVector::new(vec![1, 1]).unwrap(), 2.0)]).unwrap();
        let o = PolynomialOracle::explicit(p);
        assert_eq!(o.eval(&[3.0, 4.0]).unwrap(), 24.0);
    }

    #[test]
    fn complex_evaluation() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let ps = PolynomialOracle::powersum(2);
        assert!(ps.eval_complex(&[one + i, one - i]).unwrap().norm() < 1e-15);
        let id = PolynomialOracle::product(Matrix::identity(2)).unwrap();
        assert!((id.eval_complex(&[i, i]).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let sq = PolynomialOracle::explicit(
            ExplicitPolynomial::new(2, [(ExponentVector::new(vec![2, 0]).unwrap(), 1.0)]).unwrap(),
        );
        let v = sq.eval_complex(&[i * 2.0, Complex64::new(0.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(-4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn call_count_is_exact() {
        let o = PolynomialOracle::powersum(3);
        for k in 1..=7 {
            o.eval(&[1.0, 2.0, 3.0]).unwrap();
            assert_eq!(o.call_count(), k);
        }
        assert!(o.eval(&[1.0]).is_err());
        assert!(o.eval(&[f64::NAN, 1.0, 1.0]).is_err());
        assert_eq!(o.call_count(), 7);
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(
            DeterminantalInstance::new(vec![mat(&[&[1.0, 2.0], &[2.0, 1.0]]), Matrix::identity(2)]),
            Err(Error::NotPsd { index: 0, .. })
        ));
        assert!(matches!(
            DeterminantalInstance::new(vec![mat(&[&[1.0, 0.5], &[0.0, 1.0]]), Matrix::identity(2)]),
            Err(Error::NotSymmetric { index: 0, .. })
        ));
        assert!(matches!(
            DeterminantalInstance::new(vec![Matrix::identity(3), Matrix::identity(3)]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            ProductInstance::new(mat(&[&[1.0, -1.0], &[0.0, 1.0]])),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
        assert!(matches!(TraceInstance::new(mat(&[&[0.0, 2.0], &[1.0, 0.0]])), Err(Error::NotBinary { .. })));
        assert!(ExponentVector::new(vec![1, 2]).is_err());
        assert!(make_oracle(InstanceSpec::Product { n: 3, matrix: vec![vec![1.0; 3]; 2] }).is_err());
    }

    #[test]
    fn psd_round_off_is_clipped() {
        // eigenvalues 2 and -1e-12
        let eps = 1e-12;
        let a = mat(&[&[1.0 - eps / 2.0, 1.0 + eps / 2.0], &[1.0 + eps / 2.0, 1.0 - eps / 2.0]]);
        let d = DeterminantalInstance::new(vec![a, Matrix::identity(2)]).unwrap();
        let min = symmetric_eigen(&d.matrices()[0]).values[0];
        assert!(min >= -1e-15);
    }

    #[test]
    fn supports_of_expansions() {
        let j = PolynomialOracle::product(mat(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        let p = expand(&j).unwrap();
        let keys: Vec<_> = p.terms().keys().map(|e| e.as_slice().to_vec()).collect();
        assert_eq!(keys, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(p.coefficient(&ExponentVector::new(vec![1, 1]).unwrap()), 2.0);
        let ps = expand(&PolynomialOracle::powersum(2)).unwrap();
        let keys: Vec<_> = ps.terms().keys().map(|e| e.as_slice().to_vec()).collect();
        assert_eq!(keys, vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn torus_expansion_of_determinantal() {
        // det(diag(x1 + x3, x2 + x3, x3)) has an explicit expansion
        let a1 = mat(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let a2 = mat(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let a3 = Matrix::identity(3);
        let o = PolynomialOracle::determinantal(vec![a1, a2, a3]).unwrap();
        let p = expand(&o).unwrap();
        // (x1+x3)(x2+x3)x3 = x1x2x3 + x1x3^2 + x2x3^2 + x3^3
        let expect = [vec![1, 1, 1], vec![1, 0, 2], vec![0, 1, 2], vec![0, 0, 3]];
        assert_eq!(p.terms().len(), 4);
        for e in expect {
            let c = p.coefficient(&ExponentVector::new(e).unwrap());
            assert!((c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn enumerate_counts() {
        // |I_{n,n}| = C(2n-1, n)
        assert_eq!(ExponentVector::enumerate(2).len(), 3);
        assert_eq!(ExponentVector::enumerate(3).len(), 10);
        assert_eq!(ExponentVector::enumerate(5).len(), 126);
    }
}
