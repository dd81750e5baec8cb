//! Differentiation on top of evaluation oracles.
//!
//! Restrictions `t ↦ p(x + t v)` are recovered exactly (up to conditioning)
//! by interpolation at `n + 1` Chebyshev nodes, which gives partial
//! derivatives without finite-difference error. The full mixed derivative
//! `∂ⁿ/∂x₁…∂xₙ p` comes from the polarization identity, and a Monte-Carlo
//! estimator over the complex unit torus is available as an unbiased
//! alternative. Ryser's permanent and an inclusion–exclusion mixed
//! discriminant serve as independent baselines.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// method resolution differs when dev-dependencies turn on num-traits/std
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::linalg::Matrix;
use crate::oracle::PolynomialOracle;
use crate::par::map_range;
use crate::seed::stream_rng;
use crate::{Error, Result};

/// Largest `n` accepted by the polarization sums (`2^(n-1)` or `2^n` calls).
pub const MAX_POLARIZATION_N: usize = 26;
/// Largest matrix order accepted by [`ryser_permanent`].
pub const MAX_PERMANENT_N: usize = 20;
/// Largest order accepted by [`brute_mixed_discriminant`].
pub const MAX_MIXED_DISCRIMINANT_N: usize = 8;
/// Relative agreement required between the two mixed-discriminant paths.
pub const MIXED_DISCRIMINANT_AGREEMENT: f64 = 1e-6;

const SWEEP_CHUNK: usize = 1 << 10;
const SAMPLE_CHUNK: usize = 1 << 12;

/// Coefficients `c₀ … cₙ` of `t ↦ p(base + t·direction)`, ascending.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UnivariateRestriction {
    pub coefficients: Vec<f64>,
}

impl UnivariateRestriction {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coefficients.last().copied().unwrap_or(0.0)
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

fn add_scaled(base: &[f64], t: f64, dir: &[f64]) -> Vec<f64> {
    base.iter().zip(dir).map(|(&b, &d)| b + t * d).collect()
}

/// The `n + 1` Chebyshev points on `[-1, 1]` used by `restrict_scaled`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..=n).map(|k| ((2 * k + 1) as f64 * PI / (2 * (n + 1)) as f64).cos()).collect()
}

/// `restrict` with the default node half-width `max(1, |base|∞)`.
pub fn restrict(oracle: &PolynomialOracle, base: &[f64], direction: &[f64]) -> Result<UnivariateRestriction> {
    let scale = base.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    restrict_scaled(oracle, base, direction, scale)
}

/// Coefficients of `t ↦ p(base + t·direction)` from `n + 1` oracle calls at
/// Chebyshev nodes on `[-scale, scale]`, via Newton divided differences.
pub fn restrict_scaled(
    oracle: &PolynomialOracle,
    base: &[f64],
    direction: &[f64],
    scale: f64,
) -> Result<UnivariateRestriction> {
    let n = oracle.n();
    if base.len() != n || direction.len() != n {
        return Err(Error::Dimension(format!(
            "restriction needs vectors of length {n}, got {} and {}",
            base.len(),
            direction.len()
        )));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Numerical(format!("invalid node scale {scale}")));
    }
    let nodes = chebyshev_nodes(n);
    let mut dd = Vec::with_capacity(n + 1);
    for &u in &nodes {
        dd.push(oracle.eval(&add_scaled(base, scale * u, direction))?);
    }
    for j in 1..=n {
        for i in (j..=n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    // Newton form to monomial form in u = t / scale
    let mut poly = vec![dd[n]];
    for i in (0..n).rev() {
        let mut next = vec![0.0; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * nodes[i];
        }
        next[0] += dd[i];
        poly = next;
    }
    let mut factor = 1.0;
    for c in poly.iter_mut() {
        *c /= factor;
        factor *= scale;
    }
    Ok(UnivariateRestriction { coefficients: poly })
}

/// `∂p/∂x_i` at `point` (`i` is zero-based); `n + 1` oracle calls.
///
/// Nodes are spread over `x_i ± |x_i|`, which keeps every sampled term of a
/// nonnegative-coefficient polynomial bounded by its value near the point.
pub fn partial_derivative(oracle: &PolynomialOracle, point: &[f64], i: usize) -> Result<f64> {
    let n = oracle.n();
    if i >= n {
        return Err(Error::Dimension(format!("coordinate {i} out of range for n = {n}")));
    }
    if point.len() != n {
        return Err(Error::Dimension(format!("point has length {}, expected {n}", point.len())));
    }
    let mut dir = vec![0.0; n];
    dir[i] = 1.0;
    let scale = if point[i] != 0.0 { point[i].abs() } else { point.iter().fold(1.0_f64, |m, v| m.max(v.abs())) };
    Ok(restrict_scaled(oracle, point, &dir, scale)?.coefficients[1])
}

/// The full gradient; `n (n + 1)` oracle calls.
pub fn gradient(oracle: &PolynomialOracle, point: &[f64]) -> Result<Vec<f64>> {
    map_range(oracle.n(), |i| partial_derivative(oracle, point, i)).into_iter().collect()
}

/// Value and logarithmic gradient `x_i ∂_i q(x) / q(x)` at a positive point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LogGradient {
    pub value: f64,
    pub ratios: Vec<f64>,
}

/// Gradient of `y ↦ log q(e^y)` at `y = log(point)`; `1 + n (n + 1)` calls.
/// The ratios sum to `n` by Euler's identity.
pub fn gradient_log(oracle: &PolynomialOracle, point: &[f64]) -> Result<LogGradient> {
    if point.len() != oracle.n() {
        return Err(Error::Dimension(format!("point has length {}, expected {}", point.len(), oracle.n())));
    }
    if let Some(bad) = point.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Numerical(format!("log-gradient needs a positive point, found {bad}")));
    }
    let value = oracle.eval(point)?;
    if !(value > 0.0) {
        return Err(Error::NonPositive(value));
    }
    let grad = gradient(oracle, point)?;
    let ratios = grad.iter().zip(point).map(|(&g, &x)| x * g / value).collect();
    Ok(LogGradient { value, ratios })
}

fn signed_sweep<F>(terms: usize, term: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64> + Sync + Send,
{
    let chunks = terms.div_ceil(SWEEP_CHUNK);
    let sums = map_range(chunks, |c| {
        let lo = c * SWEEP_CHUNK;
        let hi = (lo + SWEEP_CHUNK).min(terms);
        let mut acc = 0.0;
        for k in lo..hi {
            acc += term(k)?;
        }
        Ok(acc)
    });
    let mut total = 0.0;
    for s in sums {
        total += s?;
    }
    Ok(total)
}

/// `∂ⁿ/∂x₁…∂xₙ p` by polarization with the first sign fixed:
/// `2^(1-n) Σ_{b ∈ {±1}^(n-1)} p(1, b₂, …, bₙ) Π bᵢ`. Exactly `2^(n-1)` calls.
pub fn polarization_mixed_derivative(oracle: &PolynomialOracle) -> Result<f64> {
    let n = oracle.n();
    if n > MAX_POLARIZATION_N {
        return Err(Error::Budget { what: "polarization", n, limit: MAX_POLARIZATION_N });
    }
    let terms = 1usize << (n - 1);
    let total = signed_sweep(terms, |mask| {
        let mut point = vec![1.0; n];
        for (k, slot) in point.iter_mut().enumerate().skip(1) {
            if mask >> (k - 1) & 1 == 1 {
                *slot = -1.0;
            }
        }
        let v = oracle.eval(&point)?;
        Ok(if mask.count_ones() % 2 == 1 { -v } else { v })
    })?;
    Ok(total / terms as f64)
}

/// The mixed form `M_p(x₁, …, xₙ) = 2^(-n) Σ_{b ∈ {±1}^n} p(Σ bᵢ xᵢ) Π bᵢ`;
/// exactly `2^n` calls.
pub fn mixed_form(oracle: &PolynomialOracle, tuple: &[Vec<f64>]) -> Result<f64> {
    let n = oracle.n();
    if tuple.len() != n {
        return Err(Error::Dimension(format!("tuple has {} vectors, expected {n}", tuple.len())));
    }
    if let Some(v) = tuple.iter().find(|v| v.len() != n) {
        return Err(Error::Dimension(format!("tuple vector of length {}, expected {n}", v.len())));
    }
    if n > MAX_POLARIZATION_N {
        return Err(Error::Budget { what: "mixed form", n, limit: MAX_POLARIZATION_N });
    }
    let terms = 1usize << n;
    let total = signed_sweep(terms, |mask| {
        let mut point = vec![0.0; n];
        for (k, x) in tuple.iter().enumerate() {
            let b = if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
            for (p, &v) in point.iter_mut().zip(x) {
                *p += b * v;
            }
        }
        let v = oracle.eval(&point)?;
        Ok(if mask.count_ones() % 2 == 1 { -v } else { v })
    })?;
    Ok(total / terms as f64)
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Unbiased estimate of `∂ⁿ/∂x₁…∂xₙ p` as the mean of `p(z) Π conj(zᵢ)` over
/// independent `zᵢ` uniform on the unit circle (`E z = 0`, `E|z|² = 1`).
pub fn random_complex_mixed_derivative(
    oracle: &PolynomialOracle,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let n = oracle.n();
    if samples == 0 {
        return Err(Error::Dimension("need at least one sample".into()));
    }
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let partial = map_range(chunks, |c| -> Result<(f64, f64)> {
        let mut rng = stream_rng(seed, c as u64);
        let count = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for _ in 0..count {
            let mut conj_prod = Complex64::new(1.0, 0.0);
            for zi in z.iter_mut() {
                let theta: f64 = rng.random::<f64>() * 2.0 * PI;
                *zi = Complex64::from_polar(1.0, theta);
                conj_prod *= zi.conj();
            }
            let v = (oracle.eval_complex(&z)? * conj_prod).re;
            sum += v;
            sumsq += v * v;
        }
        Ok((sum, sumsq))
    });
    let (mut sum, mut sumsq) = (0.0, 0.0);
    for p in partial {
        let (s, q) = p?;
        sum += s;
        sumsq += q;
    }
    let count = samples as f64;
    let mean = sum / count;
    let var = if samples > 1 { ((sumsq - count * mean * mean) / (count - 1.0)).max(0.0) } else { 0.0 };
    Ok(MonteCarloEstimate { mean, std_error: (var / count).sqrt(), samples })
}

/// Permanent by Ryser's inclusion–exclusion over column subsets, visited in
/// Gray-code order so each step updates the row sums in `O(n)`.
pub fn ryser_permanent(matrix: &Matrix) -> Result<f64> {
    if !matrix.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", matrix.rows(), matrix.cols())));
    }
    let n = matrix.rows();
    if n > MAX_PERMANENT_N {
        return Err(Error::Budget { what: "permanent", n, limit: MAX_PERMANENT_N });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut row_sums = vec![0.0; n];
    let mut total = 0.0;
    let mut gray = 0usize;
    for k in 1..(1usize << n) {
        let next = k ^ (k >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let sign = if next >> flipped & 1 == 1 { 1.0 } else { -1.0 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += sign * matrix[(i, flipped)];
        }
        gray = next;
        let prod: f64 = row_sums.iter().product();
        if (n - gray.count_ones() as usize) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Mixed discriminant computed along two independent evaluation paths.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MixedDiscriminant {
    /// Polarization over sign vectors `b ∈ {±1}^n`.
    pub value: f64,
    /// Inclusion–exclusion over subsets: `Σ_S (-1)^(n-|S|) det(Σ_{i∈S} Aᵢ)`.
    pub inclusion_exclusion: f64,
}

/// `D(A₁, …, Aₙ) = ∂ⁿ/∂α₁…∂αₙ det(Σ αᵢ Aᵢ)`, computed by polarization and
/// cross-checked against the forward-difference grid `{0,1}^n`.
pub fn brute_mixed_discriminant(matrices: &[Matrix]) -> Result<MixedDiscriminant> {
    let n = matrices.len();
    if n == 0 {
        return Err(Error::Dimension("empty matrix tuple".into()));
    }
    if n > MAX_MIXED_DISCRIMINANT_N {
        return Err(Error::Budget { what: "mixed discriminant", n, limit: MAX_MIXED_DISCRIMINANT_N });
    }
    if let Some(a) = matrices.iter().find(|a| a.rows() != n || a.cols() != n) {
        return Err(Error::Dimension(format!("{}x{} matrix in a tuple of {n}", a.rows(), a.cols())));
    }
    let combo = |sign_of: &dyn Fn(usize) -> f64| {
        let mut m = Matrix::zeros(n, n);
        for (i, a) in matrices.iter().enumerate() {
            let s = sign_of(i);
            if s != 0.0 {
                m.add_scaled(s, a);
            }
        }
        m.determinant()
    };
    let count = 1usize << n;
    let mut polar = 0.0;
    let mut grid = 0.0;
    let mut magnitude = 0.0_f64;
    for mask in 0..count {
        let odd = mask.count_ones() % 2 == 1;
        let d = combo(&|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 });
        polar += if odd { -d } else { d };
        let g = combo(&|i| if mask >> i & 1 == 1 { 1.0 } else { 0.0 });
        let missing = n - mask.count_ones() as usize;
        grid += if missing % 2 == 1 { -g } else { g };
        magnitude = magnitude.max(d.abs() / count as f64).max(g.abs());
    }
    let value = polar / count as f64;
    // roundoff of a determinant of an entrywise-bounded combination
    let entries = matrices.iter().fold(0.0_f64, |m, a| m.max(a.max_modulus()));
    let floor = (1e-10 * magnitude).max(64.0 * f64::EPSILON * (n as f64 * entries).powi(n as i32));
    let gap = (value - grid).abs();
    if gap > MIXED_DISCRIMINANT_AGREEMENT * value.abs().max(grid.abs()) && gap > floor {
        return Err(Error::Numerical(format!("mixed discriminant paths disagree: {value:e} vs {grid:e}")));
    }
    Ok(MixedDiscriminant { value, inclusion_exclusion: grid })
}
