//! Hyperbolic Sinkhorn scaling.
//!
//! The map `α_i ← Q(α) / ∂_i Q(α)` generalizes alternating row and column
//! normalization of a matrix: for `Q(x) = Π_i (A x)_i` one step is exactly
//! one round of classical Sinkhorn scaling of `A diag(α)`. It is scale
//! invariant, so iterates are renormalized to `Π α_i = 1`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// method resolution differs when dev-dependencies turn on num-traits/std
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::gradient_log;
use crate::linalg::Matrix;
use crate::oracle::PolynomialOracle;
use crate::{Error, Result};

/// Default constant `c` in the iteration count `c · n · max(1, ln q(e))`.
pub const DEFAULT_SINKHORN_C: f64 = 8.0;
/// Logarithmic-gradient entries at or below this count as identically zero.
pub const ZERO_DERIVATIVE_TOL: f64 = 1e-12;

/// A point of the scaling iteration together with its logarithmic gradient.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScalingState {
    /// Strictly positive, with `Π α_i = 1` after the first step.
    pub alpha: Vec<f64>,
    /// `Q(α)`.
    pub value: f64,
    /// `Σ_i (α_i ∂_i Q(α) / Q(α) − 1)²`.
    pub defect: f64,
    pub iteration: usize,
    /// `α_i ∂_i Q(α) / Q(α)`.
    pub ratios: Vec<f64>,
}

impl ScalingState {
    /// Evaluates the state at `alpha`; `1 + n (n+1)` oracle calls.
    pub fn at(oracle: &PolynomialOracle, alpha: &[f64], iteration: usize) -> Result<Self> {
        let g = gradient_log(oracle, alpha)?;
        let defect = g.ratios.iter().map(|r| (r - 1.0) * (r - 1.0)).sum();
        Ok(ScalingState { alpha: alpha.to_vec(), value: g.value, defect, iteration, ratios: g.ratios })
    }

    /// The first coordinate whose derivative vanishes, if any.
    pub fn zero_direction(&self) -> Option<usize> {
        self.ratios.iter().position(|r| !(*r > ZERO_DERIVATIVE_TOL))
    }
}

/// One scaling step `α'_i = Q(α) / ∂_i Q(α)`, normalized to `Π α'_i = 1`,
/// evaluated at the new point; `1 + n (n+1)` oracle calls.
pub fn hs_step(oracle: &PolynomialOracle, state: &ScalingState) -> Result<ScalingState> {
    if let Some(i) = state.zero_direction() {
        return Err(Error::ZeroDirection(i));
    }
    // Q / ∂_i Q = α_i / r_i
    let logs: Vec<f64> = state.alpha.iter().zip(&state.ratios).map(|(a, r)| a.ln() - r.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    let alpha: Vec<f64> = logs.iter().map(|l| (l - mean).exp()).collect();
    ScalingState::at(oracle, &alpha, state.iteration + 1)
}

/// `Σ_i (α_i ∂_i Q(α) / Q(α) − 1)²`.
pub fn ds_defect(oracle: &PolynomialOracle, alpha: &[f64]) -> Result<f64> {
    Ok(ScalingState::at(oracle, alpha, 0)?.defect)
}

/// Sign of the mixed form decided by scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum SinkhornVerdict {
    #[cfg_attr(feature = "serde", serde(rename = "POSITIVE"))]
    Positive,
    #[cfg_attr(feature = "serde", serde(rename = "NEGATIVE"))]
    Negative,
}

impl SinkhornVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SinkhornVerdict::Positive => "POSITIVE",
            SinkhornVerdict::Negative => "NEGATIVE",
        }
    }
}

/// One point of the defect trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub defect: f64,
    pub value: f64,
}

/// Parameters of [`sinkhorn_decide_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SinkhornOptions {
    pub c: f64,
    /// Overrides the iteration count derived from `c`.
    pub max_iters: Option<usize>,
}

impl Default for SinkhornOptions {
    fn default() -> Self {
        SinkhornOptions { c: DEFAULT_SINKHORN_C, max_iters: None }
    }
}

/// Outcome of [`sinkhorn_decide`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SinkhornReport {
    pub verdict: SinkhornVerdict,
    /// Steps taken.
    pub iterations: usize,
    pub max_iterations: usize,
    pub c: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Coordinate whose derivative vanishes identically, for a negative
    /// verdict reached that way.
    pub certificate: Option<usize>,
    /// The guarantee only covers product and determinantal instances.
    pub heuristic: bool,
    pub final_alpha: Vec<f64>,
}

/// `ceil(c · n · max(1, ln q(e)))`.
pub fn sinkhorn_iterations(n: usize, q_e: f64, c: f64) -> usize {
    (c * n as f64 * q_e.ln().max(1.0)).ceil() as usize
}

/// Decision with the default constant.
pub fn sinkhorn_decide(oracle: &PolynomialOracle) -> Result<SinkhornReport> {
    sinkhorn_decide_with(oracle, &SinkhornOptions::default())
}

/// Runs scaling from `α = e` and answers POSITIVE as soon as the defect is
/// at most `1/n`, NEGATIVE after `K` steps without that.
pub fn sinkhorn_decide_with(oracle: &PolynomialOracle, options: &SinkhornOptions) -> Result<SinkhornReport> {
    let n = oracle.n();
    if !(options.c > 0.0) {
        return Err(Error::Numerical(format!("constant {} must be positive", options.c)));
    }
    let heuristic = !oracle.kind().is_p_hyperbolic_family();
    let mut state = match ScalingState::at(oracle, &vec![1.0; n], 0) {
        Ok(s) => s,
        // a polynomial vanishing at e has no positive coefficient at all
        Err(Error::NonPositive(v)) => {
            return Ok(SinkhornReport {
                verdict: SinkhornVerdict::Negative,
                iterations: 0,
                max_iterations: 0,
                c: options.c,
                trajectory: vec![TrajectoryPoint { iteration: 0, defect: f64::INFINITY, value: v }],
                certificate: None,
                heuristic,
                final_alpha: vec![1.0; n],
            })
        }
        Err(e) => return Err(e),
    };
    let max_iterations = options.max_iters.unwrap_or_else(|| sinkhorn_iterations(n, state.value, options.c));
    let threshold = 1.0 / n as f64;
    let mut trajectory = vec![TrajectoryPoint { iteration: 0, defect: state.defect, value: state.value }];
    let finish = |verdict, state: &ScalingState, trajectory, certificate| SinkhornReport {
        verdict,
        iterations: state.iteration,
        max_iterations,
        c: options.c,
        trajectory,
        certificate,
        heuristic,
        final_alpha: state.alpha.clone(),
    };
    if let Some(i) = state.zero_direction() {
        return Ok(finish(SinkhornVerdict::Negative, &state, trajectory, Some(i)));
    }
    loop {
        if state.defect <= threshold {
            return Ok(finish(SinkhornVerdict::Positive, &state, trajectory, None));
        }
        if state.iteration >= max_iterations {
            return Ok(finish(SinkhornVerdict::Negative, &state, trajectory, None));
        }
        let next = match hs_step(oracle, &state) {
            Ok(s) => s,
            Err(Error::ZeroDirection(i)) => return Ok(finish(SinkhornVerdict::Negative, &state, trajectory, Some(i))),
            Err(Error::NonPositive(_)) => return Ok(finish(SinkhornVerdict::Negative, &state, trajectory, None)),
            Err(e) => return Err(e),
        };
        state = next;
        trajectory.push(TrajectoryPoint { iteration: state.iteration, defect: state.defect, value: state.value });
    }
}

fn normalize_rows(m: &mut Matrix) -> Result<()> {
    for i in 0..m.rows() {
        let s: f64 = m.row(i).iter().sum();
        if !(s > 0.0) {
            return Err(Error::Numerical(format!("row {i} vanishes")));
        }
        for j in 0..m.cols() {
            m[(i, j)] /= s;
        }
    }
    Ok(())
}

fn normalize_cols(m: &mut Matrix) -> Result<()> {
    for j in 0..m.cols() {
        let s: f64 = (0..m.rows()).map(|i| m[(i, j)]).sum();
        if !(s > 0.0) {
            return Err(Error::Numerical(format!("column {j} vanishes")));
        }
        for i in 0..m.rows() {
            m[(i, j)] /= s;
        }
    }
    Ok(())
}

/// Row normalization `R(A)`.
pub fn row_normalized(matrix: &Matrix) -> Result<Matrix> {
    let mut m = matrix.clone();
    normalize_rows(&mut m)?;
    Ok(m)
}

/// Classical Sinkhorn scaling: `iters` rounds of row then column
/// normalization.
pub fn matrix_sinkhorn_reference(matrix: &Matrix, iters: usize) -> Result<Matrix> {
    if let Some(v) = matrix.as_slice().iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::Numerical(format!("entry {v} is not a nonnegative number")));
    }
    let mut m = matrix.clone();
    for _ in 0..iters {
        normalize_rows(&mut m)?;
        normalize_cols(&mut m)?;
    }
    Ok(m)
}
