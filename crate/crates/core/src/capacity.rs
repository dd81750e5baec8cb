//! The convex functional `f(y) = log q(e^y)` on the hyperplane `Σ y_i = 0`,
//! its minimization by the ellipsoid method, and the decision rule for
//! membership of `(1, …, 1)` in the Newton polytope.
//!
//! With integer coefficients, `inf f ≥ 0` when `e` lies in the polytope and
//! `f` reaches `−1` inside a ball of computable radius otherwise, so a
//! `1/3`-minimizer over that ball decides membership.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// method resolution differs when dev-dependencies turn on num-traits/std
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::calculus::{gradient_log, polarization_mixed_derivative};
use crate::linalg::Matrix;
use crate::oracle::{Kind, PolynomialOracle};
use crate::{Error, Result};

/// Decision accuracy.
pub const DEFAULT_DELTA: f64 = 1.0 / 3.0;
/// Minimum values at or above this mean the point is in the polytope.
pub const IN_THRESHOLD: f64 = -1.0 / 3.0;
/// Minimum values at or below this mean the point is outside.
pub const NOT_THRESHOLD: f64 = -2.0 / 3.0;
/// Tolerance for the bounds in [`vdw_ratio`].
pub const VDW_TOL: f64 = 1e-6;
/// Largest `n` accepted by [`vdw_ratio`].
pub const MAX_VDW_N: usize = 12;

/// `f(y) = log q(e^y)` in orthonormal coordinates `c` of the hyperplane
/// `Σ y = 0`, with `y = H c` for the Helmert basis `H`.
#[derive(Clone, Debug)]
pub struct LogConvexObjective<'a> {
    oracle: &'a PolynomialOracle,
    basis: Matrix,
    offset: f64,
}

/// Value and gradient of the objective at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveValue {
    /// `f(y)`; `-inf` if `q(e^y)` underflows to zero.
    pub value: f64,
    /// Gradient with respect to the hyperplane coordinates.
    pub gradient: Vec<f64>,
    /// Gradient with respect to `y` (the logarithmic gradient, summing to `n`).
    pub full_gradient: Vec<f64>,
}

/// Orthonormal basis of `{y : Σ y_i = 0}` as the columns of an
/// `n × (n−1)` matrix; column `k` is `(1, …, 1, −k, 0, …) / sqrt(k (k+1))`.
pub fn helmert_basis(n: usize) -> Matrix {
    let m = n.saturating_sub(1);
    Matrix::from_fn(n, m, |i, j| {
        let k = j + 1;
        let norm = ((k * (k + 1)) as f64).sqrt();
        if i < k {
            1.0 / norm
        } else if i == k {
            -(k as f64) / norm
        } else {
            0.0
        }
    })
}

/// The objective for `q`; fails when `q(e) ≤ 0`.
pub fn objective(oracle: &PolynomialOracle) -> Result<LogConvexObjective<'_>> {
    LogConvexObjective::new(oracle, 0.0)
}

impl<'a> LogConvexObjective<'a> {
    /// The objective `f − offset`, i.e. the functional of `q · e^{-offset}`.
    pub fn new(oracle: &'a PolynomialOracle, offset: f64) -> Result<Self> {
        let qe = oracle.eval(&vec![1.0; oracle.n()])?;
        if !(qe > 0.0) {
            return Err(Error::NonPositive(qe));
        }
        Ok(LogConvexObjective { oracle, basis: helmert_basis(oracle.n()), offset })
    }

    pub fn n(&self) -> usize {
        self.oracle.n()
    }

    /// Dimension of the hyperplane.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `y = H c`.
    pub fn lift(&self, c: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| self.basis.row(i).iter().zip(c).map(|(h, v)| h * v).sum()).collect()
    }

    /// `f` at hyperplane coordinates `c`; `1 + n (n+1)` oracle calls.
    pub fn evaluate(&self, c: &[f64]) -> Result<ObjectiveValue> {
        if c.len() != self.dim() {
            return Err(Error::Dimension(format!("coordinates have length {}, expected {}", c.len(), self.dim())));
        }
        self.evaluate_full(&self.lift(c))
    }

    /// `f` at a point `y` of the full space (not necessarily on the hyperplane).
    pub fn evaluate_full(&self, y: &[f64]) -> Result<ObjectiveValue> {
        let n = self.n();
        let top = y.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        // q(e^y) = e^{n top} q(e^{y - top}) keeps the evaluation point in (0, 1]
        let x: Vec<f64> = y.iter().map(|v| (v - top).exp()).collect();
        if x.iter().any(|v| *v == 0.0) {
            let value = self.oracle.eval(&x)?;
            if value == 0.0 {
                return Ok(ObjectiveValue {
                    value: f64::NEG_INFINITY,
                    gradient: vec![0.0; self.dim()],
                    full_gradient: vec![0.0; n],
                });
            }
        }
        let g = gradient_log(self.oracle, &x)?;
        let value = g.value.ln() + n as f64 * top - self.offset;
        let gradient = (0..self.dim()).map(|j| (0..n).map(|i| self.basis[(i, j)] * g.ratios[i]).sum()).collect();
        Ok(ObjectiveValue { value, gradient, full_gradient: g.ratios })
    }
}

/// Ellipsoid `{c : (c − center)ᵀ P⁻¹ (c − center) ≤ 1}` with `P = B Bᵀ`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EllipsoidState {
    pub center: Vec<f64>,
    /// Shape matrix `P`.
    pub shape: Vec<Vec<f64>>,
    pub best_value: f64,
    pub iteration: usize,
}

/// Outcome of [`ellipsoid_minimize`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MinimizeResult {
    pub min_value: f64,
    /// Best point found, in the full coordinates `y`.
    pub argmin: Vec<f64>,
    pub iterations: usize,
    pub max_iterations: usize,
    /// Stopped because the best value reached the requested floor.
    pub stopped_early: bool,
    pub state: EllipsoidState,
}

/// `ceil(2 m² L) + ceil(2 m L) + 8` with `L = ln((2δ + 2γn) / δ)`: the
/// central-cut volume argument in dimension `m = n − 1`.
pub fn ellipsoid_iterations(n: usize, gamma: f64, delta: f64) -> usize {
    let m = n.saturating_sub(1) as f64;
    let l = ((2.0 * delta + 2.0 * gamma * n as f64) / delta).ln();
    (2.0 * m * m * l).ceil() as usize + (2.0 * m * l).ceil() as usize + 8
}

/// Central-cut ellipsoid method over the ball `‖c‖ ≤ gamma`.
///
/// Feasible centers are cut by the objective gradient, infeasible ones by
/// the ball constraint; the best feasible value is returned. `stop_below`
/// ends the run as soon as a value at or below it has been seen.
pub fn ellipsoid_minimize(
    obj: &LogConvexObjective<'_>,
    gamma: f64,
    delta: f64,
    stop_below: Option<f64>,
) -> Result<MinimizeResult> {
    if !(gamma > 0.0) || !(delta > 0.0) {
        return Err(Error::Numerical(format!("gamma = {gamma} and delta = {delta} must be positive")));
    }
    let m = obj.dim();
    let n = obj.n();
    let stop = |v: f64| stop_below.is_some_and(|s| v <= s);
    if m == 1 {
        return bisection(obj, gamma, delta, stop);
    }
    let mut best = obj.evaluate(&vec![0.0; m])?;
    let mut best_c = vec![0.0; m];
    if m == 0 {
        return Ok(MinimizeResult {
            min_value: best.value,
            argmin: obj.lift(&best_c),
            iterations: 0,
            max_iterations: 0,
            stopped_early: false,
            state: EllipsoidState { center: vec![], shape: vec![], best_value: best.value, iteration: 0 },
        });
    }
    let max_iterations = ellipsoid_iterations(n, gamma, delta);
    let mf = m as f64;
    let a = mf / (mf * mf - 1.0).sqrt();
    let b = mf / (mf + 1.0);
    let mut factor = Matrix::identity(m).scaled(gamma);
    let mut center = vec![0.0; m];
    let mut current = Some(best.clone());
    let mut iterations = 0;
    let mut stopped_early = stop(best.value);
    while iterations < max_iterations && !stopped_early {
        let norm = center.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cut: Vec<f64> = if norm > gamma {
            center.clone()
        } else {
            let value = match current.take() {
                Some(v) => v,
                None => obj.evaluate(&center)?,
            };
            if value.value < best.value {
                best = value.clone();
                best_c = center.clone();
                if stop(best.value) {
                    stopped_early = true;
                    break;
                }
            }
            value.gradient
        };
        iterations += 1;
        // v = Bᵀ g, ξ = v / ‖v‖, w = B ξ
        let v: Vec<f64> = (0..m).map(|j| (0..m).map(|i| factor[(i, j)] * cut[i]).sum()).collect();
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vn == 0.0 || !vn.is_finite() {
            // zero gradient at a feasible center: it is a minimizer
            break;
        }
        let xi: Vec<f64> = v.iter().map(|x| x / vn).collect();
        let w: Vec<f64> = (0..m).map(|i| (0..m).map(|j| factor[(i, j)] * xi[j]).sum()).collect();
        for (c, wi) in center.iter_mut().zip(&w) {
            *c -= wi / (mf + 1.0);
        }
        for i in 0..m {
            for j in 0..m {
                factor[(i, j)] = a * factor[(i, j)] + (b - a) * w[i] * xi[j];
            }
        }
        if factor.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("ellipsoid shape lost definiteness".into()));
        }
    }
    let shape = factor.matmul(&factor.transpose()).to_rows();
    Ok(MinimizeResult {
        min_value: best.value,
        argmin: obj.lift(&best_c),
        iterations,
        max_iterations,
        stopped_early,
        state: EllipsoidState { center, shape, best_value: best.value, iteration: iterations },
    })
}

/// One-dimensional case: bisection on the sign of the derivative.
fn bisection(
    obj: &LogConvexObjective<'_>,
    gamma: f64,
    delta: f64,
    stop: impl Fn(f64) -> bool,
) -> Result<MinimizeResult> {
    let n = obj.n() as f64;
    // |f'| ≤ n·‖H‖ ≤ n, so an interval of width delta / n is delta-accurate
    let max_iterations = ((2.0 * gamma * n / delta).log2().ceil().max(0.0) as usize) + 2;
    let (mut lo, mut hi) = (-gamma, gamma);
    let mut best = obj.evaluate(&[0.0])?;
    let mut best_c = 0.0;
    let mut iterations = 0;
    let mut stopped_early = stop(best.value);
    let mut mid = 0.0;
    let mut at_mid = best.clone();
    while iterations < max_iterations && !stopped_early {
        iterations += 1;
        if at_mid.gradient[0] > 0.0 {
            hi = mid;
        } else if at_mid.gradient[0] < 0.0 {
            lo = mid;
        } else {
            break;
        }
        mid = 0.5 * (lo + hi);
        at_mid = obj.evaluate(&[mid])?;
        if at_mid.value < best.value {
            best = at_mid.clone();
            best_c = mid;
            stopped_early = stop(best.value);
        }
    }
    let half = 0.5 * (hi - lo);
    Ok(MinimizeResult {
        min_value: best.value,
        argmin: obj.lift(&[best_c]),
        iterations,
        max_iterations,
        stopped_early,
        state: EllipsoidState {
            center: vec![mid],
            shape: vec![vec![half * half]],
            best_value: best.value,
            iteration: iterations,
        },
    })
}

/// Polytope membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Verdict {
    #[cfg_attr(feature = "serde", serde(rename = "IN_POLYTOPE"))]
    InPolytope,
    #[cfg_attr(feature = "serde", serde(rename = "NOT_IN_POLYTOPE"))]
    NotInPolytope,
    #[cfg_attr(feature = "serde", serde(rename = "INCONCLUSIVE"))]
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::InPolytope => "IN_POLYTOPE",
            Verdict::NotInPolytope => "NOT_IN_POLYTOPE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// Verdict for a best value found by a `1/3`-accurate minimization.
    pub fn from_value(v: f64) -> Self {
        if v >= IN_THRESHOLD {
            Verdict::InPolytope
        } else if v <= NOT_THRESHOLD {
            Verdict::NotInPolytope
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Parameters of [`decide_polytope_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DecideOptions {
    pub delta: f64,
    /// Upper bound `Δ` on the reciprocal distance from `e` to the polytope
    /// when `e` is outside; `None` uses `sqrt(n) / 2`, valid for supports of
    /// hyperbolic polynomials.
    pub distance_promise: Option<f64>,
    /// Lower bound on the nonzero coefficients; `1` for integer
    /// coefficients. The objective is shifted by its logarithm.
    pub min_coefficient: f64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { delta: DEFAULT_DELTA, distance_promise: None, min_coefficient: 1.0 }
    }
}

/// Outcome of the polytope decision.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DecisionReport {
    pub verdict: Verdict,
    pub min_value_found: f64,
    pub oracle_calls: u64,
    pub gamma: f64,
    pub iterations: usize,
    pub max_iterations: usize,
    pub delta: f64,
    /// `log q(e)` after the coefficient shift.
    pub log_q_e: f64,
    pub distance_promise: f64,
}

/// Decides `e ∈ CO(supp q)` with the default options.
pub fn decide_polytope(oracle: &PolynomialOracle) -> Result<DecisionReport> {
    decide_polytope_with(oracle, &DecideOptions::default())
}

/// Decides `e ∈ CO(supp q)`: minimizes `f` over the ball of radius
/// `γ = (log q(e) + 1) Δ` in the hyperplane to accuracy `δ` and compares the
/// best value with `−1/3` and `−2/3`. A zero polynomial is outside.
pub fn decide_polytope_with(oracle: &PolynomialOracle, options: &DecideOptions) -> Result<DecisionReport> {
    let n = oracle.n();
    if !(options.min_coefficient > 0.0) {
        return Err(Error::Numerical(format!("coefficient bound {} must be positive", options.min_coefficient)));
    }
    let start = oracle.call_count();
    let delta_promise = options.distance_promise.unwrap_or(0.5 * (n as f64).sqrt());
    if !(delta_promise > 0.0) {
        return Err(Error::Numerical(format!("distance promise {delta_promise} must be positive")));
    }
    let qe = oracle.eval(&vec![1.0; n])?;
    if qe <= 0.0 {
        return Ok(DecisionReport {
            verdict: Verdict::NotInPolytope,
            min_value_found: f64::NEG_INFINITY,
            oracle_calls: oracle.call_count() - start,
            gamma: 0.0,
            iterations: 0,
            max_iterations: 0,
            delta: options.delta,
            log_q_e: f64::NEG_INFINITY,
            distance_promise: delta_promise,
        });
    }
    let offset = options.min_coefficient.ln();
    let log_q_e = qe.ln() - offset;
    let gamma = (log_q_e.max(0.0) + 1.0) * delta_promise;
    let obj = LogConvexObjective::new(oracle, offset)?;
    let result = ellipsoid_minimize(&obj, gamma, options.delta, Some(NOT_THRESHOLD))?;
    Ok(DecisionReport {
        verdict: Verdict::from_value(result.min_value),
        min_value_found: result.min_value,
        oracle_calls: oracle.call_count() - start,
        gamma,
        iterations: result.iterations,
        max_iterations: result.max_iterations,
        delta: options.delta,
        log_q_e,
        distance_promise: delta_promise,
    })
}

/// Estimate of `Cap(q) = inf_{α > 0, Π α = 1} q(α)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CapacityEstimate {
    pub capacity: f64,
    pub log_capacity: f64,
    /// Minimizing `α`, normalized so that `Π α = 1`.
    pub argmin: Vec<f64>,
    /// Radius of the last ball searched.
    pub radius: f64,
    pub iterations: usize,
    pub oracle_calls: u64,
}

/// `exp(min f)` to absolute accuracy `accuracy` in `log`. The search ball is
/// doubled until the minimum stops moving; a minimum that keeps falling
/// means `Cap = 0` and is reported as [`Error::Unbounded`].
pub fn capacity_estimate(oracle: &PolynomialOracle, accuracy: f64) -> Result<CapacityEstimate> {
    if !(accuracy > 0.0) {
        return Err(Error::Numerical(format!("accuracy {accuracy} must be positive")));
    }
    let n = oracle.n();
    let start = oracle.call_count();
    let obj = objective(oracle)?;
    let qe = oracle.eval(&vec![1.0; n])?;
    let mut radius = (qe.ln().abs() + 1.0) * 0.5 * (n as f64).sqrt();
    let mut run = ellipsoid_minimize(&obj, radius, accuracy, None)?;
    let mut iterations = run.iterations;
    let settle = 10.0 * accuracy + 1e-9;
    let mut settled = false;
    for _ in 0..6 {
        let on_boundary = run.argmin.iter().map(|v| v * v).sum::<f64>().sqrt() >= 0.5 * radius;
        if !on_boundary {
            settled = true;
            break;
        }
        let wider = ellipsoid_minimize(&obj, 2.0 * radius, accuracy, None)?;
        iterations += wider.iterations;
        let dropped = run.min_value - wider.min_value;
        radius *= 2.0;
        run = wider;
        if dropped <= settle {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(Error::Unbounded(run.min_value));
    }
    if !run.min_value.is_finite() {
        return Err(Error::Unbounded(run.min_value));
    }
    Ok(CapacityEstimate {
        capacity: run.min_value.exp(),
        log_capacity: run.min_value,
        argmin: run.argmin.iter().map(|v| v.exp()).collect(),
        radius,
        iterations,
        oracle_calls: oracle.call_count() - start,
    })
}

/// The ratio `∂ⁿ q / Cap(q)` and its bounds `n!/nⁿ ≤ ratio ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VdwReport {
    pub ratio: f64,
    pub mixed_derivative: f64,
    pub capacity: f64,
    /// `n! / nⁿ`.
    pub lower_bound: f64,
    pub lower_bound_holds: bool,
    pub upper_bound_holds: bool,
}

/// `n! / nⁿ`.
pub fn vdw_bound(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64 / n as f64)
}

/// Compares the mixed derivative with the capacity for product and
/// determinantal instances.
pub fn vdw_ratio(oracle: &PolynomialOracle) -> Result<VdwReport> {
    vdw_ratio_with_accuracy(oracle, 1e-9)
}

/// [`vdw_ratio`] with an explicit capacity accuracy.
pub fn vdw_ratio_with_accuracy(oracle: &PolynomialOracle, accuracy: f64) -> Result<VdwReport> {
    let n = oracle.n();
    if !matches!(oracle.kind(), Kind::Product | Kind::Determinantal) {
        return Err(Error::Unsupported(format!(
            "ratio bounds need a product or determinantal instance, got {}",
            oracle.kind().as_str()
        )));
    }
    if n > MAX_VDW_N {
        return Err(Error::Budget { what: "ratio probe", n, limit: MAX_VDW_N });
    }
    let mixed = polarization_mixed_derivative(oracle)?;
    let cap = capacity_estimate(oracle, accuracy)?.capacity;
    if cap < 1e-12 {
        return Err(Error::NonPositive(cap));
    }
    let ratio = mixed / cap;
    let lower = vdw_bound(n);
    Ok(VdwReport {
        ratio,
        mixed_derivative: mixed,
        capacity: cap,
        lower_bound: lower,
        lower_bound_holds: ratio >= lower - VDW_TOL,
        upper_bound_holds: ratio <= 1.0 + VDW_TOL,
    })
}

/// `(q(x) / Π x_i) Π_i (x_i ∂_i q(x) / q(x))`, an upper bound on `Cap(q)` at
/// every positive `x` when `q` is hyperbolic with the orthant in its cone.
pub fn capacity_upper_bound_at(oracle: &PolynomialOracle, x: &[f64]) -> Result<f64> {
    let g = gradient_log(oracle, x)?;
    let log: f64 = g.value.ln() - x.iter().map(|v| v.ln()).sum::<f64>() + g.ratios.iter().map(|r| r.ln()).sum::<f64>();
    Ok(log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{ExplicitPolynomial, ExponentVector};

    fn monomial(exp: &[u32]) -> PolynomialOracle {
        let t = [(ExponentVector::new(exp.to_vec()).unwrap(), 1.0)];
        PolynomialOracle::explicit(ExplicitPolynomial::new(exp.len(), t).unwrap())
    }

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn helmert_is_orthonormal() {
        for n in 2..7 {
            let h = helmert_basis(n);
            let g = h.transpose().matmul(&h);
            for i in 0..n - 1 {
                let colsum: f64 = (0..n).map(|r| h[(r, i)]).sum();
                assert!(colsum.abs() < 1e-14);
                for j in 0..n - 1 {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((g[(i, j)] - e).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn objective_examples() {
        let prod = PolynomialOracle::product(Matrix::identity(3)).unwrap();
        let obj = objective(&prod).unwrap();
        let v = obj.evaluate(&[0.7, -1.3]).unwrap();
        assert!(v.value.abs() < 1e-12);
        assert!(v.gradient.iter().all(|g| g.abs() < 1e-10));
        let sq = monomial(&[2, 0]);
        let obj = objective(&sq).unwrap();
        let y = obj.lift(&[0.4]);
        assert!((obj.evaluate(&[0.4]).unwrap().value - 2.0 * y[0]).abs() < 1e-12);
        let ps = PolynomialOracle::powersum(2);
        let obj = objective(&ps).unwrap();
        assert!((obj.evaluate(&[0.0]).unwrap().value - 2f64.ln()).abs() < 1e-14);
        let y = obj.lift(&[0.3]);
        let expect = ((2.0 * y[0]).exp() + (-2.0 * y[0]).exp()).ln();
        assert!((obj.evaluate(&[0.3]).unwrap().value - expect).abs() < 1e-12);
        let zero = PolynomialOracle::product(Matrix::zeros(2, 2)).unwrap();
        assert!(objective(&zero).is_err());
    }

    #[test]
    fn objective_call_cost() {
        let ps = PolynomialOracle::powersum(4);
        let obj = objective(&ps).unwrap();
        ps.reset_calls();
        obj.evaluate(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(ps.call_count(), 1 + 4 * 5);
    }

    #[test]
    fn minimize_examples() {
        let prod = PolynomialOracle::product(Matrix::identity(3)).unwrap();
        let r = ellipsoid_minimize(&objective(&prod).unwrap(), 5.0, 1.0 / 3.0, None).unwrap();
        assert!(r.min_value.abs() <= 1.0 / 3.0);
        let ps = PolynomialOracle::powersum(2);
        let r = ellipsoid_minimize(&objective(&ps).unwrap(), 5.0, 1.0 / 3.0, None).unwrap();
        assert!((r.min_value - 2f64.ln()).abs() <= 1.0 / 3.0);
        let cube = monomial(&[3, 0, 0]);
        let r = ellipsoid_minimize(&objective(&cube).unwrap(), 5.0, 1.0 / 3.0, None).unwrap();
        assert!(r.min_value <= -1.0, "{}", r.min_value);
        let ps3 = PolynomialOracle::powersum(3);
        let r = ellipsoid_minimize(&objective(&ps3).unwrap(), 5.0, 1e-6, None).unwrap();
        assert!((r.min_value - 3f64.ln()).abs() <= 1e-6);
        assert!(r.min_value >= 3f64.ln() - 1e-12);
    }

    #[test]
    fn decide_examples() {
        let perm = mat(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let o = PolynomialOracle::product(perm).unwrap();
        let r = decide_polytope(&o).unwrap();
        assert_eq!(r.verdict, Verdict::InPolytope);
        assert_eq!(r.oracle_calls, o.call_count());
        let cols = mat(&[&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0]]);
        let r = decide_polytope(&PolynomialOracle::product(cols).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::NotInPolytope);
        let r = decide_polytope(&PolynomialOracle::powersum(3)).unwrap();
        assert_eq!(r.verdict, Verdict::InPolytope);
        let r = decide_polytope(&PolynomialOracle::product(Matrix::zeros(3, 3)).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::NotInPolytope);
    }

    #[test]
    fn decide_two_variables() {
        let r = decide_polytope(&monomial(&[2, 0])).unwrap();
        assert_eq!(r.verdict, Verdict::NotInPolytope);
        let r = decide_polytope(&PolynomialOracle::powersum(2)).unwrap();
        assert_eq!(r.verdict, Verdict::InPolytope);
    }

    #[test]
    fn capacity_examples() {
        for n in 2..6 {
            let c = capacity_estimate(&PolynomialOracle::powersum(n), 1e-8).unwrap();
            assert!((c.capacity - n as f64).abs() <= 1e-3 * n as f64, "{c:?}");
        }
        let c = capacity_estimate(&PolynomialOracle::product(Matrix::identity(4)).unwrap(), 1e-8).unwrap();
        assert!((c.capacity - 1.0).abs() <= 1e-6);
        let ds = mat(&[&[0.5, 0.25, 0.25], &[0.25, 0.5, 0.25], &[0.25, 0.25, 0.5]]);
        let c = capacity_estimate(&PolynomialOracle::product(ds).unwrap(), 1e-9).unwrap();
        assert!((c.capacity - 1.0).abs() <= 1e-6, "{c:?}");
        let cube = monomial(&[3, 0, 0]);
        assert!(matches!(capacity_estimate(&cube, 1e-6), Err(Error::Unbounded(_))));
    }

    #[test]
    fn capacity_off_center() {
        // q = x1² x2 + x1 x2² + a little x1³ has its minimizer away from e
        let terms = [(vec![2, 1, 0], 1.0), (vec![0, 1, 2], 4.0), (vec![1, 1, 1], 0.5)]
            .map(|(e, c)| (ExponentVector::new(e.to_vec()).unwrap(), c));
        let o = PolynomialOracle::explicit(ExplicitPolynomial::new(3, terms).unwrap());
        let c = capacity_estimate(&o, 1e-9).unwrap();
        // q(α) ≥ Cap at the reported minimizer and nearby
        let at = o.eval(&c.argmin).unwrap();
        assert!((at - c.capacity).abs() < 1e-6);
        for s in [-0.01, 0.01] {
            let a = [c.argmin[0] * (1.0 + s), c.argmin[1], c.argmin[2] / (1.0 + s)];
            assert!(o.eval(&a).unwrap() >= c.capacity - 1e-9);
        }
    }

    #[test]
    fn vdw_examples() {
        for n in 2..6 {
            let j = Matrix::from_fn(n, n, |_, _| 1.0 / n as f64);
            let r = vdw_ratio(&PolynomialOracle::product(j).unwrap()).unwrap();
            assert!((r.ratio - vdw_bound(n)).abs() < 1e-6, "{r:?}");
            assert!(r.lower_bound_holds && r.upper_bound_holds);
        }
        let r = vdw_ratio(&PolynomialOracle::product(Matrix::identity(4)).unwrap()).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-9);
        assert!(vdw_ratio(&PolynomialOracle::powersum(3)).is_err());
    }

    #[test]
    fn capacity_upper_bound_examples() {
        let ps = PolynomialOracle::powersum(2);
        // the bound fails for the power sum at (2, 1): 1.6 < Cap = 2
        assert!((capacity_upper_bound_at(&ps, &[2.0, 1.0]).unwrap() - 1.6).abs() < 1e-12);
        let ds = mat(&[&[0.5, 0.5], &[0.25, 0.75]]);
        let o = PolynomialOracle::product(ds).unwrap();
        let cap = capacity_estimate(&o, 1e-10).unwrap().capacity;
        for x in [[1.0, 1.0], [0.3, 2.0], [5.0, 0.1]] {
            assert!(capacity_upper_bound_at(&o, &x).unwrap() >= cap * (1.0 - 1e-9));
        }
    }
}
