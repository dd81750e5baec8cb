//! Oracle-call benchmark on random product instances: the naive
//! polarization sum against the ellipsoid decision and Sinkhorn scaling.

use hyperpoly_core::calculus::polarization_mixed_derivative;
use hyperpoly_core::capacity::{decide_polytope_with, DecideOptions};
use hyperpoly_core::scaling::{sinkhorn_decide_with, SinkhornOptions};
use hyperpoly_core::seed::stream_rng;
use hyperpoly_core::PolynomialOracle;
use serde::Serialize;

use crate::random::mixed_binary_matrix;

/// `n⁴ (ln n + ln(1 + ln q(e)))`, with `ln q(e)` clamped at zero.
pub fn complexity_scale(n: usize, q_e: f64) -> f64 {
    let n = n as f64;
    let log_q = if q_e > 0.0 { q_e.ln().max(0.0) } else { 0.0 };
    n.powi(4) * (n.ln() + (1.0 + log_q).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub trials: usize,
    pub polarization_calls: u64,
    pub polarization_expected: u64,
    pub ellipsoid_calls_mean: f64,
    pub ellipsoid_calls_max: u64,
    pub sinkhorn_calls_mean: f64,
    pub sinkhorn_calls_max: u64,
    /// Largest ratio of ellipsoid calls to [`complexity_scale`].
    pub ellipsoid_constant: f64,
    /// Instances with a perfect matching.
    pub positives: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Smallest `C` with calls `≤ C · n⁴ (ln n + ln(1 + ln q(e)))` on every
    /// instance.
    pub fitted_constant: f64,
}

pub fn bench(
    sizes: impl IntoIterator<Item = usize>,
    trials: usize,
    seed: u64,
    delta: f64,
    sinkhorn_c: f64,
) -> hyperpoly_core::Result<BenchReport> {
    let mut rows = Vec::new();
    for n in sizes {
        let mut rng = stream_rng(seed, n as u64);
        let mut row = BenchRow {
            n,
            trials,
            polarization_calls: 0,
            polarization_expected: 1u64 << (n - 1),
            ellipsoid_calls_mean: 0.0,
            ellipsoid_calls_max: 0,
            sinkhorn_calls_mean: 0.0,
            sinkhorn_calls_max: 0,
            ellipsoid_constant: 0.0,
            positives: 0,
        };
        for _ in 0..trials {
            let oracle = PolynomialOracle::product(mixed_binary_matrix(&mut rng, n))?;
            let before = oracle.call_count();
            let mixed = polarization_mixed_derivative(&oracle)?;
            row.polarization_calls = row.polarization_calls.max(oracle.call_count() - before);
            if mixed > 0.5 {
                row.positives += 1;
            }
            let q_e = oracle.eval(&vec![1.0; n])?;
            let before = oracle.call_count();
            decide_polytope_with(&oracle, &DecideOptions { delta, ..DecideOptions::default() })?;
            let calls = oracle.call_count() - before;
            row.ellipsoid_calls_mean += calls as f64 / trials as f64;
            row.ellipsoid_calls_max = row.ellipsoid_calls_max.max(calls);
            row.ellipsoid_constant = row.ellipsoid_constant.max(calls as f64 / complexity_scale(n, q_e));
            let before = oracle.call_count();
            sinkhorn_decide_with(&oracle, &SinkhornOptions { c: sinkhorn_c, max_iters: None })?;
            let calls = oracle.call_count() - before;
            row.sinkhorn_calls_mean += calls as f64 / trials as f64;
            row.sinkhorn_calls_max = row.sinkhorn_calls_max.max(calls);
        }
        rows.push(row);
    }
    let fitted_constant = rows.iter().map(|r| r.ellipsoid_constant).fold(0.0, f64::max);
    Ok(BenchReport { rows, fitted_constant })
}

/// Fixed-width text rendering of the table.
pub fn render(report: &BenchReport) -> String {
    let mut out = String::from(" n  polarization  ellipsoid(mean/max)  sinkhorn(mean/max)  C_fit\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{:>2}  {:>12}  {:>9.0}/{:<9}  {:>8.0}/{:<9}  {:.4}\n",
            r.n,
            r.polarization_calls,
            r.ellipsoid_calls_mean,
            r.ellipsoid_calls_max,
            r.sinkhorn_calls_mean,
            r.sinkhorn_calls_max,
            r.ellipsoid_constant
        ));
    }
    out.push_str(&format!("fitted C = {:.4}\n", report.fitted_constant));
    out
}
