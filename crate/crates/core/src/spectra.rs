//! Roots in a direction and the quantities derived from them.
//!
//! For a polynomial hyperbolic in direction `d`, the univariate polynomial
//! `t ↦ p(x − t d)` has only real roots, the eigenvalues of `x`. Everything
//! here works from that restriction: the eigenvalues, the `p`-rank (number
//! of nonzero eigenvalues of a cone member), the directional trace, and
//! randomized searches for violations of hyperbolicity and of the
//! half-plane property.

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

use crate::calculus::{chebyshev_nodes, restrict, restrict_scaled};
use crate::linalg::{aberth_polish, companion_eigenvalues};
use crate::oracle::PolynomialOracle;
use crate::par::map_range;
use crate::seed::stream_rng;
use crate::{Error, Result};

/// Relative threshold separating zero from nonzero eigenvalues in `rank_p`.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;
/// Tolerance for certifying that eigenvalues are real and nonnegative.
pub const CONE_TOL: f64 = 1e-6;
/// Allowed imaginary part (relative to `1 + max |root|`) for hyperbolicity.
pub const HYPERBOLIC_IMAG_TOL: f64 = 1e-6;
/// Leading coefficients below this fraction of the largest are degenerate.
pub const DEGENERATE_LEAD_TOL: f64 = 1e-12;
/// Largest `n` for tabulating the rank of every subset.
pub const MAX_RANK_TABLE_N: usize = 16;

const CLUSTER_LINK: f64 = 0.05;
/// Resampling interval around the roots, as a multiple of their radius.
const REFINE_MARGIN: f64 = 1.5;
/// Tolerated Taylor coefficient size at a multiple root, relative to the
/// propagated coefficient magnitudes.
const CLUSTER_ACCEPT: f64 = 64.0 * f64::EPSILON;
const HALF_PLANE_ZERO_TOL: f64 = 1e-10;
const CONSTRUCTED_ZERO_TOL: f64 = 1e-8;

/// Eigenvalues of `x` in direction `d`: the roots of `t ↦ p(x − t d)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RootProfile {
    /// Sorted by descending real part.
    pub roots: Vec<Complex64>,
    pub direction: Vec<f64>,
    pub point: Vec<f64>,
    pub max_imag: f64,
    /// Coefficients of `t ↦ p(x − t d)`, ascending.
    pub coefficients: Vec<f64>,
}

impl RootProfile {
    /// Largest root modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.roots.iter().fold(0.0, |m, r| m.max(r.norm()))
    }

    /// Whether every root is real and nonnegative up to `tol`, relative to
    /// `max(1, spectral radius)`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        let scale = self.spectral_radius().max(1.0);
        self.roots.iter().all(|r| r.re >= -tol * scale && r.im.abs() <= tol * scale)
    }
}

fn check_len(n: usize, v: &[f64], what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!("{what} has length {}, expected {n}", v.len())));
    }
    Ok(())
}

/// Coefficients of `t ↦ p(x − t d)` with a nondegenerate leading term.
fn directional_coefficients(oracle: &PolynomialOracle, x: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let n = oracle.n();
    check_len(n, x, "point")?;
    check_len(n, d, "direction")?;
    let neg: Vec<f64> = d.iter().map(|v| -v).collect();
    let c = restrict(oracle, x, &neg)?.coefficients;
    let lead = c[n];
    let top = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if lead == 0.0 || lead.abs() < DEGENERATE_LEAD_TOL * top {
        return Err(Error::DegenerateDirection { leading: lead });
    }
    Ok(c)
}

/// Taylor coefficients of a real polynomial at a complex point.
fn taylor_at(coeffs: &[f64], c: Complex64) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let deg = work.len() - 1;
    let mut out = Vec::with_capacity(deg + 1);
    for k in 0..=deg {
        // synthetic division of work[k..] by (u - c)
        for j in (k..deg).rev() {
            let carry = work[j + 1] * c;
            work[j] += carry;
        }
        out.push(work[k]);
    }
    out
}

/// Newton iteration on the `(k-1)`-th derivative, whose simple root marks a
/// `k`-fold root of the polynomial even when neighbouring roots pull the
/// computed cluster off centre.
fn derivative_root(coeffs: &[f64], k: usize, start: Complex64, unit: f64) -> Complex64 {
    let mut c = start;
    for _ in 0..32 {
        let t = taylor_at(coeffs, c);
        if t[k] == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = t[k - 1] / (t[k] * k as f64);
        c -= step;
        if step.norm() <= f64::EPSILON * c.norm().max(unit) {
            break;
        }
    }
    c
}

/// Largest ratio of a Taylor coefficient of order `< k` at `c` to its
/// error propagated from the coefficient noise scale.
fn taylor_excess(coeffs: &[f64], noise: &[f64], k: usize, c: Complex64) -> f64 {
    let taylor = taylor_at(coeffs, c);
    let radius = c.norm();
    (0..k).fold(0.0_f64, |w, i| {
        let mut binom = 1.0;
        let mut bound = 0.0;
        for (j, eta) in noise.iter().enumerate().skip(i) {
            if j > i {
                binom = binom * j as f64 / (j - i) as f64;
            }
            bound += binom * radius.powi((j - i) as i32) * eta;
        }
        w.max(taylor[i].norm() / bound)
    })
}

/// The largest sub-cluster of `members` consistent with one multiple root,
/// with that root's location.
fn best_cluster(
    coeffs: &[f64],
    noise: &[f64],
    unit: f64,
    roots: &[Complex64],
    merged: &[bool],
    members: &[usize],
) -> Option<(Vec<usize>, Complex64)> {
    let mean = members.iter().fold(Complex64::new(0.0, 0.0), |s, &i| s + roots[i]) / members.len() as f64;
    let starts: Vec<Complex64> = core::iter::once(mean).chain(members.iter().map(|&i| roots[i])).collect();
    for k in (2..=members.len()).rev() {
        for &start in &starts {
            let c = derivative_root(coeffs, k, start, unit);
            if !c.is_finite() {
                continue;
            }
            // the k roots nearest c, counting those already merged, must all be candidates
            let mut chosen: Vec<usize> = (0..roots.len()).collect();
            chosen.sort_by(|&a, &b| (roots[a] - c).norm().total_cmp(&(roots[b] - c).norm()));
            chosen.truncate(k);
            if chosen.iter().any(|i| merged[*i] || !members.contains(i)) {
                continue;
            }
            let centre = chosen.iter().fold(Complex64::new(0.0, 0.0), |s, &i| s + roots[i]) / k as f64;
            let spread = chosen.iter().fold(0.0_f64, |s, &i| s.max((roots[i] - centre).norm()));
            if (c - centre).norm() > 2.0 * spread + f64::EPSILON * unit {
                continue;
            }
            if taylor_excess(coeffs, noise, k, c) <= CLUSTER_ACCEPT {
                return Some((chosen, c));
            }
        }
    }
    None
}

/// Replaces clusters of computed roots that stand for one multiple root by
/// copies of that root. `noise[j] · eps` estimates the absolute error of
/// coefficient `j`; `k` roots are taken as one `k`-fold root at `c` when the
/// `(k-1)`-th derivative vanishes at `c` and the lower Taylor coefficients
/// there are within the propagated error. Candidate clusters link roots
/// closer than a fraction of `unit`, the sampling scale in the rescaled
/// variable.
fn merge_clusters(coeffs: &[f64], noise: &[f64], unit: f64, roots: &mut [Complex64]) -> Vec<bool> {
    let m = roots.len();
    let mut merged = vec![false; m];
    if m < 2 {
        return merged;
    }
    let mut label: Vec<usize> = (0..m).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let scale = roots[i].norm().max(roots[j].norm()).max(unit);
            if (roots[i] - roots[j]).norm() <= CLUSTER_LINK * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut pending: Vec<Vec<usize>> = {
        let mut g: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in 0..m {
            let r = find(&mut label, i);
            g[r].push(i);
        }
        g.into_iter().filter(|v| v.len() > 1).collect()
    };
    while let Some(members) = pending.pop() {
        let Some((chosen, c)) = best_cluster(coeffs, noise, unit, roots, &merged, &members) else {
            continue;
        };
        let c = if c.im.abs() <= CONE_TOL * 1e-3 * c.norm().max(1.0) { Complex64::new(c.re, 0.0) } else { c };
        for &i in &chosen {
            roots[i] = c;
            merged[i] = true;
        }
        let rest: Vec<usize> = members.into_iter().filter(|i| !chosen.contains(i)).collect();
        if rest.len() > 1 {
            pending.push(rest);
        }
    }
    merged
}

/// All roots of a real polynomial (ascending coefficients, nonzero leading
/// term) whose coefficients were sampled on `[-scale, scale]` from values
/// with roundoff of order `eps · magnitude`. The variable
/// is rescaled by a root bound and numerically split multiple roots are
/// merged. Zero roots get no special treatment: a coefficient that rounds
/// to zero may belong to a small multiple root.
pub fn real_polynomial_roots(coeffs: &[f64], scale: f64, magnitude: f64) -> Result<Vec<Complex64>> {
    let k = coeffs.len() - 1;
    // coefficient j carries interpolation noise of order eps · top / scale^j
    let top = coeffs.iter().enumerate().fold(magnitude, |m, (j, c)| m.max(c.abs() * scale.powi(j as i32)));
    let lead = coeffs[k];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let rho = 2.0 * (1..=k).fold(0.0_f64, |m, j| m.max(monic[k - j].abs().powf(1.0 / j as f64)));
    if k == 0 || rho == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); k]);
    }
    let scaled: Vec<f64> = monic.iter().enumerate().map(|(j, &a)| a * rho.powi(j as i32 - k as i32)).collect();
    let noise: Vec<f64> =
        (0..=k).map(|j| top / scale.powi(j as i32) * rho.powi(j as i32 - k as i32) / lead.abs()).collect();
    let mut roots = companion_eigenvalues(&scaled)?;
    let merged = merge_clusters(&scaled, &noise, scale / rho, &mut roots);
    // eigenvalues come in exact conjugate pairs; a root whose partner was
    // merged into a multiple root is real
    let orphans: Vec<usize> = (0..k)
        .filter(|&i| !merged[i] && roots[i].im != 0.0)
        .filter(|&i| !(0..k).any(|j| j != i && !merged[j] && roots[j] == roots[i].conj()))
        .collect();
    for i in orphans {
        roots[i].im = 0.0;
    }
    aberth_polish(&scaled, &mut roots, &merged);
    let mut all: Vec<Complex64> = roots.into_iter().map(|r| r * rho).collect();
    all.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(all)
}

/// Roots of `t ↦ p(base - t·d)` from a restriction sampled on
/// `[-scale, scale]`, with the noise scale taken from the sampled points.
fn restriction_roots(
    oracle: &PolynomialOracle,
    coeffs: &[f64],
    base: &[f64],
    d: &[f64],
    scale: f64,
) -> Result<Vec<Complex64>> {
    let magnitude = chebyshev_nodes(oracle.n())
        .iter()
        .map(|u| {
            let y: Vec<f64> = base.iter().zip(d).map(|(b, v)| b - scale * u * v).collect();
            oracle.instance().roundoff_scale(&y)
        })
        .fold(0.0_f64, f64::max);
    real_polynomial_roots(coeffs, scale, magnitude)
}

/// The eigenvalues of `x` in direction `d`; `2n + 2` oracle calls, or
/// `n + 1` when all roots coincide. A second restriction is sampled on an
/// interval around the first roots, where the values are small and their
/// roundoff is too, which separates near-multiple roots the first
/// coefficients cannot. `coefficients` keeps the first restriction.
pub fn roots_in_direction(oracle: &PolynomialOracle, x: &[f64], d: &[f64]) -> Result<RootProfile> {
    let coefficients = directional_coefficients(oracle, x, d)?;
    let scale = x.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut roots = restriction_roots(oracle, &coefficients, x, d, scale)?;
    let (lo, hi) = roots.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), r| (l.min(r.re), h.max(r.re)));
    let centre = 0.5 * (lo + hi);
    let half = REFINE_MARGIN * roots.iter().fold(0.0_f64, |m, r| m.max((r - centre).norm()));
    if half > 0.0 {
        let neg: Vec<f64> = d.iter().map(|v| -v).collect();
        // a spectrum symmetric about the centre can stall the QR iteration;
        // an off-centre retry breaks the symmetry, and the first pass stands
        // if both fail
        for offset in [0.0, 0.1] {
            let c = centre + offset * half;
            let shifted: Vec<f64> = x.iter().zip(d).map(|(a, b)| a - c * b).collect();
            let local = restrict_scaled(oracle, &shifted, &neg, half)?.coefficients;
            if let Ok(local_roots) = restriction_roots(oracle, &local, &shifted, d, half) {
                roots = local_roots.into_iter().map(|r| r + c).collect();
                break;
            }
        }
    }
    let max_imag = roots.iter().fold(0.0_f64, |m, r| m.max(r.im.abs()));
    Ok(RootProfile { roots, direction: d.to_vec(), point: x.to_vec(), max_imag, coefficients })
}

/// The `p`-rank of an `e`-nonnegative point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankReport {
    /// Number of eigenvalues above `threshold`; the largest `k` with
    /// `S_k > 0` once those below it are set to zero.
    pub rank: usize,
    /// Eigenvalues of `x` in direction `d` (real parts), descending.
    pub eigenvalues: Vec<f64>,
    /// `|S_k| = |c_{n-k} / c_n|` for `k = 0..=n`, read off the restriction.
    pub tail_coefficients: Vec<f64>,
    /// `tol · max(ρ, |x|∞ / |d|∞)`, with `ρ` the largest eigenvalue.
    pub threshold: f64,
}

/// `rank_p` with the default zero threshold.
pub fn rank_p(oracle: &PolynomialOracle, x: &[f64], d: &[f64]) -> Result<RankReport> {
    rank_p_with_tol(oracle, x, d, DEFAULT_RANK_TOL)
}

/// `max{k : S_k(x) > 0}` in direction `d`, where eigenvalues below
/// `tol · ρ` count as zero; oracle calls as in `roots_in_direction`.
///
/// Thresholding eigenvalues rather than the coefficients `S_k` keeps the
/// rank independent of the direction when the nonzero eigenvalues differ
/// by orders of magnitude: `S_r` is their product and can be far below any
/// fixed coefficient threshold.
pub fn rank_p_with_tol(oracle: &PolynomialOracle, x: &[f64], d: &[f64], tol: f64) -> Result<RankReport> {
    let n = oracle.n();
    let profile = roots_in_direction(oracle, x, d)?;
    if !profile.is_nonnegative(CONE_TOL) {
        let worst = profile.roots.iter().min_by(|a, b| a.re.total_cmp(&b.re)).copied().unwrap_or_default();
        return Err(Error::NotConeMember(format!(
            "eigenvalue {:e}{:+e}i (max imaginary part {:e})",
            worst.re, worst.im, profile.max_imag
        )));
    }
    // p(x + t d) has coefficients (-1)^k c_k
    let c = &profile.coefficients;
    let signed = |k: usize| if k % 2 == 1 { -c[k] } else { c[k] };
    let lead = signed(n);
    let tail: Vec<f64> = (0..=n).map(|k| (signed(n - k) / lead).abs()).collect();
    let eigenvalues: Vec<f64> = profile.roots.iter().map(|r| r.re).collect();
    // floor relative to |x| / |d| so a noise-sized spectrum does not set its own scale
    let norm = |v: &[f64]| v.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let threshold = tol * profile.spectral_radius().max(norm(x) / norm(d));
    let rank = if norm(x) == 0.0 { 0 } else { eigenvalues.iter().filter(|&&v| v > threshold).count() };
    Ok(RankReport { rank, eigenvalues, tail_coefficients: tail, threshold })
}

/// Sum of the eigenvalues of `x` in direction `d`; `n + 1` oracle calls.
pub fn trace_in_direction(oracle: &PolynomialOracle, x: &[f64], d: &[f64]) -> Result<f64> {
    let c = directional_coefficients(oracle, x, d)?;
    let n = oracle.n();
    Ok(-c[n - 1] / c[n])
}

/// `R(S) = rank_p(Σ_{i∈S} e_i)` in direction `(1, …, 1)`.
pub fn subset_rank(oracle: &PolynomialOracle, mask: u64, tol: f64) -> Result<usize> {
    let n = oracle.n();
    let x: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { 0.0 }).collect();
    Ok(rank_p_with_tol(oracle, &x, &vec![1.0; n], tol)?.rank)
}

/// `R(S)` for every subset, indexed by mask.
pub fn rank_table(oracle: &PolynomialOracle, tol: f64) -> Result<Vec<usize>> {
    let n = oracle.n();
    if n > MAX_RANK_TABLE_N {
        return Err(Error::Budget { what: "rank table", n, limit: MAX_RANK_TABLE_N });
    }
    map_range(1usize << n, |mask| subset_rank(oracle, mask as u64, tol)).into_iter().collect()
}

fn submodular_at(ranks: &[usize], a: usize, b: usize) -> bool {
    ranks[a | b] + ranks[a & b] <= ranks[a] + ranks[b]
}

/// First pair `(A, B)` in mask order with `R(A∪B) + R(A∩B) > R(A) + R(B)`.
pub fn first_submodularity_violation(n: usize, ranks: &[usize]) -> Option<(u64, u64)> {
    let size = 1usize << n;
    (0..size).find_map(|a| ((a + 1)..size).find(|&b| !submodular_at(ranks, a, b)).map(|b| (a as u64, b as u64)))
}

/// Outcome of a scan for violations of a property over sampled inputs.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SubmodularityReport {
    pub passed: bool,
    pub pairs: usize,
    /// `R(∅) = 0`.
    pub normalized: bool,
    /// Zero-based index sets of the first violating pair.
    pub violation: Option<(Vec<usize>, Vec<usize>)>,
}

fn indices(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Checks `R(A∪B) + R(A∩B) ≤ R(A) + R(B)` on `trials` random subset pairs.
pub fn rank_submodularity_check(oracle: &PolynomialOracle, trials: usize, seed: u64) -> Result<SubmodularityReport> {
    let n = oracle.n();
    let ranks = rank_table(oracle, DEFAULT_RANK_TOL)?;
    let mut rng = stream_rng(seed, 0);
    let size = 1u64 << n;
    let mut violation = None;
    for _ in 0..trials {
        let a = rng.random_range(0..size) as usize;
        let b = rng.random_range(0..size) as usize;
        if violation.is_none() && !submodular_at(&ranks, a, b) {
            violation = Some((indices(n, a as u64), indices(n, b as u64)));
        }
    }
    Ok(SubmodularityReport { passed: violation.is_none(), pairs: trials, normalized: ranks[0] == 0, violation })
}

/// Exhaustive version of [`rank_submodularity_check`] over all pairs.
pub fn rank_submodularity_exhaustive(oracle: &PolynomialOracle) -> Result<SubmodularityReport> {
    let n = oracle.n();
    if n > 10 {
        return Err(Error::Budget { what: "exhaustive submodularity", n, limit: 10 });
    }
    let ranks = rank_table(oracle, DEFAULT_RANK_TOL)?;
    let violation = first_submodularity_violation(n, &ranks).map(|(a, b)| (indices(n, a), indices(n, b)));
    let size = 1usize << n;
    Ok(SubmodularityReport {
        passed: violation.is_none(),
        pairs: size * (size - 1) / 2,
        normalized: ranks[0] == 0,
        violation,
    })
}

pub(crate) fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; 1 - u keeps the logarithm finite
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random::<f64>();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// Probe point for trial `k`: canonical basis vectors first, then Gaussian.
fn probe_point(n: usize, seed: u64, k: usize) -> Vec<f64> {
    if k < n {
        let mut x = vec![0.0; n];
        x[k] = 1.0;
        x
    } else {
        let mut rng = stream_rng(seed, k as u64);
        (0..n).map(|_| gaussian(&mut rng)).collect()
    }
}

/// Result of sampled hyperbolicity testing.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HyperbolicityReport {
    pub passed: bool,
    pub trials: usize,
    /// Largest `max_imag / (1 + max |root|)` seen.
    pub worst_imag: f64,
    /// First point whose eigenvalues are not all real.
    pub witness: Option<Vec<f64>>,
}

/// Tests real-rootedness of `t ↦ p(x − t d)` at `trials` points: the
/// canonical basis vectors, then standard Gaussian points.
pub fn is_hyperbolic_sampled(
    oracle: &PolynomialOracle,
    direction: &[f64],
    trials: usize,
    seed: u64,
) -> Result<HyperbolicityReport> {
    let n = oracle.n();
    check_len(n, direction, "direction")?;
    let at_d = oracle.eval(direction)?;
    if !(at_d > 0.0) {
        return Err(Error::NonPositive(at_d));
    }
    let outcomes = map_range(trials, |k| -> Result<(f64, Vec<f64>)> {
        let x = probe_point(n, seed, k);
        let profile = roots_in_direction(oracle, &x, direction)?;
        Ok((profile.max_imag / (1.0 + profile.spectral_radius()), x))
    });
    let mut worst = 0.0_f64;
    let mut witness = None;
    for o in outcomes {
        let (rel, x) = o?;
        worst = worst.max(rel);
        if rel > HYPERBOLIC_IMAG_TOL && witness.is_none() {
            witness = Some(x);
        }
    }
    Ok(HyperbolicityReport { passed: witness.is_none(), trials, worst_imag: worst, witness })
}

/// Result of sampled half-plane testing.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HalfPlaneReport {
    /// No zero with all real parts positive was found.
    pub passed: bool,
    pub trials: usize,
    /// A point with positive real parts where `p` vanishes (numerically).
    pub zero_witness: Option<Vec<Complex64>>,
    /// `|p(z)| / p(|z|)` at the witness, or the smallest ratio at samples.
    pub min_relative_modulus: f64,
    /// `|p(x + iy)| ≥ |p(x)|` at every sampled positive `x` and real `y`.
    pub inequality_holds: bool,
    pub inequality_witness: Option<(Vec<f64>, Vec<f64>)>,
}

fn relative_modulus(oracle: &PolynomialOracle, z: &[Complex64]) -> Result<f64> {
    let value = oracle.eval_complex(z)?;
    let abs: Vec<f64> = z.iter().map(|c| c.norm()).collect();
    let scale = oracle.eval(&abs)?;
    Ok(if scale > 0.0 { value.norm() / scale } else { 0.0 })
}

/// A zero in the open right half-plane built from a non-real eigenvalue
/// `a + ib` of `x` in direction `e`: `p(x − (a + ib) e) = 0`, so by
/// homogeneity `e + i (x − a e) / b` is a zero with all real parts 1.
fn constructed_zero(oracle: &PolynomialOracle, x: &[f64], ones: &[f64]) -> Result<Option<(Vec<Complex64>, f64)>> {
    let profile = match roots_in_direction(oracle, x, ones) {
        Ok(p) => p,
        Err(Error::DegenerateDirection { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let scale = 1.0 + profile.spectral_radius();
    let Some(root) = profile
        .roots
        .iter()
        .filter(|r| r.im.abs() > HYPERBOLIC_IMAG_TOL * scale)
        .max_by(|a, b| a.im.abs().total_cmp(&b.im.abs()).then(a.im.total_cmp(&b.im)))
    else {
        return Ok(None);
    };
    let z: Vec<Complex64> = x.iter().map(|&xi| Complex64::new(1.0, (xi - root.re) / root.im)).collect();
    let rel = relative_modulus(oracle, &z)?;
    Ok((rel <= CONSTRUCTED_ZERO_TOL).then_some((z, rel)))
}

/// Searches for zeros with `Re z_i > 0` (from non-real eigenvalues and by
/// random sampling), and checks `|p(x + iy)| ≥ |p(x)|` for positive `x`.
pub fn half_plane_check(oracle: &PolynomialOracle, trials: usize, seed: u64) -> Result<HalfPlaneReport> {
    let n = oracle.n();
    let ones = vec![1.0; n];
    let usable_direction = oracle.eval(&ones)? > 0.0;
    type Trial = (Option<(Vec<Complex64>, f64)>, f64, Option<(Vec<f64>, Vec<f64>)>);
    let outcomes = map_range(trials, |k| -> Result<Trial> {
        let constructed =
            if usable_direction { constructed_zero(oracle, &probe_point(n, seed, k), &ones)? } else { None };
        let mut rng = stream_rng(seed ^ 0x9e37_79b9_7f4a_7c15, k as u64);
        let z: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(0.05 + 2.0 * rng.random::<f64>(), 3.0 * gaussian(&mut rng))).collect();
        let sampled = relative_modulus(oracle, &z)?;
        let zero = constructed.or_else(|| (sampled <= HALF_PLANE_ZERO_TOL).then(|| (z.clone(), sampled)));
        let x: Vec<f64> = (0..n).map(|_| 0.1 + 2.0 * rng.random::<f64>()).collect();
        let y: Vec<f64> = (0..n).map(|_| 2.0 * gaussian(&mut rng)).collect();
        let shifted: Vec<Complex64> = x.iter().zip(&y).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let lhs = oracle.eval_complex(&shifted)?.norm();
        let rhs = oracle.eval(&x)?.abs();
        let broken = (lhs < rhs * (1.0 - 1e-9)).then_some((x, y));
        Ok((zero, sampled, broken))
    });
    let mut zero_witness = None;
    let mut min_rel = f64::INFINITY;
    let mut inequality_witness = None;
    for o in outcomes {
        let (zero, sampled, broken) = o?;
        min_rel = min_rel.min(sampled);
        if zero_witness.is_none() {
            if let Some((z, rel)) = zero {
                min_rel = min_rel.min(rel);
                zero_witness = Some(z);
            }
        }
        if inequality_witness.is_none() {
            inequality_witness = broken;
        }
    }
    if trials == 0 {
        min_rel = 1.0;
    }
    Ok(HalfPlaneReport {
        passed: zero_witness.is_none(),
        trials,
        zero_witness,
        min_relative_modulus: min_rel,
        inequality_holds: inequality_witness.is_none(),
        inequality_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn xy() -> PolynomialOracle {
        PolynomialOracle::product(Matrix::identity(2)).unwrap()
    }

    #[test]
    fn roots_examples() {
        let r = roots_in_direction(&xy(), &[3.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!((r.roots[0].re - 3.0).abs() < 1e-12 && (r.roots[1].re - 1.0).abs() < 1e-12);
        assert_eq!(r.max_imag, 0.0);
        let ps = PolynomialOracle::powersum(2);
        let r = roots_in_direction(&ps, &[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((r.max_imag - 0.5).abs() < 1e-12);
        for root in &r.roots {
            assert!((root.re - 0.5).abs() < 1e-12);
        }
        let zero = roots_in_direction(&xy(), &[1.0, 1.0], &[1.0, 0.0]);
        assert!(matches!(zero, Err(Error::DegenerateDirection { .. })));
    }

    #[test]
    fn multiple_roots_stay_real() {
        let o = PolynomialOracle::product(Matrix::identity(6)).unwrap();
        let r = roots_in_direction(&o, &[1.0; 6], &[1.0; 6]).unwrap();
        assert_eq!(r.max_imag, 0.0);
        assert!(r.roots.iter().all(|z| (z.re - 1.0).abs() < 1e-9));
        let x = [2.0, 2.0, 2.0, 0.5, 0.0, 0.0];
        let r = roots_in_direction(&o, &x, &[1.0; 6]).unwrap();
        assert_eq!(r.max_imag, 0.0);
        let re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        for (a, b) in re.iter().zip([2.0, 2.0, 2.0, 0.5, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-9, "{re:?}");
        }
    }

    #[test]
    fn rank_examples() {
        let o = PolynomialOracle::product(Matrix::identity(3)).unwrap();
        assert_eq!(rank_p(&o, &[1.0, 0.0, 0.0], &[1.0; 3]).unwrap().rank, 1);
        assert_eq!(rank_p(&o, &[1.0; 3], &[1.0; 3]).unwrap().rank, 3);
        assert_eq!(rank_p(&o, &[0.0; 3], &[1.0; 3]).unwrap().rank, 0);
        assert!(matches!(rank_p(&o, &[-1.0, 1.0, 1.0], &[1.0; 3]), Err(Error::NotConeMember(_))));
        let ps = PolynomialOracle::powersum(2);
        assert!(rank_p(&ps, &[1.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn trace_examples() {
        assert!((trace_in_direction(&xy(), &[3.0, 1.0], &[1.0, 1.0]).unwrap() - 4.0).abs() < 1e-12);
        let d = [0.3, 2.0, 1.1];
        let o = PolynomialOracle::product(mat(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 3.0]])).unwrap();
        assert!((trace_in_direction(&o, &d, &d).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolicity_examples() {
        let ps = PolynomialOracle::powersum(2);
        let r = is_hyperbolic_sampled(&ps, &[1.0, 1.0], 20, 3).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness, Some(vec![1.0, 0.0]));
        let o = PolynomialOracle::product(Matrix::identity(4)).unwrap();
        assert!(is_hyperbolic_sampled(&o, &[1.0; 4], 50, 3).unwrap().passed);
        let a = mat(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let b = mat(&[&[1.0, 0.0], &[0.0, 3.0]]);
        let d = PolynomialOracle::determinantal(vec![a, b]).unwrap();
        assert!(is_hyperbolic_sampled(&d, &[1.0, 1.0], 200, 5).unwrap().passed);
    }

    #[test]
    fn half_plane_examples() {
        let ps = PolynomialOracle::powersum(2);
        let r = half_plane_check(&ps, 10, 1).unwrap();
        assert!(!r.passed);
        let z = r.zero_witness.unwrap();
        assert!((z[0] - Complex64::new(1.0, 1.0)).norm() < 1e-9, "{z:?}");
        assert!((z[1] - Complex64::new(1.0, -1.0)).norm() < 1e-9, "{z:?}");
        let o = PolynomialOracle::product(Matrix::identity(3)).unwrap();
        let r = half_plane_check(&o, 100, 1).unwrap();
        assert!(r.passed && r.inequality_holds, "{r:?}");
    }

    #[test]
    fn submodularity_examples() {
        let diag: Vec<Matrix> = (0..5)
            .map(|i| Matrix::from_fn(5, 5, |r, c| if r == c && (r + i) % 3 != 0 { 1.0 + r as f64 } else { 0.0 }))
            .collect();
        let o = PolynomialOracle::determinantal(diag).unwrap();
        let r = rank_submodularity_exhaustive(&o).unwrap();
        assert!(r.passed && r.normalized, "{r:?}");
        let s = rank_submodularity_check(&o, 500, 9).unwrap();
        assert!(s.passed && s.pairs == 500);
    }

    #[test]
    fn taylor_coefficients() {
        // (u - 1)^2 (u + 2) = u^3 - 3u + 2
        let t = taylor_at(&[2.0, -3.0, 0.0, 1.0], Complex64::new(1.0, 0.0));
        let expected = [0.0, 0.0, 3.0, 1.0];
        for (a, b) in t.iter().zip(expected) {
            assert!((a.re - b).abs() < 1e-12 && a.im == 0.0);
        }
    }
}
