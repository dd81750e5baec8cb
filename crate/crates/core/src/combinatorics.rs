//! Supports, Newton polytopes and the subset conditions that characterize
//! membership of the all-ones vector.
//!
//! Subsets of `{0, …, n-1}` are encoded as bit masks; iterating masks in
//! increasing numeric order visits subsets in colexicographic order.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// method resolution differs when dev-dependencies turn on num-traits/std
#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{symmetric_rank, Matrix};
use crate::oracle::{DeterminantalInstance, ExplicitPolynomial, ExponentVector, PolynomialOracle};
use crate::par::map_range;
use crate::spectra;
use crate::{Error, Result};

/// Distance below which a point counts as inside a hull.
pub const DEFAULT_HULL_TOL: f64 = 1e-7;
/// Frank–Wolfe duality-gap tolerance.
pub const FRANK_WOLFE_TOL: f64 = 1e-9;
/// Largest `n` for exhaustive subset loops over supports.
pub const MAX_SUBSET_N: usize = 24;
/// Largest `n` for the exhaustive Rado check.
pub const MAX_RADO_N: usize = 20;
/// Largest `n` for enumerations of `I_{n,n}`.
pub const MAX_LATTICE_N: usize = 8;
/// Largest `n` for the polymatroid comparison.
pub const MAX_POLYMATROID_N: usize = 6;
/// Largest `n` for [`brute_matching`].
pub const MAX_MATCHING_N: usize = 20;
/// Relative eigenvalue threshold for numerical matrix rank.
pub const RADO_RANK_TOL: f64 = 1e-8;

/// The support of a polynomial: exponent vectors of its nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SupportSet {
    n: usize,
    vectors: BTreeSet<ExponentVector>,
}

impl SupportSet {
    pub fn from_vectors(n: usize, vectors: impl IntoIterator<Item = ExponentVector>) -> Result<Self> {
        let vectors: BTreeSet<_> = vectors.into_iter().collect();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::InvalidExponent(format!("{v} does not have length {n}")));
        }
        Ok(SupportSet { n, vectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &ExponentVector) -> bool {
        self.vectors.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExponentVector> {
        self.vectors.iter()
    }

    /// `max_{r ∈ supp} Σ_{i∈S} r_i` for the subset encoded by `mask`.
    pub fn max_subset_sum(&self, mask: u64) -> u32 {
        self.vectors.iter().map(|r| r.subset_sum(mask)).max().unwrap_or(0)
    }
}

fn mask_to_indices(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn subset_budget(n: usize, limit: usize, what: &'static str) -> Result<()> {
    if n > limit {
        Err(Error::Budget { what, n, limit })
    } else {
        Ok(())
    }
}

/// A subset `S` with `max_{r ∈ supp} Σ_{i∈S} r_i < |S|`, which separates the
/// all-ones vector from the Newton polytope.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeparatingCertificate {
    /// Zero-based indices of `S`.
    pub subset: Vec<usize>,
    pub mask: u64,
    /// `|S| - max_{r ∈ supp} Σ_{i∈S} r_i`.
    pub slack: u32,
    /// Lower bound `sqrt(n / (|S| (n - |S|)))` on the distance from `e` to
    /// the hull.
    pub implied_distance: f64,
}

impl SeparatingCertificate {
    fn new(supp: &SupportSet, mask: u64) -> Option<Self> {
        let n = supp.n();
        let size = mask.count_ones();
        let best = supp.max_subset_sum(mask);
        if best >= size || size as usize >= n {
            return None;
        }
        let s = size as f64;
        Some(SeparatingCertificate {
            subset: mask_to_indices(n, mask),
            mask,
            slack: size - best,
            implied_distance: (n as f64 / (s * (n as f64 - s))).sqrt(),
        })
    }
}

/// Outcome of a hull-membership query.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HullReport {
    pub inside: bool,
    /// Euclidean distance from the point to the hull.
    pub distance: f64,
    /// Nearest point of the hull.
    pub nearest: Vec<f64>,
    /// Present when the point is the all-ones vector and a subset
    /// inequality separates it.
    pub certificate: Option<SeparatingCertificate>,
    pub iterations: usize,
}

struct Projection {
    x: Vec<f64>,
    distance: f64,
    iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Away-step Frank–Wolfe for `min ½‖Σ w_j v_j − p‖²` over the simplex.
/// Returns `None` when the iteration budget runs out before the duality gap
/// and the membership decision are both settled.
fn frank_wolfe(vertices: &[Vec<f64>], point: &[f64], hull_tol: f64, decide_only: bool) -> Option<Projection> {
    let m = vertices.len();
    let start = (0..m)
        .min_by(|&a, &b| {
            let da: f64 = vertices[a].iter().zip(point).map(|(v, p)| (v - p) * (v - p)).sum();
            let db: f64 = vertices[b].iter().zip(point).map(|(v, p)| (v - p) * (v - p)).sum();
            da.total_cmp(&db)
        })
        .expect("nonempty vertex set");
    let mut w = vec![0.0; m];
    w[start] = 1.0;
    let mut x = vertices[start].clone();
    let half_tol_sq = 0.5 * hull_tol * hull_tol;
    let max_iter = 20_000 + 50 * m;
    for iter in 0..max_iter {
        let grad: Vec<f64> = x.iter().zip(point).map(|(a, b)| a - b).collect();
        let f = 0.5 * dot(&grad, &grad);
        let gx = dot(&grad, &x);
        let mut fw = 0;
        let mut fw_score = f64::INFINITY;
        let mut away = usize::MAX;
        let mut away_score = f64::NEG_INFINITY;
        for (j, v) in vertices.iter().enumerate() {
            let s = dot(&grad, v);
            if s < fw_score {
                fw_score = s;
                fw = j;
            }
            if w[j] > 0.0 && s > away_score {
                away_score = s;
                away = j;
            }
        }
        let gap = gx - fw_score;
        let lower = f - gap;
        let settled_inside = f <= half_tol_sq;
        let settled_outside = lower > half_tol_sq;
        let done = if decide_only {
            settled_inside || settled_outside
        } else {
            gap <= FRANK_WOLFE_TOL && (settled_inside || settled_outside)
        };
        if done || f == 0.0 {
            return Some(Projection { distance: (2.0 * f).sqrt(), x, iterations: iter });
        }
        let away_gap = away_score - gx;
        let (dir, gamma_max, is_fw, idx): (Vec<f64>, f64, bool, usize) = if gap >= away_gap || w[away] >= 1.0 {
            (vertices[fw].iter().zip(&x).map(|(v, a)| v - a).collect(), 1.0, true, fw)
        } else {
            let wa = w[away];
            (x.iter().zip(&vertices[away]).map(|(a, v)| a - v).collect(), wa / (1.0 - wa), false, away)
        };
        let dd = dot(&dir, &dir);
        if dd == 0.0 {
            return Some(Projection { distance: (2.0 * f).sqrt(), x, iterations: iter });
        }
        let gamma = (-dot(&grad, &dir) / dd).clamp(0.0, gamma_max);
        if is_fw {
            for wj in w.iter_mut() {
                *wj *= 1.0 - gamma;
            }
            w[idx] += gamma;
        } else {
            for wj in w.iter_mut() {
                *wj *= 1.0 + gamma;
            }
            w[idx] -= gamma;
            if gamma >= gamma_max {
                w[idx] = 0.0;
            }
        }
        if iter % 64 == 63 {
            // resynchronize the iterate with its weights
            x.iter_mut().for_each(|v| *v = 0.0);
            for (wj, v) in w.iter().zip(vertices) {
                if *wj > 0.0 {
                    for (a, b) in x.iter_mut().zip(v) {
                        *a += wj * b;
                    }
                }
            }
        } else {
            for (a, d) in x.iter_mut().zip(&dir) {
                *a += gamma * d;
            }
        }
    }
    None
}

/// Solves the bordered system `[G 1; 1ᵀ 0] [α; μ] = [0; 1]` for the affine
/// minimizer of the points with Gram matrix `G`.
fn affine_minimizer(gram: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = gram.len();
    let size = k + 1;
    let mut a = vec![vec![0.0; size + 1]; size];
    for i in 0..k {
        a[i][..k].copy_from_slice(&gram[i]);
        a[i][k] = 1.0;
        a[k][i] = 1.0;
    }
    a[k][size] = 1.0;
    let scale = gram.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    for col in 0..size {
        let piv = (col..size).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        for row in 0..size {
            if row != col {
                let factor = a[row][col] / a[col][col];
                if factor != 0.0 {
                    for c in col..=size {
                        a[row][c] -= factor * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][size] / a[i][i]).collect())
}

/// Wolfe's minimum-norm-point algorithm on the shifted points `v_j − p`.
fn min_norm_point(vertices: &[Vec<f64>], point: &[f64]) -> Projection {
    let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| v.iter().zip(point).map(|(a, b)| a - b).collect()).collect();
    let max_norm_sq = shifted.iter().map(|v| dot(v, v)).fold(0.0_f64, f64::max).max(1.0);
    let eps = 1e-12;
    let start = (0..shifted.len())
        .min_by(|&a, &b| dot(&shifted[a], &shifted[a]).total_cmp(&dot(&shifted[b], &shifted[b])))
        .expect("nonempty vertex set");
    let mut active = vec![start];
    let mut lambda = vec![1.0];
    let combine = |active: &[usize], lambda: &[f64]| {
        let mut x = vec![0.0; point.len()];
        for (&j, &l) in active.iter().zip(lambda) {
            for (a, b) in x.iter_mut().zip(&shifted[j]) {
                *a += l * b;
            }
        }
        x
    };
    let mut x = shifted[start].clone();
    let mut iterations = 0;
    'major: for _ in 0..(10 * shifted.len() + 100) {
        iterations += 1;
        let (j, best) = shifted
            .iter()
            .enumerate()
            .map(|(j, v)| (j, dot(&x, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty vertex set");
        if dot(&x, &x) - best <= eps * max_norm_sq || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);
        loop {
            let gram: Vec<Vec<f64>> =
                active.iter().map(|&a| active.iter().map(|&b| dot(&shifted[a], &shifted[b])).collect()).collect();
            let Some(alpha) = affine_minimizer(&gram) else {
                active.pop();
                lambda.pop();
                break 'major;
            };
            if alpha.iter().all(|&a| a > eps) {
                lambda = alpha;
                x = combine(&active, &lambda);
                break;
            }
            let mut theta = 1.0_f64;
            for (&l, &a) in lambda.iter().zip(&alpha) {
                if a <= eps {
                    let denom = l - a;
                    if denom > 0.0 {
                        theta = theta.min(l / denom);
                    }
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut k = 0;
            while k < active.len() {
                if lambda[k] <= eps {
                    active.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            x = combine(&active, &lambda);
        }
    }
    let distance = dot(&x, &x).sqrt();
    let nearest = x.iter().zip(point).map(|(a, b)| a + b).collect();
    Projection { x: nearest, distance, iterations }
}

fn project(vertices: &[Vec<f64>], point: &[f64], hull_tol: f64, decide_only: bool) -> Projection {
    frank_wolfe(vertices, point, hull_tol, decide_only).unwrap_or_else(|| min_norm_point(vertices, point))
}

/// Euclidean distance from `point` to the convex hull of the support, with
/// the default membership tolerance.
pub fn newton_polytope_contains(supp: &SupportSet, point: &[f64]) -> Result<HullReport> {
    newton_polytope_contains_with_tol(supp, point, DEFAULT_HULL_TOL)
}

/// Hull membership with an explicit distance tolerance.
pub fn newton_polytope_contains_with_tol(supp: &SupportSet, point: &[f64], hull_tol: f64) -> Result<HullReport> {
    let proj = projection_for(supp, point, hull_tol, false)?;
    let inside = proj.distance <= hull_tol;
    let all_ones = point.iter().all(|&v| v == 1.0);
    let certificate = if inside || !all_ones { None } else { sorted_prefix_certificate(supp, &proj.x) };
    Ok(HullReport { inside, distance: proj.distance, nearest: proj.x, certificate, iterations: proj.iterations })
}

fn projection_for(supp: &SupportSet, point: &[f64], hull_tol: f64, decide_only: bool) -> Result<Projection> {
    if supp.is_empty() {
        return Err(Error::EmptySupport);
    }
    if point.len() != supp.n() {
        return Err(Error::Dimension(format!("point has length {}, expected {}", point.len(), supp.n())));
    }
    if point.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if !(hull_tol > 0.0) {
        return Err(Error::Numerical(format!("hull tolerance {hull_tol} must be positive")));
    }
    let vertices: Vec<Vec<f64>> = supp.iter().map(ExponentVector::to_f64).collect();
    Ok(project(&vertices, point, hull_tol, decide_only))
}

/// Looks for a separating subset among the prefixes of the coordinates
/// sorted by the separating direction `e − nearest`.
fn sorted_prefix_certificate(supp: &SupportSet, nearest: &[f64]) -> Option<SeparatingCertificate> {
    let n = supp.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| (1.0 - nearest[b]).total_cmp(&(1.0 - nearest[a])).then(a.cmp(&b)));
    let mut mask = 0u64;
    for &i in order.iter().take(n.saturating_sub(1)) {
        mask |= 1 << i;
        if let Some(c) = SeparatingCertificate::new(supp, mask) {
            return Some(c);
        }
    }
    None
}

/// Whether the hull contains `point`, stopping as soon as the answer is
/// settled (the reported distance is then only an upper bound).
pub fn hull_contains_fast(supp: &SupportSet, point: &[f64], hull_tol: f64) -> Result<bool> {
    let proj = projection_for(supp, point, hull_tol, true)?;
    Ok(proj.distance <= hull_tol)
}

/// Outcome of the exhaustive subset condition.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HallReport {
    pub holds: bool,
    /// Zero-based indices of the first violating subset in colex order.
    pub violating: Option<Vec<usize>>,
}

fn max_subset_sums(supp: &SupportSet) -> Vec<u8> {
    let n = supp.n();
    let size = 1usize << n;
    let mut best = vec![0u8; size];
    let mut sums = vec![0u8; size];
    for r in supp.iter() {
        let r = r.as_slice();
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + r[low] as u8;
            if sums[mask] > best[mask] {
                best[mask] = sums[mask];
            }
        }
    }
    best
}

fn first_hall_violation(supp: &SupportSet) -> Result<Option<u64>> {
    let n = supp.n();
    subset_budget(n, MAX_SUBSET_N, "subset enumeration")?;
    if supp.is_empty() {
        return Err(Error::EmptySupport);
    }
    let best = max_subset_sums(supp);
    Ok((1..best.len()).find(|&mask| (best[mask] as u32) < mask.count_ones()).map(|m| m as u64))
}

/// Checks `max_{r ∈ supp} Σ_{i∈S} r_i ≥ |S|` for every nonempty subset `S`.
pub fn hall_condition(supp: &SupportSet) -> Result<HallReport> {
    let violation = first_hall_violation(supp)?;
    Ok(HallReport { holds: violation.is_none(), violating: violation.map(|m| mask_to_indices(supp.n(), m)) })
}

/// The first violated subset inequality, packaged with its distance bound.
pub fn separating_subset(supp: &SupportSet) -> Result<Option<SeparatingCertificate>> {
    Ok(first_hall_violation(supp)?.and_then(|mask| SeparatingCertificate::new(supp, mask)))
}

/// Outcome of the exhaustive rank condition on a matrix tuple.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RadoReport {
    pub positive: bool,
    /// Zero-based indices of the first subset with `rank(Σ_S A_i) < |S|`.
    pub violating: Option<Vec<usize>>,
    /// Numerical rank of the violating partial sum.
    pub rank: Option<usize>,
}

fn partial_sum(instance: &DeterminantalInstance, mask: u64) -> Matrix {
    let n = instance.n();
    let mut sum = Matrix::zeros(n, n);
    for (i, a) in instance.matrices().iter().enumerate() {
        if mask >> i & 1 == 1 {
            sum.add_scaled(1.0, a);
        }
    }
    sum
}

/// Checks `rank(Σ_{i∈S} A_i) ≥ |S|` for every nonempty subset `S`.
pub fn rado_check(instance: &DeterminantalInstance) -> Result<RadoReport> {
    let n = instance.n();
    subset_budget(n, MAX_RADO_N, "rank enumeration")?;
    let total = 1usize << n;
    const CHUNK: usize = 256;
    let found = map_range(total.div_ceil(CHUNK), |c| {
        let lo = (c * CHUNK).max(1);
        let hi = ((c + 1) * CHUNK).min(total);
        (lo..hi).find_map(|mask| {
            let rank = symmetric_rank(&partial_sum(instance, mask as u64), RADO_RANK_TOL);
            (rank < mask.count_ones() as usize).then_some((mask as u64, rank))
        })
    });
    let first = found.into_iter().flatten().next();
    Ok(RadoReport {
        positive: first.is_none(),
        violating: first.map(|(m, _)| mask_to_indices(n, m)),
        rank: first.map(|(_, r)| r),
    })
}

/// Comparison of the lattice points of the Newton polytope with the support.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LatticeReport {
    pub holds: bool,
    /// A lattice point of the hull that is missing from the support.
    pub witness: Option<ExponentVector>,
    pub lattice_points: usize,
}

/// Checks that every point of `I_{n,n}` inside the Newton polytope belongs
/// to the support, which holds for supports of hyperbolic polynomials.
pub fn check_saturation(poly: &ExplicitPolynomial) -> Result<LatticeReport> {
    check_lattice_saturation(poly, DEFAULT_HULL_TOL)
}

/// [`check_saturation`] with an explicit hull tolerance.
pub fn check_lattice_saturation(poly: &ExplicitPolynomial, hull_tol: f64) -> Result<LatticeReport> {
    let n = poly.n();
    subset_budget(n, MAX_LATTICE_N, "lattice enumeration")?;
    let supp = poly.support();
    if supp.is_empty() {
        return Err(Error::EmptySupport);
    }
    let lattice = ExponentVector::enumerate(n);
    // the all-ones point is the one that matters downstream, so it is reported first
    let ones = ExponentVector::ones(n);
    let mut candidates: Vec<&ExponentVector> = lattice.iter().filter(|r| !supp.contains(r)).collect();
    candidates.sort_by_key(|r| **r != ones);
    let verdicts = map_range(candidates.len(), |k| hull_contains_fast(&supp, &candidates[k].to_f64(), hull_tol));
    let mut witness = None;
    for (k, v) in verdicts.into_iter().enumerate() {
        if v? {
            witness = Some(candidates[k].clone());
            break;
        }
    }
    Ok(LatticeReport { holds: witness.is_none(), witness, lattice_points: lattice.len() })
}

/// Comparison of the support with the lattice points cut out by the rank
/// function `R(S) = rank_p(Σ_{i∈S} e_i)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PolymatroidReport {
    pub holds: bool,
    /// `R(S)` indexed by subset mask.
    pub ranks: Vec<usize>,
    pub normalized: bool,
    pub submodular: bool,
    /// First lattice point where the two descriptions disagree.
    pub witness: Option<ExponentVector>,
}

/// Checks `supp = {r ∈ I_{n,n} : Σ_{i∈S} r_i ≤ R(S) for all S}`.
pub fn check_polymatroid(oracle: &PolynomialOracle, poly: &ExplicitPolynomial) -> Result<PolymatroidReport> {
    let n = oracle.n();
    subset_budget(n, MAX_POLYMATROID_N, "polymatroid comparison")?;
    if poly.n() != n {
        return Err(Error::Dimension(format!("polynomial has {} variables, oracle {n}", poly.n())));
    }
    let ranks = spectra::rank_table(oracle, spectra::DEFAULT_RANK_TOL)?;
    let normalized = ranks[0] == 0;
    let submodular = spectra::first_submodularity_violation(n, &ranks).is_none();
    let supp = poly.support();
    let witness = ExponentVector::enumerate(n).into_iter().find(|r| {
        let fits = (1..(1u64 << n)).all(|mask| r.subset_sum(mask) as usize <= ranks[mask as usize]);
        fits != supp.contains(r)
    });
    Ok(PolymatroidReport { holds: witness.is_none(), ranks, normalized, submodular, witness })
}

/// Perfect-matching existence in the bipartite graph of nonzero entries,
/// by dynamic programming over column subsets.
pub fn brute_matching(matrix: &Matrix) -> Result<bool> {
    if !matrix.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", matrix.rows(), matrix.cols())));
    }
    let n = matrix.rows();
    subset_budget(n, MAX_MATCHING_N, "matching")?;
    let mut reach = vec![false; 1 << n];
    reach[0] = true;
    for mask in 0..(1usize << n) {
        if !reach[mask] {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask >> col & 1 == 0 && matrix[(row, col)] != 0.0 {
                reach[mask | 1 << col] = true;
            }
        }
    }
    Ok(reach[(1 << n) - 1])
}
