//! Cross-module verification suites over an instance corpus.
//!
//! Each suite checks one identity or agreement on every instance it applies
//! to. Instances labeled [`NOT_S_HYPERBOLIC`](crate::instance::NOT_S_HYPERBOLIC)
//! are negative controls: a failing check on them is recorded as an
//! expected failure, and each control must produce at least one.
//!
//! The report contains no timings, so two runs with the same seed produce
//! identical bytes.

use std::path::Path;

use anyhow::anyhow;
use hyperpoly_core::calculus::{
    brute_mixed_discriminant, gradient, gradient_log, mixed_form, polarization_mixed_derivative, ryser_permanent,
};
use hyperpoly_core::capacity::{
    capacity_estimate, capacity_upper_bound_at, decide_polytope_with, vdw_ratio, DecideOptions, Verdict,
};
use hyperpoly_core::combinatorics::{
    brute_matching, check_lattice_saturation, check_polymatroid, hall_condition, newton_polytope_contains_with_tol,
    rado_check, separating_subset, HullReport,
};
use hyperpoly_core::linalg::symmetric_eigen;
use hyperpoly_core::oracle::{expand, ExplicitPolynomial};
use hyperpoly_core::scaling::{hs_step, sinkhorn_decide_with, ScalingState, SinkhornOptions, SinkhornVerdict};
use hyperpoly_core::seed::stream_rng;
use hyperpoly_core::spectra::{
    half_plane_check, is_hyperbolic_sampled, rank_p_with_tol, rank_submodularity_check, roots_in_direction,
    trace_in_direction,
};
use hyperpoly_core::{Complex64, ExponentVector, Instance, Kind, Matrix, PolynomialOracle};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::instance::{corpus_paths, InstanceFile, Loaded};
use crate::random::{gaussian_vector, positive_point, subset_mask};

/// Tolerances and sampling parameters of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Samples for the hyperbolicity and half-plane checks.
    pub trials: usize,
    pub root_tol: f64,
    pub delta: f64,
    pub hull_tol: f64,
    pub sinkhorn_c: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: 200,
            root_tol: hyperpoly_core::spectra::DEFAULT_RANK_TOL,
            delta: hyperpoly_core::capacity::DEFAULT_DELTA,
            hull_tol: hyperpoly_core::combinatorics::DEFAULT_HULL_TOL,
            sinkhorn_c: hyperpoly_core::scaling::DEFAULT_SINKHORN_C,
        }
    }
}

/// A failure, or an expected failure, on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub instance: String,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    /// Instances the suite applied to.
    pub checked: usize,
    pub failures: Vec<Finding>,
    pub expected_failures: Vec<Finding>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub name: String,
    pub kind: Option<&'static str>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub config: VerifyConfig,
    pub instances: Vec<InstanceSummary>,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

struct Suite {
    name: &'static str,
    checked: usize,
    failures: Vec<Finding>,
    expected: Vec<Finding>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, checked: 0, failures: Vec::new(), expected: Vec::new() }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            passed: self.failures.is_empty(),
            checked: self.checked,
            failures: self.failures,
            expected_failures: self.expected,
        }
    }
}

struct Case {
    index: usize,
    name: String,
    file: InstanceFile,
    oracle: PolynomialOracle,
    expanded: Option<ExplicitPolynomial>,
}

impl Case {
    fn n(&self) -> usize {
        self.oracle.n()
    }

    fn kind(&self) -> Kind {
        self.oracle.kind()
    }

    fn negative(&self) -> bool {
        self.file.is_negative_control()
    }

    fn p_hyperbolic(&self) -> bool {
        self.kind().is_p_hyperbolic_family() && !self.negative()
    }

    fn rng(&self, seed: u64, suite: u64) -> ChaCha8Rng {
        stream_rng(seed, (suite << 32) | self.index as u64)
    }

    fn ones(&self) -> Vec<f64> {
        vec![1.0; self.n()]
    }
}

/// Outcome of one check on one instance.
enum Check {
    Pass,
    Fail(Value),
    Skip,
}

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

type CheckFn = fn(&Case, &VerifyConfig, &mut ChaCha8Rng) -> anyhow::Result<Check>;

const SUITES: &[(&str, CheckFn)] = &[
    ("homogeneity", homogeneity),
    ("call_accounting", call_accounting),
    ("euler_identity", euler_identity),
    ("determinant_cross_check", determinant_cross_check),
    ("permanent_identity", permanent_identity),
    ("mixed_form_canonical", mixed_form_canonical),
    ("mixed_discriminant_paths", mixed_discriminant_paths),
    ("hyperbolicity", hyperbolicity),
    ("half_plane", half_plane),
    ("root_identities", root_identities),
    ("trace_log_gradient", trace_log_gradient),
    ("rank_direction_invariance", rank_direction_invariance),
    ("rank_monotonicity", rank_monotonicity),
    ("rank_submodularity", rank_submodularity),
    ("lattice_saturation", lattice_saturation),
    ("polymatroid", polymatroid),
    ("support_equivalences", support_equivalences),
    ("distance_bound", distance_bound),
    ("decision_ground_truth", decision_ground_truth),
    ("sinkhorn_agreement", sinkhorn_agreement),
    ("scaling_fixed_points", scaling_fixed_points),
    ("capacity_bounds", capacity_bounds),
    ("van_der_waerden", van_der_waerden),
];

/// Runs every suite on the instances of `dir`.
pub fn verify_corpus(dir: &Path, config: &VerifyConfig) -> anyhow::Result<VerifyReport> {
    let paths = corpus_paths(dir)?;
    let mut load = Suite::new("load");
    let mut cases = Vec::new();
    let mut instances = Vec::new();
    for (index, path) in paths.iter().enumerate() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        load.checked += 1;
        let file = match InstanceFile::load(path) {
            Ok(f) => f,
            Err(e) => {
                load.failures.push(Finding { instance: stem.clone(), detail: json!({ "error": format!("{e:#}") }) });
                instances.push(InstanceSummary { name: stem, kind: None, n: 0, expected: None });
                continue;
            }
        };
        let summary_name = file.name.clone().unwrap_or_else(|| stem.clone());
        let n = file.family.n();
        let expected = file.expected.clone();
        match Loaded::from_file(file, &stem) {
            Ok(l) => {
                instances.push(InstanceSummary {
                    name: l.name.clone(),
                    kind: Some(l.oracle.kind().as_str()),
                    n,
                    expected,
                });
                let expanded = expand(&l.oracle).ok();
                cases.push(Case { index, name: l.name, file: l.file, oracle: l.oracle, expanded });
            }
            Err(e) => {
                load.failures
                    .push(Finding { instance: summary_name.clone(), detail: json!({ "error": format!("{e:#}") }) });
                instances.push(InstanceSummary { name: summary_name, kind: None, n, expected });
            }
        }
    }
    let mut suites = vec![load.finish()];
    for (id, (name, check)) in SUITES.iter().enumerate() {
        let mut suite = Suite::new(name);
        for case in &cases {
            let mut rng = case.rng(config.seed, id as u64 + 1);
            let outcome =
                check(case, config, &mut rng).unwrap_or_else(|e| Check::Fail(json!({ "error": format!("{e:#}") })));
            match outcome {
                Check::Skip => {}
                Check::Pass => suite.checked += 1,
                Check::Fail(detail) => {
                    suite.checked += 1;
                    let f = Finding { instance: case.name.clone(), detail };
                    if case.negative() {
                        suite.expected.push(f);
                    } else {
                        suite.failures.push(f);
                    }
                }
            }
        }
        suites.push(suite.finish());
    }
    let mut controls = Suite::new("negative_controls");
    for case in cases.iter().filter(|c| c.negative()) {
        controls.checked += 1;
        let detected = suites.iter().any(|s| s.expected_failures.iter().any(|f| f.instance == case.name));
        if !detected {
            controls.failures.push(Finding {
                instance: case.name.clone(),
                detail: json!({ "error": "no check detected the documented failure" }),
            });
        }
    }
    suites.push(controls.finish());
    Ok(VerifyReport { passed: suites.iter().all(|s| s.passed), config: *config, instances, suites })
}

use Check::{Fail, Pass, Skip};

fn homogeneity(case: &Case, _: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let n = case.n();
    for _ in 0..100 {
        let x = gaussian_vector(rng, n);
        let t: f64 = rng.random_range(0.25..2.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        let lhs = case.oracle.eval(&tx)?;
        let rhs = t.powi(n as i32) * case.oracle.eval(&x)?;
        let magnitude = t.abs().powi(n as i32) * case.oracle.eval(&x.iter().map(|v| v.abs()).collect::<Vec<_>>())?;
        if !close(lhs, rhs, 1e-9, 1e-12 * magnitude) {
            return Ok(Fail(json!({ "point": x, "scale": t, "scaled_value": lhs, "expected": rhs })));
        }
    }
    Ok(Pass)
}

fn call_accounting(case: &Case, _: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let n = case.n();
    let before = case.oracle.call_count();
    let k = 17;
    for _ in 0..k {
        case.oracle.eval(&gaussian_vector(rng, n))?;
    }
    let z: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0, i as f64)).collect();
    case.oracle.eval_complex(&z)?;
    let delta = case.oracle.call_count() - before;
    if delta != k + 1 {
        return Ok(Fail(json!({ "evaluations": k + 1, "counted": delta })));
    }
    Ok(Pass)
}

fn euler_identity(case: &Case, _: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let n = case.n();
    for _ in 0..20 {
        let x = positive_point(rng, n, 0.2, 3.0);
        let g = gradient(&case.oracle, &x)?;
        let lhs: f64 = g.iter().zip(&x).map(|(g, x)| g * x).sum();
        let rhs = n as f64 * case.oracle.eval(&x)?;
        if !close(lhs, rhs, 1e-8, 0.0) {
            return Ok(Fail(json!({ "point": x, "euler_sum": lhs, "n_times_value": rhs })));
        }
    }
    Ok(Pass)
}

fn determinant_cross_check(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Instance::Determinantal(d) = case.oracle.instance() else { return Ok(Skip) };
    let n = case.n();
    let sum = d.combination(&vec![1.0; n]);
    let eig = symmetric_eigen(&sum);
    let product: f64 = eig.values.iter().product();
    let top = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let value = case.oracle.eval(&case.ones())?;
    if !close(value, product, 1e-8, 1e-12 * top.powi(n as i32)) {
        return Ok(Fail(json!({ "oracle": value, "eigenvalue_product": product })));
    }
    Ok(Pass)
}

/// Absolute error scale for alternating sums over the subsets of `0..n`.
fn sweep_scale(case: &Case) -> anyhow::Result<f64> {
    Ok(1e-14 * 2f64.powi(case.n() as i32) * case.oracle.eval(&case.ones())?.abs())
}

fn permanent_identity(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Instance::Product(p) = case.oracle.instance() else { return Ok(Skip) };
    if case.n() > 10 {
        return Ok(Skip);
    }
    let polarized = polarization_mixed_derivative(&case.oracle)?;
    let ryser = ryser_permanent(p.matrix())?;
    if !close(polarized, ryser, 1e-8, sweep_scale(case)?) {
        return Ok(Fail(json!({ "polarization": polarized, "ryser": ryser })));
    }
    Ok(Pass)
}

fn canonical_tuple(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn mixed_form_canonical(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if case.n() > 12 {
        return Ok(Skip);
    }
    let polarized = polarization_mixed_derivative(&case.oracle)?;
    let form = mixed_form(&case.oracle, &canonical_tuple(case.n()))?;
    if !close(form, polarized, 1e-12, sweep_scale(case)?) {
        return Ok(Fail(json!({ "mixed_form": form, "polarization": polarized })));
    }
    Ok(Pass)
}

fn mixed_discriminant_paths(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Instance::Determinantal(d) = case.oracle.instance() else { return Ok(Skip) };
    if case.n() > hyperpoly_core::calculus::MAX_MIXED_DISCRIMINANT_N {
        return Ok(Skip);
    }
    let md = brute_mixed_discriminant(d.matrices())?;
    let polarized = polarization_mixed_derivative(&case.oracle)?;
    let abs = 1e-9 * case.oracle.eval(&case.ones())?;
    if !close(md.value, md.inclusion_exclusion, 1e-6, abs) || !close(md.value, polarized, 1e-6, abs) {
        return Ok(Fail(json!({
            "permutation_sum": md.value,
            "inclusion_exclusion": md.inclusion_exclusion,
            "polarization": polarized,
        })));
    }
    Ok(Pass)
}

fn hyperbolicity(case: &Case, config: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() && !case.negative() {
        return Ok(Skip);
    }
    let report = is_hyperbolic_sampled(&case.oracle, &case.ones(), config.trials, rng.random())?;
    if report.passed {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "worst_imag": report.worst_imag, "witness": report.witness })))
    }
}

fn half_plane(case: &Case, config: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() && !case.negative() {
        return Ok(Skip);
    }
    let report = half_plane_check(&case.oracle, config.trials, rng.random())?;
    if report.passed && report.inequality_holds {
        return Ok(Pass);
    }
    if let Some(z) = &report.zero_witness {
        if !z.iter().all(|c| c.re > 0.0) {
            return Err(anyhow!("zero witness outside the open right half-plane"));
        }
    }
    Ok(Fail(json!({
        "zero_witness": report.zero_witness.as_ref().map(|z| z.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()),
        "min_relative_modulus": report.min_relative_modulus,
        "inequality_holds": report.inequality_holds,
        "inequality_witness": report.inequality_witness,
    })))
}

fn root_identities(case: &Case, _: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() {
        return Ok(Skip);
    }
    let n = case.n();
    let e = case.ones();
    let qe = case.oracle.eval(&e)?;
    if !(qe > 0.0) {
        return Ok(Skip);
    }
    for _ in 0..10 {
        let x = gaussian_vector(rng, n);
        let profile = roots_in_direction(&case.oracle, &x, &e)?;
        let product = profile.roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * r);
        let expected = case.oracle.eval(&x)? / qe;
        let magnitude = case.oracle.eval(&x.iter().map(|v| v.abs()).collect::<Vec<_>>())? / qe;
        if !close(product.re, expected, 1e-7, 1e-9 * magnitude) {
            return Ok(Fail(json!({ "point": x, "root_product": product.re, "value_ratio": expected })));
        }
    }
    for _ in 0..10 {
        let alpha = positive_point(rng, n, 0.3, 3.0);
        let mut total = 0.0;
        for i in 0..n {
            let mut xi = vec![0.0; n];
            xi[i] = alpha[i];
            total += trace_in_direction(&case.oracle, &xi, &alpha)?;
        }
        if !close(total, n as f64, 1e-8, 0.0) {
            return Ok(Fail(json!({ "direction": alpha, "trace_sum": total })));
        }
    }
    Ok(Pass)
}

fn trace_log_gradient(case: &Case, _: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() || !(case.oracle.eval(&case.ones())? > 0.0) {
        return Ok(Skip);
    }
    let n = case.n();
    for _ in 0..5 {
        let alpha = positive_point(rng, n, 0.3, 3.0);
        let g = gradient_log(&case.oracle, &alpha)?;
        for i in 0..n {
            let mut xi = vec![0.0; n];
            xi[i] = alpha[i];
            let t = trace_in_direction(&case.oracle, &xi, &alpha)?;
            if !close(t, g.ratios[i], 1e-7, 1e-12) {
                return Ok(Fail(json!({ "alpha": alpha, "coordinate": i, "trace": t, "log_gradient": g.ratios[i] })));
            }
        }
    }
    Ok(Pass)
}

/// A random vector supported on a random coordinate subset.
fn sparse_nonnegative(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mask = subset_mask(rng, n);
    (0..n).map(|i| if mask >> i & 1 == 1 { rng.random_range(0.2..3.0) } else { 0.0 }).collect()
}

fn rank_direction_invariance(case: &Case, config: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() || !(case.oracle.eval(&case.ones())? > 0.0) {
        return Ok(Skip);
    }
    let n = case.n();
    for _ in 0..10 {
        let x = sparse_nonnegative(rng, n);
        let d = positive_point(rng, n, 0.2, 3.0);
        let along_e = rank_p_with_tol(&case.oracle, &x, &case.ones(), config.root_tol)?.rank;
        let along_d = rank_p_with_tol(&case.oracle, &x, &d, config.root_tol)?.rank;
        if along_e != along_d {
            return Ok(Fail(json!({ "point": x, "direction": d, "rank_e": along_e, "rank_d": along_d })));
        }
    }
    Ok(Pass)
}

fn rank_monotonicity(case: &Case, config: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() || !(case.oracle.eval(&case.ones())? > 0.0) {
        return Ok(Skip);
    }
    let n = case.n();
    let e = case.ones();
    for _ in 0..10 {
        let x = sparse_nonnegative(rng, n);
        let y = sparse_nonnegative(rng, n);
        let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let rx = rank_p_with_tol(&case.oracle, &x, &e, config.root_tol)?.rank;
        let ry = rank_p_with_tol(&case.oracle, &y, &e, config.root_tol)?.rank;
        let rs = rank_p_with_tol(&case.oracle, &s, &e, config.root_tol)?.rank;
        if rs < rx.max(ry) {
            return Ok(Fail(json!({ "x": x, "y": y, "rank_x": rx, "rank_y": ry, "rank_sum": rs })));
        }
    }
    Ok(Pass)
}

fn rank_submodularity(case: &Case, _: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() || !(case.oracle.eval(&case.ones())? > 0.0) {
        return Ok(Skip);
    }
    let report = rank_submodularity_check(&case.oracle, 500, rng.random())?;
    if report.passed {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "normalized": report.normalized, "violation": report.violation })))
    }
}

fn lattice_saturation(case: &Case, config: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Some(poly) = &case.expanded else { return Ok(Skip) };
    if case.n() > 6 || poly.terms().is_empty() {
        return Ok(Skip);
    }
    let report = check_lattice_saturation(poly, config.hull_tol)?;
    if report.holds {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "missing_lattice_point": report.witness })))
    }
}

fn polymatroid(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Some(poly) = &case.expanded else { return Ok(Skip) };
    if !case.p_hyperbolic() || case.n() > 5 || poly.terms().is_empty() {
        return Ok(Skip);
    }
    let report = check_polymatroid(&case.oracle, poly)?;
    if report.holds && report.normalized && report.submodular {
        Ok(Pass)
    } else {
        Ok(Fail(json!({
            "normalized": report.normalized,
            "submodular": report.submodular,
            "witness": report.witness,
        })))
    }
}

fn hull_at_ones(case: &Case, poly: &ExplicitPolynomial, config: &VerifyConfig) -> anyhow::Result<HullReport> {
    Ok(newton_polytope_contains_with_tol(&poly.support(), &case.ones(), config.hull_tol)?)
}

fn support_equivalences(case: &Case, config: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Some(poly) = &case.expanded else { return Ok(Skip) };
    if case.n() > 7 || poly.terms().is_empty() {
        return Ok(Skip);
    }
    let supp = poly.support();
    let hall = hall_condition(&supp)?.holds;
    let hull = hull_at_ones(case, poly, config)?.inside;
    let member = supp.contains(&ExponentVector::ones(case.n()));
    if hall == hull && hull == member {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "hall": hall, "hull": hull, "support": member })))
    }
}

fn distance_bound(case: &Case, config: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Some(poly) = &case.expanded else { return Ok(Skip) };
    if poly.terms().is_empty() {
        return Ok(Skip);
    }
    let supp = poly.support();
    let Some(cert) = separating_subset(&supp)? else { return Ok(Skip) };
    let hull = hull_at_ones(case, poly, config)?;
    if hull.distance >= cert.implied_distance - 1e-6 {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "subset": cert.subset, "implied": cert.implied_distance, "measured": hull.distance })))
    }
}

fn decision_ground_truth(case: &Case, config: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    // the coefficient floor is metadata; read it off the expansion when known
    let floor = case.expanded.as_ref().and_then(|p| p.terms().values().copied().reduce(f64::min)).unwrap_or(1.0);
    let options = DecideOptions { delta: config.delta, min_coefficient: floor.min(1.0), ..DecideOptions::default() };
    let mut truths: Vec<(&str, bool)> = Vec::new();
    if let Some(poly) = &case.expanded {
        if case.n() <= 8 {
            truths.push(("hull", !poly.terms().is_empty() && hull_at_ones(case, poly, config)?.inside));
        }
    }
    match case.oracle.instance() {
        Instance::Product(p) => truths.push(("matching", brute_matching(p.matrix())?)),
        Instance::Determinantal(d) if case.n() <= 6 => {
            truths.push(("rado", rado_check(d)?.positive));
            let md = brute_mixed_discriminant(d.matrices())?.value;
            truths.push(("mixed_discriminant", md > 1e-9));
        }
        _ => {}
    }
    if truths.is_empty() {
        return Ok(Skip);
    }
    let report = decide_polytope_with(&case.oracle, &options)?;
    let inside = match report.verdict {
        Verdict::InPolytope => true,
        Verdict::NotInPolytope => false,
        Verdict::Inconclusive => return Ok(Fail(json!({ "verdict": "INCONCLUSIVE", "min": report.min_value_found }))),
    };
    if truths.iter().all(|(_, t)| *t == inside) {
        Ok(Pass)
    } else {
        let map: serde_json::Map<String, Value> = truths.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        Ok(Fail(json!({ "verdict": report.verdict.as_str(), "ground_truth": map })))
    }
}

fn mixed_positive(case: &Case) -> anyhow::Result<bool> {
    let qe = case.oracle.eval(&case.ones())?;
    Ok(qe > 0.0 && polarization_mixed_derivative(&case.oracle)? > 1e-9 * qe)
}

fn sinkhorn_agreement(case: &Case, config: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() || case.n() > 12 {
        return Ok(Skip);
    }
    let positive = mixed_positive(case)?;
    let report = sinkhorn_decide_with(&case.oracle, &SinkhornOptions { c: config.sinkhorn_c, max_iters: None })?;
    let says = report.verdict == SinkhornVerdict::Positive;
    if says == positive {
        Ok(Pass)
    } else {
        let best = report.trajectory.iter().map(|t| t.defect).fold(f64::INFINITY, f64::min);
        Ok(Fail(json!({
            "verdict": report.verdict.as_str(),
            "mixed_form_positive": positive,
            "iterations": report.iterations,
            "best_defect": best,
        })))
    }
}

fn step_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn scaling_fixed_points(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    if !case.p_hyperbolic() || case.n() > 12 || !mixed_positive(case)? {
        return Ok(Skip);
    }
    let start = ScalingState::at(&case.oracle, &case.ones(), 0)?;
    let moved = step_distance(&hs_step(&case.oracle, &start)?.alpha, &start.alpha);
    if (moved <= 1e-12) != (start.defect <= 1e-10) {
        return Ok(Fail(json!({ "point": "e", "step_length": moved, "defect": start.defect })));
    }
    let mut state = start;
    for _ in 0..2000 {
        if state.defect <= 1e-22 {
            break;
        }
        state = hs_step(&case.oracle, &state)?;
    }
    if state.defect > 1e-22 {
        return Ok(Pass);
    }
    let moved = step_distance(&hs_step(&case.oracle, &state)?.alpha, &state.alpha);
    let scale = state.alpha.iter().fold(1.0f64, |m, v| m.max(*v));
    if moved <= 1e-10 * scale {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "iteration": state.iteration, "defect": state.defect, "step_length": moved })))
    }
}

fn capacity_bounds(case: &Case, config: &VerifyConfig, rng: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Some(poly) = &case.expanded else { return Ok(Skip) };
    if case.n() > 8 || poly.terms().is_empty() || !hull_at_ones(case, poly, config)?.inside {
        return Ok(Skip);
    }
    let n = case.n();
    let cap = capacity_estimate(&case.oracle, 1e-7)?.capacity;
    if case.kind() == Kind::PowerSum && !close(cap, n as f64, 1e-3, 0.0) {
        return Err(anyhow!("capacity of the power sum is {cap}, expected {n}"));
    }
    let check_upper = case.kind().is_p_hyperbolic_family() || case.kind() == Kind::PowerSum;
    let mut worst_upper: Option<(Vec<f64>, f64)> = None;
    for _ in 0..100 {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5f64..1.5).exp()).collect();
        let lower = cap * x.iter().product::<f64>();
        let value = case.oracle.eval(&x)?;
        if value < lower * (1.0 - 1e-4) {
            return Err(anyhow!("q({x:?}) = {value} is below Cap·Πx = {lower}"));
        }
        if check_upper {
            let bound = capacity_upper_bound_at(&case.oracle, &x)?;
            if worst_upper.as_ref().is_none_or(|(_, b)| bound < *b) {
                worst_upper = Some((x, bound));
            }
        }
    }
    match worst_upper {
        Some((x, bound)) if bound < cap * (1.0 - 1e-4) => {
            Ok(Fail(json!({ "capacity": cap, "upper_bound_violated_at": x, "bound": bound })))
        }
        _ => Ok(Pass),
    }
}

fn is_doubly_stochastic(m: &Matrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        let r: f64 = m.row(i).iter().sum();
        let c: f64 = (0..n).map(|k| m[(k, i)]).sum();
        (r - 1.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12
    })
}

fn van_der_waerden(case: &Case, _: &VerifyConfig, _: &mut ChaCha8Rng) -> anyhow::Result<Check> {
    let Instance::Product(p) = case.oracle.instance() else { return Ok(Skip) };
    if !is_doubly_stochastic(p.matrix()) || case.n() > hyperpoly_core::capacity::MAX_VDW_N {
        return Ok(Skip);
    }
    let report = vdw_ratio(&case.oracle)?;
    if report.lower_bound_holds && report.upper_bound_holds {
        Ok(Pass)
    } else {
        Ok(Fail(json!({ "ratio": report.ratio, "lower_bound": report.lower_bound })))
    }
}
