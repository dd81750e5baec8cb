//! Argument parsing and subcommand dispatch.
//!
//! Every subcommand produces one JSON report. Exit status 0 means success,
//! 1 an inconclusive decision or a failed verification, 2 bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use hyperpoly_core::calculus::{
    brute_mixed_discriminant, gradient, partial_derivative, polarization_mixed_derivative,
    random_complex_mixed_derivative, ryser_permanent, MAX_MIXED_DISCRIMINANT_N, MAX_PERMANENT_N,
};
use hyperpoly_core::capacity::{capacity_estimate, decide_polytope_with, vdw_ratio, DecideOptions, Verdict};
use hyperpoly_core::combinatorics::{hall_condition, newton_polytope_contains_with_tol, rado_check, separating_subset};
use hyperpoly_core::oracle::expand;
use hyperpoly_core::scaling::{sinkhorn_decide_with, SinkhornOptions};
use hyperpoly_core::spectra::{rank_p_with_tol, roots_in_direction, trace_in_direction};
use hyperpoly_core::{Error, ExponentVector, Instance, PolynomialOracle};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bench::{bench, render};
use crate::instance::Loaded;
use crate::verify::{verify_corpus, VerifyConfig};

pub const SCHEMA: &str = "1";

#[derive(Debug, Parser)]
#[command(
    name = "hyperpoly",
    version,
    about = "Support and Newton-polytope membership for polynomials given by evaluation oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Options shared by all subcommands.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Instance file in the JSON instance format.
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative threshold below which restriction roots do not count toward the rank.
    #[arg(long, global = true, default_value_t = hyperpoly_core::spectra::DEFAULT_RANK_TOL)]
    pub root_tol: f64,
    /// Accuracy of the convex minimization in the polytope decision.
    #[arg(long, global = true, default_value_t = hyperpoly_core::capacity::DEFAULT_DELTA)]
    pub delta: f64,
    /// Distance tolerance for hull membership.
    #[arg(long, global = true, default_value_t = hyperpoly_core::combinatorics::DEFAULT_HULL_TOL)]
    pub hull_tol: f64,
    /// Constant c in the scaling iteration budget c·n·max(1, ln q(e)).
    #[arg(long, global = true, default_value_t = hyperpoly_core::scaling::DEFAULT_SINKHORN_C)]
    pub sinkhorn_c: f64,
    /// Sample count for randomized checks.
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate the polynomial at a point.
    Eval {
        /// Comma-separated coordinates; defaults to all ones.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
    },
    /// One partial derivative, or the gradient when no index is given.
    Derivative {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        /// Zero-based variable index.
        #[arg(long)]
        index: Option<usize>,
    },
    /// The mixed derivative ∂ⁿ/∂x₁…∂xₙ by polarization.
    Mixedform {
        /// Also run the complex Monte Carlo estimator with this many samples.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// The p-rank of a point in a direction.
    Rank {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
    },
    /// Roots of t ↦ p(x − t·d).
    Roots {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
    },
    /// Decide whether the all-ones vector lies in the Newton polytope.
    Decide {
        /// Bound on the reciprocal distance from e to the polytope.
        #[arg(long)]
        distance_promise: Option<f64>,
        /// Lower bound on the nonzero coefficients.
        #[arg(long, default_value_t = 1.0)]
        min_coef: f64,
    },
    /// Estimate the capacity inf q(α) over α > 0 with Π α = 1.
    Capacity {
        #[arg(long, default_value_t = 1e-6)]
        accuracy: f64,
        /// Also report the ratio of the mixed derivative to the capacity.
        #[arg(long)]
        vdw: bool,
    },
    /// Decide positivity of the mixed derivative by hyperbolic Sinkhorn scaling.
    Sinkhorn {
        #[arg(long)]
        max_iters: Option<usize>,
        /// Write the defect trajectory here as JSON lines.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Rank condition on the matrices of a determinantal instance.
    Rado,
    /// Subset condition on the expanded support.
    Hall,
    /// Hull membership of a point in the expanded support's Newton polytope.
    Polytope {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
    },
    /// Run every verification suite over a corpus directory.
    Verify {
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Oracle-call table on random product instances.
    Bench {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 9)]
        n_max: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Derivative { .. } => "derivative",
            Command::Mixedform { .. } => "mixedform",
            Command::Rank { .. } => "rank",
            Command::Roots { .. } => "roots",
            Command::Decide { .. } => "decide",
            Command::Capacity { .. } => "capacity",
            Command::Sinkhorn { .. } => "sinkhorn",
            Command::Rado => "rado",
            Command::Hall => "hall",
            Command::Polytope { .. } => "polytope",
            Command::Verify { .. } => "verify",
            Command::Bench { .. } => "bench",
        }
    }
}

/// The shipped corpus.
pub fn default_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Finding,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Finding => 1,
        }
    }
}

#[derive(Serialize)]
struct Tolerances {
    root_tol: f64,
    delta: f64,
    hull_tol: f64,
    sinkhorn_c: f64,
    trials: usize,
}

#[derive(Serialize)]
struct InstanceInfo {
    name: String,
    kind: &'static str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
}

#[derive(Serialize)]
struct Envelope {
    schema: &'static str,
    command: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<InstanceInfo>,
    seed: u64,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_calls: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// A finished run: the report text and the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub exit_code: i32,
}

/// Parses `argv` (including the program name) and runs it.
pub fn run_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            Outcome { report: e.to_string(), exit_code: code }
        }
    }
}

/// Runs a parsed command line; the report is also written to `--out` when
/// given.
pub fn run(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let c = &cli.common;
    let mut envelope = Envelope {
        schema: SCHEMA,
        command: cli.command.name(),
        status: "ok",
        instance: None,
        seed: c.seed,
        tolerances: Tolerances {
            root_tol: c.root_tol,
            delta: c.delta,
            hull_tol: c.hull_tol,
            sinkhorn_c: c.sinkhorn_c,
            trials: c.trials,
        },
        oracle_calls: None,
        wall_time_ms: None,
        result: None,
        error: None,
    };
    let exit_code = match execute(cli, &mut envelope) {
        Ok((result, status)) => {
            envelope.result = Some(result);
            envelope.status = match status {
                Status::Ok => "ok",
                Status::Finding => "finding",
            };
            status.exit_code()
        }
        Err(e) => {
            envelope.status = "error";
            envelope.error = Some(format!("{e:#}"));
            2
        }
    };
    // the verify report must be reproducible byte for byte
    if !matches!(cli.command, Command::Verify { .. }) {
        envelope.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    let mut report = serde_json::to_string_pretty(&envelope).expect("report serializes");
    report.push('\n');
    if let Some(path) = &c.out {
        if let Err(e) = fs::write(path, &report) {
            return Outcome { report: format!("cannot write {}: {e}", path.display()), exit_code: 2 };
        }
    }
    Outcome { report, exit_code }
}

fn check_config(c: &Common) -> anyhow::Result<()> {
    for (name, v) in
        [("root-tol", c.root_tol), ("delta", c.delta), ("hull-tol", c.hull_tol), ("sinkhorn-c", c.sinkhorn_c)]
    {
        if !(v > 0.0 && v.is_finite()) {
            bail!("--{name} must be positive, got {v}");
        }
    }
    Ok(())
}

fn load_instance(c: &Common) -> anyhow::Result<Loaded> {
    let path = c.instance.as_ref().ok_or_else(|| anyhow!("--instance is required"))?;
    Loaded::load(path)
}

fn vector_or_ones(v: &Option<Vec<f64>>, n: usize, what: &str) -> anyhow::Result<Vec<f64>> {
    match v {
        None => Ok(vec![1.0; n]),
        Some(v) if v.len() == n => Ok(v.clone()),
        Some(v) => bail!("--{what} has {} entries, expected {n}", v.len()),
    }
}

fn execute(cli: &Cli, envelope: &mut Envelope) -> anyhow::Result<(Value, Status)> {
    let c = &cli.common;
    check_config(c)?;
    match &cli.command {
        Command::Verify { corpus } => {
            let config = VerifyConfig {
                seed: c.seed,
                trials: c.trials,
                root_tol: c.root_tol,
                delta: c.delta,
                hull_tol: c.hull_tol,
                sinkhorn_c: c.sinkhorn_c,
            };
            let dir = corpus.clone().unwrap_or_else(default_corpus);
            let report = verify_corpus(&dir, &config)?;
            let status = if report.passed { Status::Ok } else { Status::Finding };
            return Ok((serde_json::to_value(&report)?, status));
        }
        Command::Bench { n_min, n_max } => {
            if *n_min < 1 || n_min > n_max || *n_max > 20 {
                bail!("bench sizes must satisfy 1 <= n-min <= n-max <= 20");
            }
            let report = bench(*n_min..=*n_max, c.trials.min(1000), c.seed, c.delta, c.sinkhorn_c)?;
            eprint!("{}", render(&report));
            let exact = report.rows.iter().all(|r| r.polarization_calls == r.polarization_expected);
            let status = if exact { Status::Ok } else { Status::Finding };
            return Ok((serde_json::to_value(&report)?, status));
        }
        _ => {}
    }
    let loaded = load_instance(c)?;
    envelope.instance = Some(InstanceInfo {
        name: loaded.name.clone(),
        kind: loaded.oracle.kind().as_str(),
        n: loaded.oracle.n(),
        expected: loaded.file.expected.clone(),
    });
    let oracle = &loaded.oracle;
    let before = oracle.call_count();
    let out = instance_command(&cli.command, c, oracle);
    envelope.oracle_calls = Some(oracle.call_count() - before);
    out
}

fn instance_command(command: &Command, c: &Common, oracle: &PolynomialOracle) -> anyhow::Result<(Value, Status)> {
    let n = oracle.n();
    let ok = |v: Value| Ok((v, Status::Ok));
    match command {
        Command::Eval { point } => {
            let x = vector_or_ones(point, n, "point")?;
            let value = oracle.eval(&x)?;
            ok(json!({ "point": x, "value": value }))
        }
        Command::Derivative { point, index } => {
            let x = vector_or_ones(point, n, "point")?;
            match index {
                Some(i) if *i >= n => bail!("--index {i} out of range for n = {n}"),
                Some(i) => ok(json!({ "point": x, "index": i, "value": partial_derivative(oracle, &x, *i)? })),
                None => ok(json!({ "point": x, "gradient": gradient(oracle, &x)? })),
            }
        }
        Command::Mixedform { samples } => {
            let value = polarization_mixed_derivative(oracle)?;
            let mut result = json!({ "polarization": value });
            match oracle.instance() {
                Instance::Product(p) if n <= MAX_PERMANENT_N => {
                    result["ryser_permanent"] = json!(ryser_permanent(p.matrix())?);
                }
                Instance::Determinantal(d) if n <= MAX_MIXED_DISCRIMINANT_N => {
                    result["mixed_discriminant"] = json!(brute_mixed_discriminant(d.matrices())?);
                }
                _ => {}
            }
            if *samples > 0 {
                result["monte_carlo"] = json!(random_complex_mixed_derivative(oracle, *samples, c.seed)?);
            }
            ok(result)
        }
        Command::Rank { point, direction } => {
            let x = vector_or_ones(point, n, "point")?;
            let d = vector_or_ones(direction, n, "direction")?;
            let report = rank_p_with_tol(oracle, &x, &d, c.root_tol)?;
            ok(json!({ "point": x, "direction": d, "rank": report }))
        }
        Command::Roots { point, direction } => {
            let x = vector_or_ones(point, n, "point")?;
            let d = vector_or_ones(direction, n, "direction")?;
            let profile = roots_in_direction(oracle, &x, &d)?;
            let trace = trace_in_direction(oracle, &x, &d)?;
            let roots: Vec<[f64; 2]> = profile.roots.iter().map(|z| [z.re, z.im]).collect();
            let real =
                profile.max_imag <= hyperpoly_core::spectra::HYPERBOLIC_IMAG_TOL * profile.spectral_radius().max(1.0);
            ok(json!({
                "point": x,
                "direction": d,
                "roots": roots,
                "max_imag": profile.max_imag,
                "all_real": real,
                "trace": trace,
                "coefficients": profile.coefficients,
            }))
        }
        Command::Decide { distance_promise, min_coef } => {
            let options =
                DecideOptions { delta: c.delta, distance_promise: *distance_promise, min_coefficient: *min_coef };
            let report = decide_polytope_with(oracle, &options)?;
            let status = if report.verdict == Verdict::Inconclusive { Status::Finding } else { Status::Ok };
            Ok((serde_json::to_value(&report)?, status))
        }
        Command::Capacity { accuracy, vdw } => {
            let mut result = match capacity_estimate(oracle, *accuracy) {
                Ok(est) => json!({ "bounded": true, "estimate": est }),
                Err(Error::Unbounded(v)) => json!({ "bounded": false, "capacity": 0.0, "min_log_value_found": v }),
                Err(e) => return Err(e.into()),
            };
            result["accuracy"] = json!(accuracy);
            if *vdw {
                result["vdw"] = serde_json::to_value(vdw_ratio(oracle)?)?;
            }
            ok(result)
        }
        Command::Sinkhorn { max_iters, trajectory } => {
            let report = sinkhorn_decide_with(oracle, &SinkhornOptions { c: c.sinkhorn_c, max_iters: *max_iters })?;
            let mut value = serde_json::to_value(&report)?;
            if let Some(path) = trajectory {
                let mut lines = String::new();
                for p in &report.trajectory {
                    lines.push_str(&serde_json::to_string(p)?);
                    lines.push('\n');
                }
                fs::write(path, lines).with_context(|| format!("writing {}", path.display()))?;
                value["trajectory"] = json!(path.display().to_string());
            }
            ok(value)
        }
        Command::Rado => {
            let Instance::Determinantal(d) = oracle.instance() else {
                bail!("rado needs a determinantal instance, got {}", oracle.kind().as_str());
            };
            let report = rado_check(d)?;
            let mut value = json!({ "rado": report });
            if n <= MAX_MIXED_DISCRIMINANT_N {
                value["mixed_discriminant"] = json!(brute_mixed_discriminant(d.matrices())?);
            }
            ok(value)
        }
        Command::Hall => {
            let supp = expand(oracle)?.support();
            let report = hall_condition(&supp)?;
            let certificate = separating_subset(&supp)?;
            ok(json!({ "support_size": supp.len(), "hall": report, "certificate": certificate }))
        }
        Command::Polytope { point } => {
            let x = vector_or_ones(point, n, "point")?;
            let supp = expand(oracle)?.support();
            let report = newton_polytope_contains_with_tol(&supp, &x, c.hull_tol)?;
            let member = x.iter().all(|v| v.fract() == 0.0 && *v >= 0.0)
                && ExponentVector::new(x.iter().map(|v| *v as u32).collect()).is_ok_and(|r| supp.contains(&r));
            ok(json!({ "point": x, "support_size": supp.len(), "in_support": member, "hull": report }))
        }
        Command::Verify { .. } | Command::Bench { .. } => unreachable!("handled before loading an instance"),
    }
}
