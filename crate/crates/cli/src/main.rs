//! `radial`: check, certify and solve problem files, and run the QP benchmark.
//!
//! Exit codes: 0 on success, 1 when a solver fails, 2 on invalid input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use radial_core::algorithms::baselines::ProjectionOptions;
use radial_core::algorithms::{radial_accelerated, radial_subgradient, RowNorm, Stationarity};
use radial_core::bench::{load_problem, run_benchmark, run_qp_method, BenchConfig, LoadedProblem, Method, QpConstants, QpRunParams};
use radial_core::conditioning::ConditioningReport;
use radial_core::linalg::direction_set;
use radial_core::{check_upper_radial, default_v_grid, RadialError, SolveOptions, SolveTrace, Status, StepPolicy};

#[derive(Parser)]
#[command(name = "radial", version, about = "Projection-free optimization through the radial dual")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the objective's perspective is nondecreasing along sampled rays.
    Check {
        problem: PathBuf,
        /// Random directions in addition to the coordinate axes.
        #[arg(long, default_value_t = 64)]
        directions: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the conditioning constants R, D, L and the derived dual bounds.
    Certify {
        problem: PathBuf,
        #[arg(long, default_value_t = 64)]
        directions: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run one method and write its trace as CSV.
    Solve(SolveArgs),
    /// Generate QP instances and run the configured methods on each.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Overrides RADIAL_SEED and the file's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the trace CSVs and summary.csv.
        #[arg(long, default_value = "bench-out")]
        output: PathBuf,
        /// Also run the (1600, 6400, 100) instance.
        #[arg(long)]
        large: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMethod {
    RadialSubgradient,
    RadialSmoothing,
    RadialAccelerated,
    ProjectedGradient,
    AcceleratedGradient,
    FrankWolfe,
}

impl From<CliMethod> for Method {
    fn from(m: CliMethod) -> Self {
        match m {
            CliMethod::RadialSubgradient => Method::RadialSubgradient,
            CliMethod::RadialSmoothing => Method::RadialSmoothing,
            CliMethod::RadialAccelerated => Method::RadialAccelerated,
            CliMethod::ProjectedGradient => Method::ProjectedGradient,
            CliMethod::AcceleratedGradient => Method::AcceleratedGradient,
            CliMethod::FrankWolfe => Method::FrankWolfe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StepKind {
    /// eps·f^Γ(y)/‖ζ‖²
    Relative,
    /// eps/‖ζ‖²
    Nonconvex,
    /// (f^Γ(y) - 1/p*)/‖ζ‖², needs --p-star
    Polyak,
    /// eps itself
    Constant,
}

#[derive(clap::Args)]
struct SolveArgs {
    problem: PathBuf,
    #[arg(long, value_enum)]
    method: CliMethod,
    /// Target accuracy: the subgradient step scale and the default smoothing level.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Smoothing parameter (default eps/(2 log(1 + m))).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Stop once the relative gap reaches this value (needs --p-star).
    #[arg(long)]
    tol: Option<f64>,
    /// Known optimal value, for gap reporting.
    #[arg(long)]
    p_star: Option<f64>,
    /// Clip the momentum coefficient at zero.
    #[arg(long)]
    momentum_clip: bool,
    /// Use ‖aᵢ/bᵢ‖ instead of its square in the smoothing constant.
    #[arg(long)]
    plain_row_norm: bool,
    #[arg(long, value_enum, default_value = "relative")]
    step: StepKind,
    /// Stop the subgradient method once the stationarity measure of the
    /// pieces within this slack of the maximum falls below --tol.
    #[arg(long)]
    stationarity_slack: Option<f64>,
    #[arg(long, default_value_t = 1)]
    record_every: usize,
    /// Trace CSV path; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure { code: 2, message: e.to_string() }
    }

    fn solver(e: impl std::fmt::Display) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

/// Setup errors are the caller's fault; anything else is a solver failure.
fn classify(e: RadialError) -> Failure {
    match e {
        RadialError::Config(_) | RadialError::Domain { .. } | RadialError::DimensionMismatch { .. } | RadialError::InvalidAnchor { .. } => {
            Failure::input(e)
        }
        _ => Failure::solver(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { problem, directions, seed } => check(&problem, directions, seed),
        Command::Certify { problem, directions, seed } => certify(&problem, directions, seed),
        Command::Solve(args) => solve(&args),
        Command::Bench { config, seed, output, large } => bench(&config, seed, &output, large),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("radial: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<LoadedProblem, Failure> {
    load_problem(path).map_err(Failure::input)
}

fn check(path: &Path, directions: usize, seed: u64) -> Result<(), Failure> {
    let p = load(path)?;
    let dirs = direction_set(p.dim(), directions, seed);
    let report = check_upper_radial(p.objective.as_ref(), &dirs, &default_v_grid(), p.settings.eps_mono);
    let mut out = io::stdout().lock();
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    let io_err = Failure::solver;
    writeln!(out, "{verdict}").map_err(io_err)?;
    writeln!(out, "pairs_checked={}", report.pairs_checked).map_err(io_err)?;
    writeln!(out, "violations={}", report.violations.len()).map_err(io_err)?;
    writeln!(out, "strictness_failures={}", report.strictness_failures.len()).map_err(io_err)?;
    for w in report.violations.iter().take(5) {
        writeln!(
            out,
            "witness y={} v1={:e} v2={:e} perspective1={} perspective2={}",
            w.y, w.v1, w.v2, w.p1, w.p2
        )
        .map_err(io_err)?;
    }
    Ok(())
}

fn certify(path: &Path, directions: usize, seed: u64) -> Result<(), Failure> {
    let p = load(path)?;
    let dirs = direction_set(p.dim(), directions, seed);
    let report = ConditioningReport::estimate(p.objective.as_ref(), &dirs, &p.settings).map_err(classify)?;
    let mut out = io::stdout().lock();
    for line in report.to_lines() {
        writeln!(out, "{line}").map_err(Failure::solver)?;
    }
    Ok(())
}

fn solve(a: &SolveArgs) -> Result<(), Failure> {
    let p = load(&a.problem)?;
    let mut opts = SolveOptions::iters(a.iters);
    opts.p_star = a.p_star;
    opts.stop_tol = a.tol;
    opts.momentum_clip = a.momentum_clip;
    opts.record_every = a.record_every;
    if let Some(slack) = a.stationarity_slack {
        opts.stationarity = Some(Stationarity { slack, target: a.tol.unwrap_or(0.0) });
    }
    if a.tol.is_some() && a.p_star.is_none() && a.stationarity_slack.is_none() {
        return Err(Failure::input("--tol needs --p-star or --stationarity-slack"));
    }
    let method = Method::from(a.method);
    let step = match a.step {
        StepKind::Relative => StepPolicy::RelativeEps(a.eps),
        StepKind::Nonconvex => StepPolicy::NonconvexEps(a.eps),
        StepKind::Polyak => StepPolicy::PolyakGap(a.p_star.map(|p| 1.0 / p)),
        StepKind::Constant => StepPolicy::Constant(a.eps),
    };
    let trace = match (&p.qp, method) {
        (_, Method::RadialSubgradient) => radial_subgradient(p.oracle.as_ref(), p.x0.view(), step, &opts).map_err(classify)?,
        (Some(qp), m) => {
            let consts = QpConstants::estimate(qp, 64, 1).map_err(classify)?;
            let params = QpRunParams {
                eps: a.eps,
                eta: a.eta,
                reading: if a.plain_row_norm { RowNorm::Plain } else { RowNorm::Squared },
                projection: ProjectionOptions::default(),
            };
            run_qp_method(qp, &consts, m, &params, &opts).map_err(classify)?
        }
        (None, Method::RadialAccelerated) => {
            let dirs = direction_set(p.dim(), 64, 1);
            let report = ConditioningReport::estimate(p.objective.as_ref(), &dirs, &p.settings).map_err(classify)?;
            let l = report
                .smooth_dual_bound
                .ok_or_else(|| Failure::input("radial_accelerated needs a level-set smoothness bound, which this objective lacks"))?;
            radial_accelerated(p.oracle.as_ref(), p.x0.view(), l, &opts).map_err(classify)?
        }
        (None, m) => return Err(Failure::input(format!("{m} needs a qp problem, got type `{}`", p.kind))),
    };
    write_trace(&trace, a.output.as_deref())?;
    eprintln!("status={} iterations={} best_primal={:e}", trace.status, trace.iterations, trace.best_primal);
    if let Some(g) = trace.best_rel_gap_pstar {
        eprintln!("best_rel_gap={g:e}");
    }
    match trace.status {
        Status::Error(e) => Err(Failure::solver(e)),
        _ => Ok(()),
    }
}

fn write_trace(trace: &SolveTrace, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::input(format!("creating {}: {e}", path.display())))?;
            trace.write_csv(BufWriter::new(f)).map_err(Failure::solver)
        }
        None => trace.write_csv(io::stdout().lock()).map_err(Failure::solver),
    }
}

fn bench(config: &Path, seed: Option<u64>, output: &Path, large: bool) -> Result<(), Failure> {
    let mut cfg = BenchConfig::from_path(config).map_err(Failure::input)?;
    cfg.resolve_seed(seed).map_err(Failure::input)?;
    cfg.large |= large;
    let rows = run_benchmark(&cfg, output).map_err(classify)?;
    let mut out = io::stdout().lock();
    let io_err = Failure::solver;
    writeln!(out, "{:<22} {:<28} {:>10} {:>12} {:>9}  status", "method", "instance", "iterations", "best_rel_gap", "seconds")
        .map_err(io_err)?;
    for r in &rows {
        let gap = r.best_rel_gap.map_or_else(|| "-".to_string(), |g| format!("{g:.3e}"));
        writeln!(out, "{:<22} {:<28} {:>10} {:>12} {:>9.2}  {}", r.method.name(), r.instance, r.iterations, gap, r.seconds, r.status)
            .map_err(io_err)?;
    }
    writeln!(out, "wrote {}", output.join("summary.csv").display()).map_err(io_err)?;
    Ok(())
}
