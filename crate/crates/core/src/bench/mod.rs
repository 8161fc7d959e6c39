//! Instance generation, the QP benchmark runner and problem files.

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use ndarray::Array1;
use serde::Deserialize;

use crate::algorithms::baselines::ProjectionOptions;
use crate::algorithms::{
    accelerated_projected, frank_wolfe, projected_gradient, radial_accelerated, radial_smoothing, radial_subgradient,
    BoxOracle, RowNorm, SmoothedDual, SolveOptions, SolveTrace, StepPolicy,
};
use crate::error::{RadialError, Result};
use crate::problems::qp::QpInstance;

pub mod generate;
pub mod problem_file;

pub use generate::{default_eta, generate_qp, reference_solve, QpConstants, ReferenceOptions, ReferenceSolution};
pub use problem_file::{load_problem, parse_problem, LoadedProblem};

/// Environment variable overriding the configured seed.
pub const SEED_ENV: &str = "RADIAL_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RadialSubgradient,
    RadialSmoothing,
    RadialAccelerated,
    ProjectedGradient,
    AcceleratedGradient,
    FrankWolfe,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::RadialSubgradient,
        Method::RadialSmoothing,
        Method::RadialAccelerated,
        Method::ProjectedGradient,
        Method::AcceleratedGradient,
        Method::FrankWolfe,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::RadialSubgradient => "radial_subgradient",
            Method::RadialSmoothing => "radial_smoothing",
            Method::RadialAccelerated => "radial_accelerated",
            Method::ProjectedGradient => "projected_gradient",
            Method::AcceleratedGradient => "accelerated_gradient",
            Method::FrankWolfe => "frank_wolfe",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = RadialError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| RadialError::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub iterations: Option<usize>,
    pub seconds: Option<f64>,
}

fn default_seed() -> u64 {
    1
}

fn default_eps() -> f64 {
    1e-3
}

/// Benchmark settings, read from TOML:
///
/// ```toml
/// sizes = [[50, 200, 20]]   # (n, m, r) triples
/// seed = 1
/// methods = ["radial_subgradient", "radial_smoothing"]
/// eps = 1e-3
/// [budget]
/// iterations = 20000
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub sizes: Vec<[usize; 3]>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub methods: Vec<Method>,
    pub budget: Budget,
    /// Target accuracy; sets the subgradient step and the default `η`.
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Smoothing parameter; defaults to `ε/(2 log(1 + m))`.
    pub eta: Option<f64>,
    /// Stop each run once its relative gap falls to this value.
    pub stop_tol: Option<f64>,
    #[serde(default)]
    pub momentum_clip: bool,
    /// Use `‖aᵢ/bᵢ‖` rather than its square in the smoothing constant.
    #[serde(default)]
    pub plain_row_norm: bool,
    /// Keep every `record_every`-th iterate in the CSVs.
    pub record_every: Option<usize>,
    /// Iterations per smoothing level of the reference solve.
    pub reference_stage_iters: Option<usize>,
    /// Add the largest (1600, 6400, 100) instance.
    #[serde(default)]
    pub large: bool,
}

impl BenchConfig {
    pub fn from_toml(src: &str) -> Result<Self> {
        let cfg: BenchConfig = toml::from_str(src).map_err(|e| RadialError::Config(format!("bench config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| RadialError::Config(format!("reading {}: {e}", path.display())))?;
        Self::from_toml(&src)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RadialError::Config(format!("bench config: {msg}")));
        if self.sizes.is_empty() && !self.large {
            return bad("field `sizes` is empty".into());
        }
        if let Some(s) = self.sizes.iter().find(|s| s.contains(&0)) {
            return bad(format!("field `sizes`: entries must be positive, got {s:?}"));
        }
        if self.methods.is_empty() {
            return bad("field `methods` is empty".into());
        }
        match self.budget {
            Budget { iterations: None, seconds: None } => return bad("field `budget` needs `iterations` or `seconds`".into()),
            Budget { iterations: Some(0), .. } => return bad("field `budget.iterations` must be positive".into()),
            Budget { seconds: Some(s), .. } if !(s > 0.0) => return bad("field `budget.seconds` must be positive".into()),
            _ => {}
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("field `eps` must lie in (0, 1), got {}", self.eps));
        }
        if self.eta.is_some_and(|e| !(e > 0.0)) {
            return bad("field `eta` must be positive".into());
        }
        Ok(())
    }

    /// Applies the seed precedence: command line, then `RADIAL_SEED`, then the file.
    pub fn resolve_seed(&mut self, cli: Option<u64>) -> Result<()> {
        let env = match std::env::var(SEED_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| RadialError::Config(format!("{SEED_ENV}={v} is not an unsigned integer")))?,
            ),
            Err(_) => None,
        };
        if let Some(s) = cli.or(env) {
            self.seed = s;
        }
        Ok(())
    }

    /// The instance sizes including the large one when requested.
    pub fn all_sizes(&self) -> Vec<[usize; 3]> {
        let mut s = self.sizes.clone();
        if self.large && !s.contains(&[1600, 6400, 100]) {
            s.push([1600, 6400, 100]);
        }
        s
    }

    fn solve_options(&self, p_star: f64) -> SolveOptions {
        let mut o = SolveOptions::iters(self.budget.iterations.unwrap_or(usize::MAX)).with_p_star(p_star);
        o.stop_tol = self.stop_tol;
        o.max_seconds = self.budget.seconds;
        o.momentum_clip = self.momentum_clip;
        o.record_every = self.record_every.unwrap_or(1);
        o
    }
}

/// Per-method parameters for a QP run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpRunParams {
    pub eps: f64,
    pub eta: Option<f64>,
    pub reading: RowNorm,
    pub projection: ProjectionOptions,
}

/// Runs one method on a QP from the origin.
pub fn run_qp_method(
    qp: &Arc<QpInstance>,
    consts: &QpConstants,
    method: Method,
    params: &QpRunParams,
    opts: &SolveOptions,
) -> Result<SolveTrace> {
    let x0 = Array1::zeros(qp.n());
    match method {
        Method::RadialSubgradient => radial_subgradient(qp.as_ref(), x0.view(), StepPolicy::RelativeEps(params.eps), opts),
        Method::RadialSmoothing => {
            let eta = params.eta.unwrap_or_else(|| default_eta(params.eps, qp.m()));
            let s = SmoothedDual::for_qp(qp.clone(), eta, consts.l_eta(eta, params.reading))?;
            radial_smoothing(&s, x0.view(), opts)
        }
        Method::RadialAccelerated => radial_accelerated(qp.as_ref(), x0.view(), consts.smooth_dual_bound(), opts),
        Method::ProjectedGradient => projected_gradient(qp, x0.view(), consts.l, params.projection, opts),
        Method::AcceleratedGradient => accelerated_projected(qp, x0.view(), consts.l, params.projection, opts),
        Method::FrankWolfe => {
            let (lo, hi) = qp
                .gauge
                .box_bounds()
                .ok_or_else(|| RadialError::Config("frank_wolfe needs a box-shaped feasible set".into()))?;
            frank_wolfe(&qp.piece, &BoxOracle::new(lo, hi)?, x0.view(), opts)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub instance: String,
    pub p_star: f64,
    pub status: String,
    pub iterations: usize,
    pub best_rel_gap: Option<f64>,
    pub seconds: f64,
    /// Multiply-adds spent in matrix products.
    pub op_count: u64,
    pub trace_path: PathBuf,
}

pub const SUMMARY_HEADER: [&str; 8] =
    ["method", "instance", "p_star", "status", "iterations", "best_rel_gap", "seconds", "op_count"];

/// Generates every configured instance, solves it to high accuracy for `p*`,
/// then runs each method and writes `<instance>_<method>.csv` plus
/// `summary.csv` into `out_dir`. Solver failures are recorded as the run's
/// status and do not stop the benchmark.
pub fn run_benchmark(cfg: &BenchConfig, out_dir: &Path) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir).map_err(|e| RadialError::Config(format!("creating {}: {e}", out_dir.display())))?;
    let params = QpRunParams {
        eps: cfg.eps,
        eta: cfg.eta,
        reading: if cfg.plain_row_norm { RowNorm::Plain } else { RowNorm::Squared },
        projection: ProjectionOptions::default(),
    };
    let mut rows = Vec::new();
    for (i, [n, m, r]) in cfg.all_sizes().into_iter().enumerate() {
        let seed = cfg.seed.wrapping_add(i as u64);
        let instance = format!("qp_n{n}_m{m}_r{r}_s{seed}");
        let qp = Arc::new(generate_qp(n, m, r, seed)?);
        let consts = QpConstants::estimate(&qp, 64, seed)?;
        let mut ro = ReferenceOptions::default();
        if let Some(k) = cfg.reference_stage_iters {
            ro.stage_iters = k;
        }
        let reference = reference_solve(&qp, &consts, &ro)?;
        let opts = cfg.solve_options(reference.p_star);
        for &method in &cfg.methods {
            qp.reset_op_count();
            let trace = run_qp_method(&qp, &consts, method, &params, &opts).unwrap_or_else(|e| SolveTrace::failed(n, e));
            let path = out_dir.join(format!("{instance}_{method}.csv"));
            let file = File::create(&path).map_err(|e| RadialError::Config(format!("creating {}: {e}", path.display())))?;
            trace.write_csv(BufWriter::new(file))?;
            rows.push(SummaryRow {
                method,
                instance: instance.clone(),
                p_star: reference.p_star,
                status: trace.status.to_string(),
                iterations: trace.iterations,
                best_rel_gap: trace.best_rel_gap_pstar,
                seconds: trace.elapsed_seconds,
                op_count: qp.op_count(),
                trace_path: path,
            });
        }
    }
    write_summary(&rows, &out_dir.join("summary.csv"))?;
    Ok(rows)
}

fn write_summary(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let io = |e: csv::Error| RadialError::Config(format!("writing summary: {e}"));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(SUMMARY_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.method.name().to_string(),
            r.instance.clone(),
            format!("{:e}", r.p_star),
            r.status.clone(),
            r.iterations.to_string(),
            r.best_rel_gap.map(|g| format!("{g:e}")).unwrap_or_default(),
            format!("{:.3}", r.seconds),
            r.op_count.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| RadialError::Config(format!("writing summary: {e}")))
}
