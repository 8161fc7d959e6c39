//! Radial first-order methods, their step policies and traces, and
//! projection-based baselines.

use std::io::Write;
use std::time::Instant;

use ndarray::Array1;

use crate::error::{RadialError, Result};

pub mod accelerated;
pub mod baselines;
pub mod smoothing;
pub mod subgradient;

pub use accelerated::radial_accelerated;
pub use baselines::{
    accelerated_projected, dykstra_project, frank_wolfe, projected_gradient, BoxOracle, LinearOracle,
    ProjectionOptions,
};
pub use smoothing::{default_l_eta, radial_smoothing, smoothing_from, softmax_eval_grad, RowNorm, SmoothPiece, SmoothedDual};
pub use subgradient::radial_subgradient;

/// Step size rules for the radial subgradient method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    /// `(f^Γ(y) - d*)/‖ζ‖²`; requires the optimal dual value.
    PolyakGap(Option<f64>),
    /// `ε f^Γ(y)/‖ζ‖²`.
    RelativeEps(f64),
    /// `ε/‖ζ‖²`.
    NonconvexEps(f64),
    Constant(f64),
}

impl StepPolicy {
    pub fn validate(&self) -> Result<()> {
        let positive = |what: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(RadialError::Domain { what, value: v })
            }
        };
        match *self {
            StepPolicy::PolyakGap(None) => Err(RadialError::Config("polyak_gap steps need the optimal dual value d*".into())),
            StepPolicy::PolyakGap(Some(d)) => positive("d*", d),
            StepPolicy::RelativeEps(e) | StepPolicy::NonconvexEps(e) => positive("epsilon", e),
            StepPolicy::Constant(a) => positive("step size", a),
        }
    }

    /// The step for dual value `v` and squared subgradient norm `g2 > 0`.
    pub fn step(&self, v: f64, g2: f64) -> f64 {
        match *self {
            StepPolicy::PolyakGap(d) => (v - d.unwrap_or(0.0)).max(0.0) / g2,
            StepPolicy::RelativeEps(e) => e * v / g2,
            StepPolicy::NonconvexEps(e) => e / g2,
            StepPolicy::Constant(a) => a,
        }
    }
}

/// Options for the nonconvex stationarity measure: the minimum-norm element
/// of the hull of gradients of pieces within `slack` of the active value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationarity {
    pub slack: f64,
    /// Stop once the measure falls to this value.
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Known optimal primal value, enabling gap reporting.
    pub p_star: Option<f64>,
    /// Stop once `(p* - f(x_k))/p* <= stop_tol`.
    pub stop_tol: Option<f64>,
    /// Wall-clock budget.
    pub max_seconds: Option<f64>,
    pub stationarity: Option<Stationarity>,
    /// Record every `record_every`-th iterate (and always the last).
    pub record_every: usize,
    /// Use `max(0, (k-1)/(k+2))` instead of `(k-1)/(k+2)` for momentum.
    pub momentum_clip: bool,
    /// Keep the recovered primal iterates in the trace.
    pub keep_iterates: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iters: 1000,
            p_star: None,
            stop_tol: None,
            max_seconds: None,
            stationarity: None,
            record_every: 1,
            momentum_clip: false,
            keep_iterates: false,
        }
    }
}

impl SolveOptions {
    pub fn iters(max_iters: usize) -> Self {
        SolveOptions { max_iters, ..Self::default() }
    }

    pub fn with_p_star(mut self, p: f64) -> Self {
        self.p_star = Some(p);
        self
    }

    pub fn with_stop_tol(mut self, tol: f64) -> Self {
        self.stop_tol = Some(tol);
        self
    }

    /// The `(k-1)/(k+2)` momentum coefficient.
    pub fn momentum(&self, k: usize) -> f64 {
        let beta = (k as f64 - 1.0) / (k as f64 + 2.0);
        if self.momentum_clip {
            beta.max(0.0)
        } else {
            beta
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    ItersExhausted,
    TolReached,
    TimeBudget,
    UnboundedCertificate,
    Stationary,
    Error(String),
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::ItersExhausted => f.write_str("iters_exhausted"),
            Status::TolReached => f.write_str("tol_reached"),
            Status::TimeBudget => f.write_str("time_budget"),
            Status::UnboundedCertificate => f.write_str("unbounded_certificate"),
            Status::Stationary => f.write_str("stationary"),
            Status::Error(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub dual_value: f64,
    pub primal_value: f64,
    /// Smallest `(p* - f(x_j))/p*` over `j <= k`, when `p*` is known.
    pub rel_gap: Option<f64>,
    pub subgrad_norm: f64,
    pub step: f64,
    pub elapsed_seconds: f64,
}

pub const TRACE_HEADER: [&str; 7] = ["k", "dual_value", "primal_value", "rel_gap", "subgrad_norm", "step", "elapsed_seconds"];

/// A solver run: sampled per-iteration records plus running summaries over
/// every iterate.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub records: Vec<TraceRecord>,
    pub status: Status,
    /// Number of iterates evaluated.
    pub iterations: usize,
    /// Final dual point and its recovered primal point.
    pub y: Array1<f64>,
    pub x: Array1<f64>,
    pub best_x: Array1<f64>,
    pub best_primal: f64,
    /// Smallest dual value seen; `1/best_dual` bounds `p*` from above for
    /// the radial methods.
    pub best_dual: f64,
    /// Smallest `(p* - f(x_k))/f(x_k)`.
    pub best_rel_gap: Option<f64>,
    /// Smallest `(p* - f(x_k))/p*`.
    pub best_rel_gap_pstar: Option<f64>,
    /// Mean of `(p* - f(x_k))/p*` over all iterates.
    pub avg_rel_gap_pstar: Option<f64>,
    /// Smallest subgradient norm seen.
    pub best_subgrad_norm: f64,
    /// Smallest nonconvex stationarity measure seen, when requested.
    pub best_stationarity: Option<f64>,
    /// Largest constraint gauge over recovered iterates (feasible iff <= 1).
    pub max_constraint_gauge: f64,
    /// Smallest `f^Γ(y_k)·f(x_k) - 1` over iterates, the scale-free form of
    /// `f(x_k) >= 1/f^Γ(y_k)`: nonnegative up to evaluation tolerance.
    pub min_duality_margin: f64,
    /// The ray `y` certifying unboundedness, when found.
    pub unbounded_ray: Option<Array1<f64>>,
    /// Inner iterations of projection subproblems (baselines only).
    pub inner_iterations: usize,
    pub iterates: Vec<Array1<f64>>,
    pub elapsed_seconds: f64,
}

/// Accumulates a [`SolveTrace`] during a run.
pub(crate) struct TraceBuilder {
    trace: SolveTrace,
    opts: SolveOptions,
    start: Instant,
    gap_sum: f64,
    gap_count: usize,
    last: Option<(usize, f64, f64, f64, f64)>,
}

impl TraceBuilder {
    pub(crate) fn new(n: usize, opts: &SolveOptions) -> Self {
        TraceBuilder {
            trace: SolveTrace {
                records: Vec::new(),
                status: Status::ItersExhausted,
                iterations: 0,
                y: Array1::zeros(n),
                x: Array1::zeros(n),
                best_x: Array1::zeros(n),
                best_primal: f64::NEG_INFINITY,
                best_dual: f64::INFINITY,
                best_rel_gap: None,
                best_rel_gap_pstar: None,
                avg_rel_gap_pstar: None,
                best_subgrad_norm: f64::INFINITY,
                best_stationarity: None,
                max_constraint_gauge: 0.0,
                min_duality_margin: f64::INFINITY,
                unbounded_ray: None,
                inner_iterations: 0,
                iterates: Vec::new(),
                elapsed_seconds: 0.0,
            },
            opts: opts.clone(),
            start: Instant::now(),
            gap_sum: 0.0,
            gap_count: 0,
            last: None,
        }
    }

    /// Records iterate `k`; returns a status when the gap tolerance or the
    /// time budget stops the run.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn observe(
        &mut self,
        k: usize,
        y: &Array1<f64>,
        x: &Array1<f64>,
        dual_value: f64,
        primal_value: f64,
        gauge: f64,
        subgrad_norm: f64,
        step: f64,
        force_record: bool,
    ) -> Option<Status> {
        self.last = Some((k, dual_value, primal_value, subgrad_norm, step));
        let t = &mut self.trace;
        t.iterations = k + 1;
        t.y.assign(y);
        t.x.assign(x);
        t.max_constraint_gauge = t.max_constraint_gauge.max(gauge);
        t.min_duality_margin = t.min_duality_margin.min(dual_value * primal_value - 1.0);
        t.best_subgrad_norm = t.best_subgrad_norm.min(subgrad_norm);
        t.best_dual = t.best_dual.min(dual_value);
        if primal_value > t.best_primal {
            t.best_primal = primal_value;
            t.best_x.assign(x);
        }
        if self.opts.keep_iterates {
            t.iterates.push(x.clone());
        }
        let mut hit = false;
        if let Some(p) = self.opts.p_star {
            let rel = (p - primal_value) / primal_value;
            let rel_p = (p - primal_value) / p;
            t.best_rel_gap = Some(t.best_rel_gap.map_or(rel, |b| b.min(rel)));
            t.best_rel_gap_pstar = Some(t.best_rel_gap_pstar.map_or(rel_p, |b| b.min(rel_p)));
            self.gap_sum += rel_p;
            self.gap_count += 1;
            t.avg_rel_gap_pstar = Some(self.gap_sum / self.gap_count as f64);
            hit = self.opts.stop_tol.is_some_and(|tol| rel_p <= tol);
        }
        let elapsed = self.start.elapsed().as_secs_f64();
        t.elapsed_seconds = elapsed;
        if force_record || hit || k.is_multiple_of(self.opts.record_every.max(1)) {
            self.push_record(k, dual_value, primal_value, subgrad_norm, step, elapsed);
        }
        if hit {
            Some(Status::TolReached)
        } else if self.opts.max_seconds.is_some_and(|s| elapsed >= s) {
            Some(Status::TimeBudget)
        } else {
            None
        }
    }

    fn push_record(&mut self, k: usize, dual_value: f64, primal_value: f64, subgrad_norm: f64, step: f64, elapsed: f64) {
        let t = &mut self.trace;
        if t.records.last().is_some_and(|r| r.k == k) {
            return;
        }
        t.records.push(TraceRecord {
            k,
            dual_value,
            primal_value,
            rel_gap: t.best_rel_gap_pstar,
            subgrad_norm,
            step,
            elapsed_seconds: elapsed,
        });
    }

    pub(crate) fn stationarity(&mut self, measure: f64) -> bool {
        let t = &mut self.trace;
        t.best_stationarity = Some(t.best_stationarity.map_or(measure, |b| b.min(measure)));
        self.opts.stationarity.is_some_and(|s| measure <= s.target)
    }

    pub(crate) fn add_inner(&mut self, n: usize) {
        self.trace.inner_iterations += n;
    }

    pub(crate) fn finish(mut self, status: Status) -> SolveTrace {
        // make sure the final iterate is on record
        if let Some((k, dv, pv, g, s)) = self.last {
            let e = self.trace.elapsed_seconds;
            self.push_record(k, dv, pv, g, s, e);
        }
        self.trace.status = status;
        self.trace.elapsed_seconds = self.start.elapsed().as_secs_f64();
        self.trace
    }
}

impl SolveTrace {
    /// An empty trace for a run that could not start.
    pub fn failed(n: usize, err: RadialError) -> Self {
        TraceBuilder::new(n, &SolveOptions::iters(0)).finish(Status::Error(err.to_string()))
    }

    /// Writes the trace as CSV with the standard header. Missing gaps are
    /// empty fields.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| RadialError::Config(format!("writing trace: {e}"));
        wr.write_record(TRACE_HEADER).map_err(io)?;
        for r in &self.records {
            wr.write_record([
                r.k.to_string(),
                fmt_num(r.dual_value),
                fmt_num(r.primal_value),
                r.rel_gap.map(fmt_num).unwrap_or_default(),
                fmt_num(r.subgrad_norm),
                fmt_num(r.step),
                fmt_num(r.elapsed_seconds),
            ])
            .map_err(io)?;
        }
        wr.flush().map_err(|e| RadialError::Config(format!("writing trace: {e}")))?;
        Ok(())
    }

    /// First recorded iteration whose min-so-far gap is at most `target`.
    pub fn first_iteration_below(&self, target: f64) -> Option<usize> {
        self.records.iter().find(|r| r.rel_gap.is_some_and(|g| g <= target)).map(|r| r.k)
    }
}

/// Finite numbers print in shortest round-trip form; non-finite values are
/// clamped so `inf`/`nan` never reach a trace file.
fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v.is_infinite() {
        format!("{:e}", f64::MAX.copysign(v))
    } else {
        format!("{v}")
    }
}
