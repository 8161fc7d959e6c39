//! Soft-max smoothing of finite-max duals and the accelerated method run on it.

use std::sync::Arc;

use ndarray::{Array1, ArrayView1};

use crate::algorithms::subgradient::initial_dual_point;
use crate::algorithms::{SolveOptions, SolveTrace, Status, TraceBuilder};
use crate::conditioning::smoothness_bound;
use crate::dual::{dual_eval, dual_gradient, DualOracle, RadialDual};
use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::norm;
use crate::objective::Objective;
use crate::problems::qp::{PolyhedralGauge, QpInstance, QuadraticPiece};

/// A smooth dual piece `f_j^Γ` with its gradient.
pub trait SmoothPiece: Send + Sync {
    fn value_grad(&self, y: ArrayView1<f64>) -> Result<(f64, Array1<f64>)>;
}

impl SmoothPiece for QuadraticPiece {
    fn value_grad(&self, y: ArrayView1<f64>) -> Result<(f64, Array1<f64>)> {
        QuadraticPiece::value_grad(self, y)
    }
}

impl<F: Objective> SmoothPiece for RadialDual<F> {
    fn value_grad(&self, y: ArrayView1<f64>) -> Result<(f64, Array1<f64>)> {
        match dual_eval(&self.source, y, &self.settings)? {
            ExtReal::Finite(v) => Ok((v.get(), dual_gradient(&self.source, y, v.get(), &self.settings)?)),
            ExtReal::Zero => Ok((0.0, Array1::zeros(y.len()))),
            ExtReal::Infinite => Err(RadialError::NoFiniteValue("smooth piece dual is infinite".into())),
        }
    }
}

/// `g_η(y) = η log(Σ_j exp(f_j^Γ(y)/η) + Σ_i exp(aᵢᵀy/(bᵢη)))`.
#[derive(Clone)]
pub struct SmoothedDual {
    pub pieces: Vec<Arc<dyn SmoothPiece>>,
    pub rows: Option<PolyhedralGauge>,
    pub eta: f64,
    /// Gradient Lipschitz constant used as the inverse step.
    pub l_eta: f64,
    /// The exact (unsmoothed) dual, for primal recovery.
    pub source: Arc<dyn DualOracle>,
}

/// Which reading of the row term in the default `L_η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowNorm {
    /// `max{1/R², ‖aᵢ/bᵢ‖²}`.
    #[default]
    Squared,
    /// `max{1/R², ‖aᵢ/bᵢ‖}`.
    Plain,
}

/// `(1 + D/R)³L + max{1/R², ‖aᵢ/bᵢ‖²}/η` (or the unsquared row norm).
pub fn default_l_eta(l: f64, d: f64, r: f64, max_row_norm_sq: f64, eta: f64, reading: RowNorm) -> f64 {
    let rows = match reading {
        RowNorm::Squared => max_row_norm_sq,
        RowNorm::Plain => max_row_norm_sq.sqrt(),
    };
    smoothness_bound(l, d, r) + (1.0 / (r * r)).max(rows) / eta
}

impl SmoothedDual {
    pub fn new(
        pieces: Vec<Arc<dyn SmoothPiece>>,
        rows: Option<PolyhedralGauge>,
        eta: f64,
        l_eta: f64,
        source: Arc<dyn DualOracle>,
    ) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(RadialError::Domain { what: "eta", value: eta });
        }
        if !(l_eta > 0.0 && l_eta.is_finite()) {
            return Err(RadialError::Domain { what: "L_eta", value: l_eta });
        }
        if pieces.is_empty() && rows.as_ref().is_none_or(|r| r.is_empty()) {
            return Err(RadialError::Config("smoothing needs at least one piece".into()));
        }
        Ok(SmoothedDual { pieces, rows, eta, l_eta, source })
    }

    /// The smoothing of a QP dual: the quadratic piece plus one row per constraint.
    pub fn for_qp(qp: Arc<QpInstance>, eta: f64, l_eta: f64) -> Result<Self> {
        let piece: Arc<dyn SmoothPiece> = Arc::new(qp.piece.clone());
        let rows = Some(qp.gauge.clone());
        Self::new(vec![piece], rows, eta, l_eta, qp)
    }

    /// `m₁ + m₂`, the number of smoothed terms.
    pub fn term_count(&self) -> usize {
        self.pieces.len() + self.rows.as_ref().map_or(0, |r| r.len())
    }
}

/// `(g_η(y), ∇g_η(y))`, with max-subtraction before exponentiating.
pub fn softmax_eval_grad(s: &SmoothedDual, y: ArrayView1<f64>) -> Result<(f64, Array1<f64>)> {
    let mut vals = Vec::with_capacity(s.pieces.len());
    let mut grads = Vec::with_capacity(s.pieces.len());
    for p in &s.pieces {
        let (v, g) = p.value_grad(y)?;
        vals.push(v);
        grads.push(g);
    }
    let row_vals = s.rows.as_ref().map(|r| r.row_values(y));
    let mx = vals
        .iter()
        .chain(row_vals.iter().flat_map(|r| r.iter()))
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let w: Vec<f64> = vals.iter().map(|v| ((v - mx) / s.eta).exp()).collect();
    let wr = row_vals.as_ref().map(|r| r.mapv(|v| ((v - mx) / s.eta).exp()));
    let z = w.iter().sum::<f64>() + wr.as_ref().map_or(0.0, |r| r.sum());
    let value = mx + s.eta * z.ln();

    let mut grad = Array1::zeros(y.len());
    for (wi, g) in w.iter().zip(&grads) {
        grad.scaled_add(wi / z, g);
    }
    if let (Some(rows), Some(wr)) = (&s.rows, wr) {
        grad += &rows.rows.t().dot(&(wr / z));
        rows.ops().add(rows.rows.len());
    }
    Ok((value, grad))
}

/// Accelerated gradient descent on `g_η` with step `1/L_η` and momentum
/// `(k-1)/(k+2)`, recovering the primal at each gradient-step point.
pub fn radial_smoothing(s: &SmoothedDual, x0: ArrayView1<f64>, opts: &SolveOptions) -> Result<SolveTrace> {
    let src = s.source.as_ref();
    let y0 = initial_dual_point(src, x0)?;
    smoothing_from(s, y0, opts)
}

/// As [`radial_smoothing`], starting from a given dual point.
pub fn smoothing_from(s: &SmoothedDual, y0: Array1<f64>, opts: &SolveOptions) -> Result<SolveTrace> {
    let src = s.source.as_ref();
    let mut tb = TraceBuilder::new(y0.len(), opts);
    let step = 1.0 / s.l_eta;
    let mut y = y0.clone();
    let mut y_tilde_prev = y0;

    for k in 0..opts.max_iters {
        let (_, grad) = match softmax_eval_grad(s, y.view()) {
            Ok(r) => r,
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        let y_tilde = &y - &(&grad * step);
        let v = match src.dual_value(y_tilde.view(), None) {
            Ok(ExtReal::Finite(v)) => v.get(),
            Ok(ExtReal::Zero) => {
                tb.trace.unbounded_ray = Some(y_tilde.clone());
                return Ok(tb.finish(Status::UnboundedCertificate));
            }
            Ok(ExtReal::Infinite) => return Ok(tb.finish(Status::Error("dual value is infinite".into()))),
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        let x = &y_tilde / v;
        let fx = src.primal_value(x.view()).to_f64();
        let gauge = src.constraint_gauge(x.view());
        let last = k + 1 == opts.max_iters;
        if let Some(done) = tb.observe(k, &y_tilde, &x, v, fx, gauge, norm(grad.view()), step, last) {
            return Ok(tb.finish(done));
        }
        let beta = opts.momentum(k);
        y = &y_tilde + &((&y_tilde - &y_tilde_prev) * beta);
        y_tilde_prev = y_tilde;
    }
    Ok(tb.finish(Status::ItersExhausted))
}
