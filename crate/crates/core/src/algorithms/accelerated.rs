//! Accelerated gradient descent on a smooth radial dual.

use ndarray::ArrayView1;

use crate::algorithms::subgradient::initial_dual_point;
use crate::algorithms::{SolveOptions, SolveTrace, Status, TraceBuilder};
use crate::dual::DualOracle;
use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::norm;

/// Gradient steps of length `1/step_l` on `f^Γ` with momentum `(k-1)/(k+2)`.
/// `step_l` should bound the dual gradient's Lipschitz constant, for
/// instance `(1 + D/R)³L`.
pub fn radial_accelerated<D: DualOracle + ?Sized>(
    oracle: &D,
    x0: ArrayView1<f64>,
    step_l: f64,
    opts: &SolveOptions,
) -> Result<SolveTrace> {
    if !(step_l > 0.0 && step_l.is_finite()) {
        return Err(RadialError::Domain { what: "step constant", value: step_l });
    }
    let y0 = initial_dual_point(oracle, x0)?;
    let mut tb = TraceBuilder::new(y0.len(), opts);
    let step = 1.0 / step_l;
    let mut y = y0.clone();
    let mut y_tilde_prev = y0;
    let mut warm = None;

    for k in 0..opts.max_iters {
        let grad = match oracle.dual_value(y.view(), warm) {
            Ok(ExtReal::Finite(v)) => match oracle.dual_subgradient(y.view(), v.get()) {
                Ok(g) => g,
                Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
            },
            Ok(ExtReal::Zero) => {
                tb.trace.unbounded_ray = Some(y.clone());
                return Ok(tb.finish(Status::UnboundedCertificate));
            }
            Ok(ExtReal::Infinite) => return Ok(tb.finish(Status::Error("dual value is infinite".into()))),
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        let y_tilde = &y - &(&grad * step);
        let v = match oracle.dual_value(y_tilde.view(), warm) {
            Ok(ExtReal::Finite(v)) => v.get(),
            Ok(ExtReal::Zero) => {
                tb.trace.unbounded_ray = Some(y_tilde.clone());
                return Ok(tb.finish(Status::UnboundedCertificate));
            }
            Ok(ExtReal::Infinite) => return Ok(tb.finish(Status::Error("dual value is infinite".into()))),
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        warm = Some(v);
        let x = &y_tilde / v;
        let fx = oracle.primal_value(x.view()).to_f64();
        let gauge = oracle.constraint_gauge(x.view());
        let gnorm = norm(grad.view());
        let last = k + 1 == opts.max_iters;
        if let Some(done) = tb.observe(k, &y_tilde, &x, v, fx, gauge, gnorm, step, last || gnorm == 0.0) {
            return Ok(tb.finish(done));
        }
        if gnorm == 0.0 {
            return Ok(tb.finish(Status::Stationary));
        }
        let beta = opts.momentum(k);
        y = &y_tilde + &((&y_tilde - &y_tilde_prev) * beta);
        y_tilde_prev = y_tilde;
    }
    Ok(tb.finish(Status::ItersExhausted))
}
