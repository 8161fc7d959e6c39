//! The radial subgradient method: subgradient descent on `f^Γ` from
//! `y₀ = x₀/f(x₀)`, recovering `x_k = y_k/f^Γ(y_k)` at every step.

use ndarray::{Array1, ArrayView1};

use crate::algorithms::{SolveOptions, SolveTrace, Status, StepPolicy, TraceBuilder};
use crate::dual::DualOracle;
use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::{min_norm_in_hull, norm};

/// `y₀ = x₀/f(x₀)`, the dual image of the height-`f(x₀)` point above `x₀`.
pub(crate) fn initial_dual_point<D: DualOracle + ?Sized>(oracle: &D, x0: ArrayView1<f64>) -> Result<Array1<f64>> {
    if x0.len() != oracle.dim() {
        return Err(RadialError::DimensionMismatch { expected: oracle.dim(), found: x0.len() });
    }
    let f0 = oracle
        .primal_value(x0)
        .value()
        .ok_or_else(|| RadialError::NoFiniteValue(format!("f(x0) = {} must be finite and positive", oracle.primal_value(x0))))?;
    if oracle.constraint_gauge(x0) > 1.0 {
        return Err(RadialError::Config("x0 violates the constraints".into()));
    }
    Ok(x0.mapv(|t| t / f0))
}

pub fn radial_subgradient<D: DualOracle + ?Sized>(
    oracle: &D,
    x0: ArrayView1<f64>,
    policy: StepPolicy,
    opts: &SolveOptions,
) -> Result<SolveTrace> {
    policy.validate()?;
    let mut y = initial_dual_point(oracle, x0)?;
    let mut tb = TraceBuilder::new(y.len(), opts);
    let mut warm = None;

    for k in 0..opts.max_iters {
        let v = match oracle.dual_value(y.view(), warm) {
            Ok(ExtReal::Finite(v)) => v.get(),
            Ok(ExtReal::Zero) => {
                tb.trace.unbounded_ray = Some(y.clone());
                tb.trace.y.assign(&y);
                return Ok(tb.finish(Status::UnboundedCertificate));
            }
            Ok(ExtReal::Infinite) => return Ok(tb.finish(Status::Error("dual value is infinite".into()))),
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        warm = Some(v);
        let x = &y / v;
        let fx = oracle.primal_value(x.view()).to_f64();
        let gauge = oracle.constraint_gauge(x.view());

        let zeta = match oracle.dual_subgradient(y.view(), v) {
            Ok(z) => z,
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        let g2 = zeta.dot(&zeta);
        let gnorm = g2.sqrt();
        let step = if g2 > 0.0 { policy.step(v, g2) } else { 0.0 };
        let last = k + 1 == opts.max_iters;
        if let Some(done) = tb.observe(k, &y, &x, v, fx, gauge, gnorm, step, last || g2 == 0.0) {
            return Ok(tb.finish(done));
        }
        if g2 == 0.0 {
            return Ok(tb.finish(Status::Stationary));
        }
        if let Some(st) = opts.stationarity {
            let active = match oracle.active_subgradients(y.view(), v, st.slack) {
                Ok(a) => a,
                Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
            };
            let measure = norm(min_norm_in_hull(&active, 200).view());
            if tb.stationarity(measure) {
                return Ok(tb.finish(Status::Stationary));
            }
        }
        y.scaled_add(-step, &zeta);
    }
    Ok(tb.finish(Status::ItersExhausted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{DualSettings, RadialDual};
    use crate::problems::analytic::{affine_unbounded, cone, sqrt_ball};
    use ndarray::Array1;

    #[test]
    fn start_at_optimum_stays() {
        let d = RadialDual::new(sqrt_ball(3));
        let t = radial_subgradient(&d, Array1::zeros(3).view(), StepPolicy::Constant(0.1), &SolveOptions::iters(10).with_p_star(1.0))
            .unwrap();
        assert_eq!(t.status, Status::Stationary);
        assert_eq!(t.x, Array1::<f64>::zeros(3));
        assert!(t.best_rel_gap.unwrap().abs() < 1e-9);
    }

    #[test]
    fn unbounded_objective_is_certified() {
        let d = RadialDual::new(affine_unbounded(2));
        let t = radial_subgradient(&d, Array1::zeros(2).view(), StepPolicy::Constant(0.3), &SolveOptions::iters(100)).unwrap();
        assert_eq!(t.status, Status::UnboundedCertificate);
        assert!(t.unbounded_ray.unwrap()[0] >= 1.0);
    }

    #[test]
    fn polyak_without_target_is_rejected() {
        let d = RadialDual::new(cone(2));
        let r = radial_subgradient(&d, Array1::zeros(2).view(), StepPolicy::PolyakGap(None), &SolveOptions::iters(5));
        assert!(matches!(r, Err(RadialError::Config(_))));
    }

    #[test]
    fn polyak_on_sharp_cone_converges_fast() {
        let d = RadialDual::with_settings(cone(4), DualSettings::with_tol(1e-14));
        let mut x0 = Array1::zeros(4);
        x0[0] = 0.9;
        let opts = SolveOptions::iters(50).with_p_star(1.0).with_stop_tol(1e-10);
        let t = radial_subgradient(&d, x0.view(), StepPolicy::PolyakGap(Some(1.0)), &opts).unwrap();
        assert!(matches!(t.status, Status::TolReached | Status::Stationary));
        assert!(t.iterations <= 5);
    }
}
