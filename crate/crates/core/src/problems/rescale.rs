//! Rescaling `f ↦ (1 + λf)₊` so that a bounded nonconcave objective becomes
//! upper radial without changing its maximizers.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::objective::Objective;
use crate::problems::RawObjective;

#[derive(Debug, Clone)]
pub struct Rescaled<R> {
    pub raw: R,
    pub lambda: f64,
}

impl<R: RawObjective> Objective for Rescaled<R> {
    fn dim(&self) -> usize {
        self.raw.dim()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        let v = 1.0 + self.lambda * self.raw.value(x);
        if v.is_nan() {
            ExtReal::Zero
        } else {
            ExtReal::positive_part(v)
        }
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        self.raw.gradient(x).map(|g| g * self.lambda)
    }

    fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> {
        self.raw.hessian(x).map(|h| h * self.lambda)
    }

    fn is_concave(&self) -> bool {
        self.raw.is_concave()
    }

    fn is_differentiable(&self) -> bool {
        true
    }
}

/// The largest sampled `(∇f(x), -1)ᵀ(x, f(x))`, skipping points outside the domain.
pub fn radiality_margin<R: RawObjective + ?Sized>(raw: &R, samples: &[Array1<f64>]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    let mut seen = 0;
    for x in samples {
        let fx = raw.value(x.view());
        let Some(g) = raw.gradient(x.view()) else { continue };
        if !fx.is_finite() {
            continue;
        }
        seen += 1;
        worst = worst.max(g.dot(x) - fx);
    }
    if seen == 0 {
        return Err(RadialError::EmptySamples);
    }
    Ok(worst)
}

/// Chooses `λ = 0.5 / max_x (∇f(x), -1)ᵀ(x, f(x))` over the samples (or 1
/// when that maximum is not positive), half the largest admissible value.
pub fn lambda_rescale<R: RawObjective>(raw: R, samples: &[Array1<f64>]) -> Result<(f64, Rescaled<R>)> {
    if samples.is_empty() {
        return Err(RadialError::EmptySamples);
    }
    let worst = radiality_margin(&raw, samples)?;
    let lambda = if worst > 0.0 { 0.5 / worst } else { 1.0 };
    Ok((lambda, Rescaled { raw, lambda }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::qp::{QpRaw, QuadraticMatrix};
    use ndarray::array;

    #[test]
    fn concave_raw_keeps_unit_lambda() {
        let raw = QpRaw { q: QuadraticMatrix::Dense(Array2::eye(2)), c: array![0.0, 0.0] };
        let samples = vec![array![1.0, 0.0], array![0.5, -2.0]];
        let (lam, _) = lambda_rescale(raw, &samples).unwrap();
        assert_eq!(lam, 1.0);
    }

    #[test]
    fn nonconcave_quadratic_margin() {
        // -(½xᵀQx) with Q = -I gives margin ½‖x‖²
        let raw = QpRaw { q: QuadraticMatrix::Dense(-Array2::<f64>::eye(2)), c: array![0.0, 0.0] };
        let samples = vec![array![1.0, 1.0], array![0.0, 0.5]];
        let (lam, r) = lambda_rescale(raw, &samples).unwrap();
        assert!((lam - 0.5).abs() < 1e-15);
        assert_eq!(r.lambda, lam);
        assert!(lambda_rescale(r.raw, &[]).is_err());
    }
}
