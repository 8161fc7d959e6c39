//! Poisson log-likelihood and the translate-and-truncate construction that
//! turns an extended-real objective into a nonnegative one.

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::error::{check_dim, RadialError, Result};
use crate::ext_real::ExtReal;
use crate::objective::Objective;
use crate::problems::penalty::Penalty;
use crate::problems::RawObjective;

/// `L(x) = Σ bᵢ log(aᵢᵀx) - aᵢᵀx` on `{aᵢᵀx > 0 for all i}`, `-∞` elsewhere.
#[derive(Debug, Clone)]
pub struct PoissonLoglik {
    /// Sensing vectors as rows.
    pub a: Array2<f64>,
    pub b: Array1<f64>,
}

pub fn poisson_loglik(a: Array2<f64>, b: Array1<f64>) -> Result<PoissonLoglik> {
    check_dim(a.nrows(), b.len())?;
    if let Some(&bad) = b.iter().find(|&&bi| !(bi >= 0.0 && bi.is_finite())) {
        return Err(RadialError::Domain { what: "Poisson count b_i (nonnegative)", value: bad });
    }
    Ok(PoissonLoglik { a, b })
}

impl PoissonLoglik {
    fn rates(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        let ax = self.a.dot(&x);
        ax.iter().all(|&r| r > 0.0).then_some(ax)
    }
}

impl RawObjective for PoissonLoglik {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: ArrayView1<f64>) -> f64 {
        match self.rates(x) {
            Some(ax) => ax.iter().zip(self.b.iter()).map(|(&r, &bi)| bi * r.ln() - r).sum(),
            None => f64::NEG_INFINITY,
        }
    }

    fn gradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        let ax = self.rates(x)?;
        let w: Array1<f64> = ax.iter().zip(self.b.iter()).map(|(&r, &bi)| bi / r - 1.0).collect();
        Some(self.a.t().dot(&w))
    }

    fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> {
        let ax = self.rates(x)?;
        let n = self.a.ncols();
        let mut h = Array2::zeros((n, n));
        for ((row, &r), &bi) in self.a.axis_iter(Axis(0)).zip(ax.iter()).zip(self.b.iter()) {
            let w = -bi / (r * r);
            for i in 0..n {
                for j in 0..n {
                    h[[i, j]] += w * row[i] * row[j];
                }
            }
        }
        Some(h)
    }

    fn is_concave(&self) -> bool {
        true
    }
}

/// `raw(x) - Σσ(xᵢ)`, a penalized raw objective.
pub struct Penalized<R> {
    pub raw: R,
    pub penalty: Penalty,
}

impl<R: RawObjective> RawObjective for Penalized<R> {
    fn dim(&self) -> usize {
        self.raw.dim()
    }

    fn value(&self, x: ArrayView1<f64>) -> f64 {
        self.raw.value(x) - self.penalty.value(x)
    }

    fn gradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        Some(self.raw.gradient(x)? - self.penalty.gradient(x))
    }

    fn is_concave(&self) -> bool {
        false
    }
}

/// `g(x) = (raw(x + x0) - u0)₊`.
#[derive(Debug, Clone)]
pub struct Truncated<R> {
    pub raw: R,
    pub x0: Array1<f64>,
    pub u0: f64,
}

/// Translates `raw` so that `x0` sits at the origin and truncates at level `u0`.
pub fn translate_truncate<R: RawObjective>(raw: R, x0: Array1<f64>, u0: f64) -> Result<Truncated<R>> {
    check_dim(raw.dim(), x0.len())?;
    let v = raw.value(x0.view());
    if !(v > u0) {
        return Err(RadialError::InvalidAnchor { value: v, u0 });
    }
    Ok(Truncated { raw, x0, u0 })
}

impl<R> Truncated<R> {
    /// Maps a point of the translated problem back to the original coordinates.
    pub fn untranslate(&self, x: ArrayView1<f64>) -> Array1<f64> {
        &x + &self.x0
    }
}

impl<R: RawObjective> Objective for Truncated<R> {
    fn dim(&self) -> usize {
        self.x0.len()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        let v = self.raw.value(self.untranslate(x).view()) - self.u0;
        if v.is_nan() {
            ExtReal::Zero
        } else {
            ExtReal::positive_part(v)
        }
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        self.raw.gradient(self.untranslate(x).view())
    }

    fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> {
        self.raw.hessian(self.untranslate(x).view())
    }

    fn is_concave(&self) -> bool {
        self.raw.is_concave()
    }

    fn is_differentiable(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn fig2() -> PoissonLoglik {
        poisson_loglik(array![[2.0, -1.0], [1.0, 1.0], [-1.0, 2.0]], array![1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn scalar_instance() {
        let l = poisson_loglik(array![[1.0]], array![1.0]).unwrap();
        assert_eq!(l.value(array![1.0].view()), -1.0);
        assert_eq!(l.gradient(array![1.0].view()).unwrap(), array![0.0]);
        assert_eq!(l.value(array![-1.0].view()), f64::NEG_INFINITY);
    }

    #[test]
    fn figure_instance_value() {
        let expect = 2.0 * 3f64.ln() + 6f64.ln() - 12.0;
        assert!((fig2().value(array![3.0, 3.0].view()) - expect).abs() < 1e-14);
    }

    #[test]
    fn truncation_anchors_at_origin() {
        let g = translate_truncate(fig2(), array![3.0, 3.0], -10.0).unwrap();
        let expect = 2.0 * 3f64.ln() + 6f64.ln() - 12.0 + 10.0;
        assert!((g.value(array![0.0, 0.0].view()).value().unwrap() - expect).abs() < 1e-14);
        // outside the likelihood domain the value is the zero tag
        assert_eq!(g.value(array![-3.0, -3.0].view()), ExtReal::Zero);
        assert!(matches!(
            translate_truncate(fig2(), array![3.0, 3.0], 0.0),
            Err(RadialError::InvalidAnchor { .. })
        ));
    }

    #[test]
    fn identity_translation() {
        let l = poisson_loglik(array![[1.0]], array![0.0]).unwrap();
        // L(x) = -x on x > 0; shifting by 0 and truncating at -5 gives (5 - x)₊
        let g = translate_truncate(l, array![1.0], -5.0).unwrap();
        assert!((g.value(array![0.0].view()).value().unwrap() - 4.0).abs() < 1e-15);
    }
}
