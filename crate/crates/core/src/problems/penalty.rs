//! Separable nonconvex regularizers and the regularized objective `(f - r)₊`.

use ndarray::{Array1, Array2, ArrayView1};

use crate::ext_real::ExtReal;
use crate::objective::Objective;

/// Smoothly clipped absolute deviation, for `a > 2` and `λ > 0`.
pub fn scad_penalty(t: f64, a: f64, lambda: f64) -> f64 {
    let u = t.abs();
    if u <= lambda {
        lambda * u
    } else if u <= a * lambda {
        (-u * u + 2.0 * a * lambda * u - lambda * lambda) / (2.0 * (a - 1.0))
    } else {
        (1.0 + a) * lambda * lambda / 2.0
    }
}

fn scad_derivative(t: f64, a: f64, lambda: f64) -> f64 {
    let u = t.abs();
    let d = if u <= lambda {
        lambda
    } else if u <= a * lambda {
        (a * lambda - u) / (a - 1.0)
    } else {
        0.0
    };
    if t == 0.0 {
        0.0
    } else {
        d * t.signum()
    }
}

/// `λ|t|^q` for `0 < q < 1`.
pub fn lq_penalty(t: f64, q: f64, lambda: f64) -> f64 {
    lambda * t.abs().powf(q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    Scad { a: f64, lambda: f64 },
    Lq { q: f64, lambda: f64 },
}

impl Penalty {
    /// `r(x) = Σ σ(xᵢ)`.
    pub fn value(&self, x: ArrayView1<f64>) -> f64 {
        x.iter().map(|&t| self.scalar(t)).sum()
    }

    pub fn scalar(&self, t: f64) -> f64 {
        match *self {
            Penalty::Scad { a, lambda } => scad_penalty(t, a, lambda),
            Penalty::Lq { q, lambda } => lq_penalty(t, q, lambda),
        }
    }

    /// Elementwise derivative, taking zero at `t = 0`.
    pub fn gradient(&self, x: ArrayView1<f64>) -> Array1<f64> {
        x.mapv(|t| match *self {
            Penalty::Scad { a, lambda } => scad_derivative(t, a, lambda),
            Penalty::Lq { q, lambda } => {
                if t == 0.0 {
                    0.0
                } else {
                    q * lambda * t.abs().powf(q - 1.0) * t.signum()
                }
            }
        })
    }
}

/// `(f - r)₊`.
pub struct Regularized<F> {
    pub f: F,
    pub r: Option<Penalty>,
}

pub fn regularized_objective<F: Objective>(f: F, r: Option<Penalty>) -> Regularized<F> {
    Regularized { f, r }
}

impl<F: Objective> Objective for Regularized<F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        let fx = self.f.value(x);
        match (fx, &self.r) {
            (ExtReal::Finite(v), Some(r)) => ExtReal::positive_part(v.get() - r.value(x)),
            _ => fx,
        }
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        let g = self.f.supgradient(x)?;
        Some(match &self.r {
            Some(r) => g - r.gradient(x),
            None => g,
        })
    }

    fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> {
        if self.r.is_none() {
            self.f.hessian(x)
        } else {
            None
        }
    }

    fn is_concave(&self) -> bool {
        self.r.is_none() && self.f.is_concave()
    }
}
