//! Structured problem instances, constraint gauges and composition rules.

use ndarray::{Array1, Array2, ArrayView1};

pub mod analytic;
pub mod composite;
pub mod gauge;
pub mod penalty;
pub mod poisson;
pub mod qp;
pub mod rescale;

pub use composite::{min_compose, trimmed_objective, CompositeObjective, CompositionRule};
pub use gauge::{gauge_of_set, Ball, BoxSet, FnSet, Polyhedron, StarConvexSet, UnionSet};
pub use penalty::{lq_penalty, regularized_objective, scad_penalty, Penalty, Regularized};
pub use poisson::{poisson_loglik, translate_truncate, Penalized, PoissonLoglik, Truncated};
pub use qp::{OpCounter, PolyhedralGauge, QpInstance, QpRaw, QuadraticMatrix, QuadraticPiece};
pub use rescale::{lambda_rescale, Rescaled};

/// An objective with values in `[-∞, ∞)` before translation and truncation,
/// such as a log-likelihood.
pub trait RawObjective: Send + Sync {
    fn dim(&self) -> usize;

    /// `-∞` outside the domain.
    fn value(&self, x: ArrayView1<f64>) -> f64;

    fn gradient(&self, _x: ArrayView1<f64>) -> Option<Array1<f64>> {
        None
    }

    fn hessian(&self, _x: ArrayView1<f64>) -> Option<Array2<f64>> {
        None
    }

    fn is_concave(&self) -> bool {
        false
    }
}

impl<T: RawObjective + ?Sized> RawObjective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: ArrayView1<f64>) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> {
        (**self).hessian(x)
    }
    fn is_concave(&self) -> bool {
        (**self).is_concave()
    }
}
