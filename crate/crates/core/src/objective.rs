//! Primal objectives `f: E -> R++ ∪ {0, +∞}` and the radial point transform.

use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;

/// A nonnegative objective to be maximized, with optional first and second
/// order oracles.
///
/// `value` must be deterministic and free of side effects; solvers and the
/// bisection evaluator call it from several threads.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: ArrayView1<f64>) -> ExtReal;

    /// A proximal supgradient of `f` at `x` (the gradient where `f` is differentiable).
    fn supgradient(&self, _x: ArrayView1<f64>) -> Option<Array1<f64>> {
        None
    }

    fn hessian(&self, _x: ArrayView1<f64>) -> Option<Array2<f64>> {
        None
    }

    fn is_concave(&self) -> bool {
        false
    }

    fn is_differentiable(&self) -> bool {
        false
    }

    /// Distance from the origin to the zero set, when known in closed form.
    fn exact_radius(&self) -> Option<f64> {
        None
    }

    /// Norm of the farthest point of `{f > 0}`, when known in closed form.
    fn exact_diameter(&self) -> Option<f64> {
        None
    }
}

macro_rules! forward_objective {
    ($($ptr:ty),*) => {$(
        impl<T: Objective + ?Sized> Objective for $ptr {
            fn dim(&self) -> usize { (**self).dim() }
            fn value(&self, x: ArrayView1<f64>) -> ExtReal { (**self).value(x) }
            fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> { (**self).supgradient(x) }
            fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> { (**self).hessian(x) }
            fn is_concave(&self) -> bool { (**self).is_concave() }
            fn is_differentiable(&self) -> bool { (**self).is_differentiable() }
            fn exact_radius(&self) -> Option<f64> { (**self).exact_radius() }
            fn exact_diameter(&self) -> Option<f64> { (**self).exact_diameter() }
        }
    )*};
}

forward_objective!(&T, Box<T>, Arc<T>);

type ValueFn = dyn Fn(ArrayView1<f64>) -> ExtReal + Send + Sync;
type VectorFn = dyn Fn(ArrayView1<f64>) -> Array1<f64> + Send + Sync;
type MatrixFn = dyn Fn(ArrayView1<f64>) -> Array2<f64> + Send + Sync;

/// An objective assembled from closures.
pub struct FnObjective {
    dim: usize,
    value: Box<ValueFn>,
    supgradient: Option<Box<VectorFn>>,
    hessian: Option<Box<MatrixFn>>,
    concave: bool,
    radius: Option<f64>,
    diameter: Option<f64>,
}

impl FnObjective {
    pub fn new<F>(dim: usize, value: F) -> Self
    where
        F: Fn(ArrayView1<f64>) -> ExtReal + Send + Sync + 'static,
    {
        FnObjective {
            dim,
            value: Box::new(value),
            supgradient: None,
            hessian: None,
            concave: false,
            radius: None,
            diameter: None,
        }
    }

    pub fn with_supgradient<G>(mut self, g: G) -> Self
    where
        G: Fn(ArrayView1<f64>) -> Array1<f64> + Send + Sync + 'static,
    {
        self.supgradient = Some(Box::new(g));
        self
    }

    pub fn with_hessian<H>(mut self, h: H) -> Self
    where
        H: Fn(ArrayView1<f64>) -> Array2<f64> + Send + Sync + 'static,
    {
        self.hessian = Some(Box::new(h));
        self
    }

    pub fn concave(mut self) -> Self {
        self.concave = true;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn with_diameter(mut self, d: f64) -> Self {
        self.diameter = Some(d);
        self
    }
}

impl Objective for FnObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        (self.value)(x)
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        self.supgradient.as_ref().map(|g| g(x))
    }

    fn hessian(&self, x: ArrayView1<f64>) -> Option<Array2<f64>> {
        self.hessian.as_ref().map(|h| h(x))
    }

    fn is_concave(&self) -> bool {
        self.concave
    }

    fn is_differentiable(&self) -> bool {
        self.supgradient.is_some()
    }

    fn exact_radius(&self) -> Option<f64> {
        self.radius
    }

    fn exact_diameter(&self) -> Option<f64> {
        self.diameter
    }
}

/// A point `(x, u)` of `E × R++`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPoint {
    pub x: Array1<f64>,
    height: f64,
}

impl RadialPoint {
    pub fn new(x: Array1<f64>, height: f64) -> Result<Self> {
        if height > 0.0 && height.is_finite() {
            Ok(RadialPoint { x, height })
        } else {
            Err(RadialError::Domain { what: "height u", value: height })
        }
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// `Γ(x, u) = (x, 1)/u`.
    pub fn gamma(&self) -> RadialPoint {
        RadialPoint { x: &self.x / self.height, height: 1.0 / self.height }
    }
}

/// `Γ(x, u) = (x/u, 1/u)`.
pub fn gamma_point(x: ArrayView1<f64>, u: f64) -> Result<RadialPoint> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(RadialError::Domain { what: "height u", value: u });
    }
    Ok(RadialPoint { x: x.mapv(|xi| xi / u), height: 1.0 / u })
}

/// The perspective `f^p(y, v) = v · f(y/v)`.
pub fn perspective<F: Objective + ?Sized>(f: &F, y: ArrayView1<f64>, v: f64) -> Result<ExtReal> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(RadialError::Domain { what: "perspective scale v", value: v });
    }
    Ok(perspective_unchecked(f, y, v))
}

#[inline]
pub(crate) fn perspective_unchecked<F: Objective + ?Sized>(f: &F, y: ArrayView1<f64>, v: f64) -> ExtReal {
    let x = y.mapv(|yi| yi / v);
    f.value(x.view()).scale(v)
}
