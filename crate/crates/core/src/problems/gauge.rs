//! Star-convex sets and their gauges `γ_S(y) = inf{λ >= 0 : y ∈ λS}`.

use ndarray::{Array1, Array2, ArrayView1};

use crate::dual::{sup_unit_level, DualSettings};
use crate::error::{check_dim, Result};
use crate::ext_real::ExtReal;
use crate::linalg::norm;
use crate::objective::Objective;
use crate::problems::qp::PolyhedralGauge;

/// A set given by a membership oracle, star-convex with respect to the origin.
pub trait StarConvexSet: Send + Sync {
    fn dim(&self) -> usize;
    fn contains(&self, x: ArrayView1<f64>) -> bool;
}

/// `γ_S(y)`, by bisection on `λ ↦ [y/λ ∈ S]`.
///
/// Zero when `y/λ` stays outside `S` only below `1/cap`, infinite when it
/// leaves `S` for every `λ <= cap`.
pub fn gauge_of_set<S: StarConvexSet + ?Sized>(set: &S, y: ArrayView1<f64>, s: &DualSettings) -> Result<ExtReal> {
    check_dim(set.dim(), y.len())?;
    if y.iter().all(|&t| t == 0.0) {
        return Ok(ExtReal::Zero);
    }
    // the perspective of the indicator is ∞ inside and 0 outside
    sup_unit_level(
        |lam| {
            let x = y.mapv(|t| t / lam);
            Ok(if set.contains(x.view()) { ExtReal::Infinite } else { ExtReal::Zero })
        },
        y,
        None,
        s,
    )
}

/// Spot-checks `x ∈ S ⇒ tx ∈ S` for `t` on a grid in `[0, 1]`; returns the
/// first failing `(x, t)`.
pub fn star_convexity_witness<S: StarConvexSet + ?Sized>(set: &S, samples: &[Array1<f64>]) -> Option<(Array1<f64>, f64)> {
    for x in samples.iter().filter(|x| set.contains(x.view())) {
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            if !set.contains((x * t).view()) {
                return Some((x.clone(), t));
            }
        }
    }
    None
}

/// The indicator objective of a set: `+∞` inside, zero outside.
pub struct Indicator<S>(pub S);

impl<S: StarConvexSet> Objective for Indicator<S> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        if self.0.contains(x) {
            ExtReal::Infinite
        } else {
            ExtReal::Zero
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub dim: usize,
    pub radius: f64,
}

impl StarConvexSet for Ball {
    fn dim(&self) -> usize {
        self.dim
    }
    fn contains(&self, x: ArrayView1<f64>) -> bool {
        norm(x) <= self.radius
    }
}

/// An axis-aligned box `lo <= x <= hi` with `lo < 0 < hi`.
#[derive(Debug, Clone)]
pub struct BoxSet {
    pub lo: Array1<f64>,
    pub hi: Array1<f64>,
}

impl StarConvexSet for BoxSet {
    fn dim(&self) -> usize {
        self.lo.len()
    }
    fn contains(&self, x: ArrayView1<f64>) -> bool {
        x.iter().zip(self.lo.iter().zip(self.hi.iter())).all(|(&v, (&l, &h))| l <= v && v <= h)
    }
}

/// `{x : Ax <= b}` with `b > 0`.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    pub a: Array2<f64>,
    pub b: Array1<f64>,
}

impl Polyhedron {
    pub fn gauge(&self) -> Result<PolyhedralGauge> {
        PolyhedralGauge::new(&self.a, &self.b)
    }
}

impl StarConvexSet for Polyhedron {
    fn dim(&self) -> usize {
        self.a.ncols()
    }
    fn contains(&self, x: ArrayView1<f64>) -> bool {
        self.a.dot(&x).iter().zip(self.b.iter()).all(|(ax, b)| ax <= b)
    }
}

/// A union of star-convex sets, itself star-convex.
pub struct UnionSet(pub Vec<Box<dyn StarConvexSet>>);

impl StarConvexSet for UnionSet {
    fn dim(&self) -> usize {
        self.0.first().map_or(0, |s| s.dim())
    }
    fn contains(&self, x: ArrayView1<f64>) -> bool {
        self.0.iter().any(|s| s.contains(x))
    }
}

/// A set from a membership closure.
pub struct FnSet<F> {
    pub dim: usize,
    pub member: F,
}

impl<F: Fn(ArrayView1<f64>) -> bool + Send + Sync> StarConvexSet for FnSet<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn contains(&self, x: ArrayView1<f64>) -> bool {
        (self.member)(x)
    }
}
