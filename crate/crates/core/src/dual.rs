//! The radial dual `f^Γ(y) = sup{v > 0 : v f(y/v) <= 1}`: evaluation by
//! bisection, derivative formulas, and primal recovery.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{check_dim, RadialError, Result};
use crate::ext_real::ExtReal;
use crate::objective::{gamma_point, perspective_unchecked, Objective, RadialPoint};

/// Numerical settings for bisection evaluation and the derivative guards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSettings {
    /// Relative width of the final bisection bracket.
    pub tol: f64,
    /// Largest `v` probed before the dual is declared infinite (and `1/cap`
    /// the smallest before it is declared zero).
    pub cap: f64,
    /// Slack allowed before a decrease of the perspective counts as a violation.
    pub eps_mono: f64,
    /// The derivative formulas require `(∇f(x), -1)ᵀ(x, f(x)) < -eps_den`.
    pub eps_den: f64,
}

impl Default for DualSettings {
    fn default() -> Self {
        DualSettings { tol: 1e-10, cap: 1e12, eps_mono: 1e-9, eps_den: 1e-12 }
    }
}

impl DualSettings {
    pub fn with_tol(tol: f64) -> Self {
        DualSettings { tol, ..Self::default() }
    }
}

fn decreased(p_small_v: ExtReal, p_large_v: ExtReal, eps: f64) -> bool {
    let (a, b) = (p_small_v.to_f64(), p_large_v.to_f64());
    if b.is_infinite() {
        return false;
    }
    a > b + eps * b.max(1.0)
}

/// `sup{v > 0 : p(v) <= 1}` for a nondecreasing map `p`.
///
/// Brackets from `warm` (or 1), then bisects until `hi - lo <= tol * hi` and
/// returns `hi`, the end of the bracket where `p(hi) > 1`. Any observed
/// decrease of `p` is reported as a radiality violation along `y`.
pub fn sup_unit_level<P>(mut p: P, y: ArrayView1<f64>, warm: Option<f64>, s: &DualSettings) -> Result<ExtReal>
where
    P: FnMut(f64) -> Result<ExtReal>,
{
    let violation = |v1: f64, v2: f64, p1: ExtReal, p2: ExtReal| RadialError::RadialityViolation {
        y: y.to_vec(),
        v1,
        v2,
        p1: p1.to_f64(),
        p2: p2.to_f64(),
    };

    let start = match warm {
        Some(w) if w > 0.0 && w.is_finite() => w.clamp(1.0 / s.cap, s.cap),
        _ => 1.0,
    };
    // warm starts expand slowly first since iterates rarely move far
    let mut grow: f64 = if warm.is_some() { 1.0 + 1e-3 } else { 2.0 };

    let mut v = start;
    let mut pv = p(v)?;
    let (mut lo, mut p_lo, mut hi, mut p_hi);
    if pv <= ExtReal::ONE {
        loop {
            let next = v * grow;
            if next > s.cap {
                return Ok(ExtReal::Infinite);
            }
            let pn = p(next)?;
            if decreased(pv, pn, s.eps_mono) {
                return Err(violation(v, next, pv, pn));
            }
            if pn > ExtReal::ONE {
                (lo, p_lo, hi, p_hi) = (v, pv, next, pn);
                break;
            }
            v = next;
            pv = pn;
            grow = (grow * grow).min(16.0);
        }
    } else {
        loop {
            let next = v / grow;
            if next < 1.0 / s.cap {
                return Ok(ExtReal::Zero);
            }
            let pn = p(next)?;
            if decreased(pn, pv, s.eps_mono) {
                return Err(violation(next, v, pn, pv));
            }
            if pn <= ExtReal::ONE {
                (lo, p_lo, hi, p_hi) = (next, pn, v, pv);
                break;
            }
            v = next;
            pv = pn;
            grow = (grow * grow).min(16.0);
        }
    }

    while hi - lo > s.tol * hi {
        let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let pm = p(mid)?;
        if decreased(p_lo, pm, s.eps_mono) {
            return Err(violation(lo, mid, p_lo, pm));
        }
        if decreased(pm, p_hi, s.eps_mono) {
            return Err(violation(mid, hi, pm, p_hi));
        }
        if pm <= ExtReal::ONE {
            lo = mid;
            p_lo = pm;
        } else {
            hi = mid;
            p_hi = pm;
        }
    }
    Ok(ExtReal::positive_part(hi))
}

/// `f^Γ(y)` by bisection on the perspective of `f`.
pub fn dual_eval<F: Objective + ?Sized>(f: &F, y: ArrayView1<f64>, s: &DualSettings) -> Result<ExtReal> {
    dual_eval_warm(f, y, None, s)
}

/// As [`dual_eval`], with a bracket hint (typically the previous iterate's value).
pub fn dual_eval_warm<F: Objective + ?Sized>(
    f: &F,
    y: ArrayView1<f64>,
    warm: Option<f64>,
    s: &DualSettings,
) -> Result<ExtReal> {
    check_dim(f.dim(), y.len())?;
    sup_unit_level(|v| Ok(perspective_unchecked(f, y, v)), y, warm, s)
}

/// `f^ΓΓ(x)`, evaluating the inner dual by bisection with `inner` settings.
pub fn bidual_value<F: Objective + ?Sized>(
    f: &F,
    x: ArrayView1<f64>,
    inner: &DualSettings,
    outer: &DualSettings,
) -> Result<ExtReal> {
    check_dim(f.dim(), x.len())?;
    let mut warm = None;
    sup_unit_level(
        |u| {
            let y = x.mapv(|xi| xi / u);
            let d = dual_eval_warm(f, y.view(), warm, inner)?;
            warm = d.value();
            Ok(d.scale(u))
        },
        x,
        None,
        outer,
    )
}

/// Returns `(x, f(x), g, den)` with `x = y/v`, `g` a supgradient and
/// `den = gᵀx - f(x)`, after the singularity guard.
fn formula_parts<F: Objective + ?Sized>(
    f: &F,
    y: ArrayView1<f64>,
    v: f64,
    s: &DualSettings,
) -> Result<(Array1<f64>, f64, Array1<f64>, f64)> {
    check_dim(f.dim(), y.len())?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(RadialError::Domain { what: "dual value v", value: v });
    }
    let x = y.mapv(|yi| yi / v);
    let fx = f
        .value(x.view())
        .value()
        .ok_or_else(|| RadialError::NoFiniteValue(format!("f(y/v) at v = {v} is not finite and positive")))?;
    let g = f.supgradient(x.view()).ok_or(RadialError::MissingOracle("supgradient"))?;
    let den = g.dot(&x) - fx;
    if !(den < -s.eps_den) {
        return Err(RadialError::Singularity { x: x.to_vec(), denominator: den });
    }
    Ok((x, fx, g, den))
}

/// `∇f^Γ(y) = ∇f(x) / ((∇f(x), -1)ᵀ(x, f(x)))` at `x = y/v`, `v = f^Γ(y)`.
///
/// With a supgradient of a nonsmooth `f` this yields a subgradient of `f^Γ`.
pub fn dual_gradient<F: Objective + ?Sized>(f: &F, y: ArrayView1<f64>, v: f64, s: &DualSettings) -> Result<Array1<f64>> {
    let (_, _, g, den) = formula_parts(f, y, v, s)?;
    Ok(g / den)
}

/// `∇²f^Γ(y) = (f(x)/den) · J ∇²f(x) Jᵀ` with `J = I - ∇f(x) xᵀ / den`.
pub fn dual_hessian<F: Objective + ?Sized>(f: &F, y: ArrayView1<f64>, v: f64, s: &DualSettings) -> Result<Array2<f64>> {
    let (x, fx, g, den) = formula_parts(f, y, v, s)?;
    let h = f.hessian(x.view()).ok_or(RadialError::MissingOracle("hessian"))?;
    let n = x.len();
    let mut j = Array2::<f64>::eye(n);
    for r in 0..n {
        for c in 0..n {
            j[[r, c]] -= g[r] * x[c] / den;
        }
    }
    let mut out = j.dot(&h).dot(&j.t()) * (fx / den);
    // symmetrize away rounding
    let t = out.t().to_owned();
    out = (&out + &t) * 0.5;
    Ok(out)
}

/// `Γ(y, v) = (y/v, 1/v)`, the primal point paired with a finite dual value.
pub fn primal_recover(y: ArrayView1<f64>, dual_value: ExtReal) -> Result<RadialPoint> {
    match dual_value {
        ExtReal::Finite(v) => gamma_point(y, v.get()),
        ExtReal::Zero => Err(RadialError::NoFiniteValue(
            "dual value is zero: the primal is unbounded along this ray".into(),
        )),
        ExtReal::Infinite => Err(RadialError::NoFiniteValue("dual value is infinite".into())),
    }
}

/// First-order access to a radial dual, as consumed by the solvers.
pub trait DualOracle: Send + Sync {
    fn dim(&self) -> usize;

    /// `f^Γ(y)`; `warm` is a hint for bisection-based implementations.
    fn dual_value(&self, y: ArrayView1<f64>, warm: Option<f64>) -> Result<ExtReal>;

    /// A subgradient of `f^Γ` at `y`, given `v = f^Γ(y)` finite.
    fn dual_subgradient(&self, y: ArrayView1<f64>, v: f64) -> Result<Array1<f64>>;

    fn dual_hessian(&self, _y: ArrayView1<f64>, _v: f64) -> Result<Array2<f64>> {
        Err(RadialError::MissingOracle("dual hessian"))
    }

    /// Gradients of every piece within `slack` of the maximum, for finite-max
    /// duals. Single-piece duals return their subgradient.
    fn active_subgradients(&self, y: ArrayView1<f64>, v: f64, _slack: f64) -> Result<Vec<Array1<f64>>> {
        Ok(vec![self.dual_subgradient(y, v)?])
    }

    /// The primal objective, used to score recovered points.
    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal;

    /// A supgradient of the primal objective, when available.
    fn primal_supgradient(&self, _x: ArrayView1<f64>) -> Option<Array1<f64>> {
        None
    }

    /// Largest constraint gauge at `x`, or 0 when there are no constraints.
    fn constraint_gauge(&self, _x: ArrayView1<f64>) -> f64 {
        0.0
    }
}

impl<T: DualOracle + ?Sized> DualOracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn dual_value(&self, y: ArrayView1<f64>, warm: Option<f64>) -> Result<ExtReal> {
        (**self).dual_value(y, warm)
    }
    fn dual_subgradient(&self, y: ArrayView1<f64>, v: f64) -> Result<Array1<f64>> {
        (**self).dual_subgradient(y, v)
    }
    fn dual_hessian(&self, y: ArrayView1<f64>, v: f64) -> Result<Array2<f64>> {
        (**self).dual_hessian(y, v)
    }
    fn active_subgradients(&self, y: ArrayView1<f64>, v: f64, slack: f64) -> Result<Vec<Array1<f64>>> {
        (**self).active_subgradients(y, v, slack)
    }
    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal {
        (**self).primal_value(x)
    }
    fn primal_supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        (**self).primal_supgradient(x)
    }
    fn constraint_gauge(&self, x: ArrayView1<f64>) -> f64 {
        (**self).constraint_gauge(x)
    }
}

/// The radial dual of a black-box objective, evaluated by bisection.
#[derive(Debug, Clone)]
pub struct RadialDual<F> {
    pub source: F,
    pub settings: DualSettings,
}

impl<F: Objective> RadialDual<F> {
    pub fn new(source: F) -> Self {
        RadialDual { source, settings: DualSettings::default() }
    }

    pub fn with_settings(source: F, settings: DualSettings) -> Self {
        RadialDual { source, settings }
    }
}

impl<F: Objective> DualOracle for RadialDual<F> {
    fn dim(&self) -> usize {
        self.source.dim()
    }

    fn dual_value(&self, y: ArrayView1<f64>, warm: Option<f64>) -> Result<ExtReal> {
        dual_eval_warm(&self.source, y, warm, &self.settings)
    }

    fn dual_subgradient(&self, y: ArrayView1<f64>, v: f64) -> Result<Array1<f64>> {
        dual_gradient(&self.source, y, v, &self.settings)
    }

    fn dual_hessian(&self, y: ArrayView1<f64>, v: f64) -> Result<Array2<f64>> {
        dual_hessian(&self.source, y, v, &self.settings)
    }

    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal {
        self.source.value(x)
    }

    fn primal_supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        self.source.supgradient(x)
    }
}
