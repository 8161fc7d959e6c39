//! Geometric constants of an objective and the dual Lipschitz, smoothness,
//! sharpness and growth quantities derived from them.

use std::fmt;

use ndarray::{Array1, ArrayView1};

use crate::dual::{dual_eval, dual_gradient, DualSettings};
use crate::error::{check_dim, RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::{norm, symmetric_norm};
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    /// The true value is at most the estimate.
    SampledUpper,
    /// The true value is at least the estimate.
    SampledLower,
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::SampledUpper => "sampled-upper",
            Provenance::SampledLower => "sampled-lower",
            Provenance::User => "user",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub provenance: Provenance,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, provenance: Provenance::Exact }
    }

    pub fn user(value: f64) -> Self {
        Estimate { value, provenance: Provenance::User }
    }

    /// The value to use where an underestimate is safe: sampled upper
    /// estimates are shrunk by 0.9.
    pub fn safe_lower(&self) -> f64 {
        match self.provenance {
            Provenance::SampledUpper => 0.9 * self.value,
            _ => self.value,
        }
    }
}

/// Largest `t` with `f(t·d) > 0` along a unit direction, by bisection;
/// infinite when `f` stays positive up to `cap`.
pub fn crossing_radius<F: Objective + ?Sized>(f: &F, d: ArrayView1<f64>, s: &DualSettings) -> f64 {
    let positive = |t: f64| !f.value((&d * t).view()).is_zero();
    let mut lo = 0.0;
    let mut hi = 1.0;
    while positive(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > s.cap {
            return f64::INFINITY;
        }
    }
    while hi - lo > s.tol * hi {
        let mid = 0.5 * (lo + hi);
        if positive(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn require_positive_origin<F: Objective + ?Sized>(f: &F) -> Result<()> {
    let z = Array1::zeros(f.dim());
    if f.value(z.view()).is_zero() {
        return Err(RadialError::NoFiniteValue("f(0) must be positive".into()));
    }
    Ok(())
}

/// `R(f) = inf{‖x‖ : f(x) = 0}` for concave `f` with `f(0) > 0`: the closed
/// form when the objective declares one, else the smallest zero crossing over
/// the directions (an upper estimate).
pub fn radius_r<F: Objective + ?Sized>(f: &F, directions: &[Array1<f64>], s: &DualSettings) -> Result<Estimate> {
    if let Some(r) = f.exact_radius() {
        return Ok(Estimate::exact(r));
    }
    require_positive_origin(f)?;
    if directions.is_empty() {
        return Err(RadialError::EmptySamples);
    }
    let r = directions
        .iter()
        .map(|d| crossing_radius(f, d.view(), s))
        .fold(f64::INFINITY, f64::min);
    Ok(Estimate { value: r, provenance: Provenance::SampledUpper })
}

/// `D(f) = sup{‖x‖ : f(x) > 0}`: the closed form when declared, else the
/// largest crossing over the directions (a lower estimate, infinite when a
/// direction never leaves the domain).
pub fn diameter_d<F: Objective + ?Sized>(f: &F, directions: &[Array1<f64>], s: &DualSettings) -> Result<Estimate> {
    if let Some(d) = f.exact_diameter() {
        return Ok(Estimate::exact(d));
    }
    require_positive_origin(f)?;
    if directions.is_empty() {
        return Err(RadialError::EmptySamples);
    }
    let d = directions.iter().map(|d| crossing_radius(f, d.view(), s)).fold(0.0, f64::max);
    Ok(Estimate { value: d, provenance: Provenance::SampledLower })
}

/// `(1 + D/R)³ L`.
pub fn smoothness_bound(l: f64, d: f64, r: f64) -> f64 {
    if l == 0.0 {
        0.0
    } else {
        (1.0 + d / r).powi(3) * l
    }
}

/// `C / (C‖x*‖ + f*)`, the sharpness constant of the dual.
pub fn sharpness_dual_constant(c: f64, x_star: ArrayView1<f64>, f_star: f64) -> f64 {
    c / (c * norm(x_star) + f_star)
}

/// Largest sampled `‖∇²f(x)‖` over points of `{f > 0}`: a grid along each
/// direction up to its domain crossing (a lower estimate of `L`).
pub fn level_set_hessian_bound<F: Objective + ?Sized>(
    f: &F,
    directions: &[Array1<f64>],
    per_ray: usize,
    s: &DualSettings,
) -> Result<Estimate> {
    let mut best: f64 = 0.0;
    let mut seen = 0;
    for d in directions {
        let t_max = crossing_radius(f, d.view(), s);
        if !t_max.is_finite() {
            continue;
        }
        for k in 0..=per_ray {
            // cluster samples toward the boundary where curvature tends to peak
            let frac = 1.0 - (1.0 - k as f64 / per_ray as f64).powi(2);
            let x = d * (t_max * frac.min(1.0 - 1e-9));
            if f.value(x.view()).is_zero() {
                continue;
            }
            let h = f.hessian(x.view()).ok_or(RadialError::MissingOracle("hessian"))?;
            best = best.max(symmetric_norm(h.view()));
            seen += 1;
        }
    }
    if seen == 0 {
        return Err(RadialError::EmptySamples);
    }
    Ok(Estimate { value: best, provenance: Provenance::SampledLower })
}

/// The constants that govern the dual's conditioning.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningReport {
    pub r: Estimate,
    pub d: Estimate,
    pub l: Option<Estimate>,
    /// `1/R`.
    pub lipschitz_dual: f64,
    /// `(1 + D/R)³ L` when `L` is known.
    pub smooth_dual_bound: Option<f64>,
}

impl ConditioningReport {
    pub fn new(r: Estimate, d: Estimate, l: Option<Estimate>) -> Self {
        let smooth = l.map(|l| smoothness_bound(l.value, d.value, r.value));
        ConditioningReport { r, d, l, lipschitz_dual: 1.0 / r.value, smooth_dual_bound: smooth }
    }

    /// Estimates every constant the objective supports.
    pub fn estimate<F: Objective + ?Sized>(f: &F, directions: &[Array1<f64>], s: &DualSettings) -> Result<Self> {
        let r = radius_r(f, directions, s)?;
        let d = diameter_d(f, directions, s)?;
        let probe = Array1::zeros(f.dim());
        let l = if f.hessian(probe.view()).is_some() && d.value.is_finite() {
            Some(level_set_hessian_bound(f, directions, 32, s)?)
        } else {
            None
        };
        Ok(Self::new(r, d, l))
    }

    /// `key=value` lines.
    pub fn to_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("R={}", self.r.value),
            format!("R_provenance={}", self.r.provenance),
            format!("D={}", self.d.value),
            format!("D_provenance={}", self.d.provenance),
        ];
        match self.l {
            Some(l) => {
                out.push(format!("L={}", l.value));
                out.push(format!("L_provenance={}", l.provenance));
            }
            None => out.push("L=unknown".into()),
        }
        out.push(format!("lipschitz_dual={}", self.lipschitz_dual));
        match self.smooth_dual_bound {
            Some(b) => out.push(format!("smooth_dual_bound={b}")),
            None => out.push("smooth_dual_bound=unknown".into()),
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    Sharp,
    Lojasiewicz,
}

/// `dist(0, ∂f(x)) >= C (f* - f(x))^θ` for `‖x - x*‖ <= r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCertificate {
    pub kind: GrowthKind,
    pub c: f64,
    pub theta: f64,
    pub r: f64,
    pub x_star: Array1<f64>,
    pub f_star: f64,
}

impl GrowthCertificate {
    pub fn sharp(c: f64, x_star: Array1<f64>, f_star: f64, r: f64) -> Result<Self> {
        Self::new(GrowthKind::Sharp, c, 0.0, r, x_star, f_star)
    }

    pub fn lojasiewicz(c: f64, theta: f64, x_star: Array1<f64>, f_star: f64, r: f64) -> Result<Self> {
        Self::new(GrowthKind::Lojasiewicz, c, theta, r, x_star, f_star)
    }

    fn new(kind: GrowthKind, c: f64, theta: f64, r: f64, x_star: Array1<f64>, f_star: f64) -> Result<Self> {
        if !(f_star > 0.0) {
            return Err(RadialError::Domain { what: "f_star", value: f_star });
        }
        if !(c > 0.0) {
            return Err(RadialError::Domain { what: "growth constant C", value: c });
        }
        if !(0.0..1.0).contains(&theta) || (kind == GrowthKind::Sharp && theta != 0.0) {
            return Err(RadialError::Config(format!("growth exponent {theta} is invalid for {kind:?}")));
        }
        Ok(GrowthCertificate { kind, c, theta, r, x_star, f_star })
    }

    /// The dual sharpness constant, for sharp certificates.
    pub fn dual_sharpness(&self) -> Option<f64> {
        (self.kind == GrowthKind::Sharp).then(|| sharpness_dual_constant(self.c, self.x_star.view(), self.f_star))
    }

    /// Linear-rate bound: the dual gap halves within this many Polyak steps.
    pub fn halving_iterations(&self, r_f: f64) -> f64 {
        4.0 * ((self.f_star + self.c * norm(self.x_star.view())) / (self.c * r_f)).powi(2)
    }
}

/// Fitted exponents from [`growth_exponent_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProbe {
    pub theta_primal: f64,
    pub theta_dual: f64,
    pub primal_samples: usize,
    pub dual_samples: usize,
}

/// Slope of the least-squares line through `(x, y)` pairs.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

const MIN_GAP: f64 = 1e-12;

/// Estimates the Łojasiewicz exponent around the maximizer `x_star` on the
/// primal side and around `y* = x*/f(x*)` on the dual side, by regressing
/// `log ‖subgradient‖` on `log gap` over points at the given radii.
pub fn growth_exponent_probe<F: Objective + ?Sized>(
    f: &F,
    x_star: ArrayView1<f64>,
    radii: &[f64],
    directions: &[Array1<f64>],
    s: &DualSettings,
) -> Result<GrowthProbe> {
    check_dim(f.dim(), x_star.len())?;
    let f_star = f
        .value(x_star)
        .value()
        .ok_or_else(|| RadialError::NoFiniteValue("f(x*) must be finite and positive".into()))?;
    let y_star = x_star.mapv(|t| t / f_star);
    let d_star = 1.0 / f_star;

    let mut primal = Vec::new();
    let mut dual = Vec::new();
    for d in directions {
        for &r in radii {
            let x = &x_star + &(d * r);
            if let (Some(fx), Some(g)) = (f.value(x.view()).value(), f.supgradient(x.view())) {
                let gap = f_star - fx;
                let gn = norm(g.view());
                if gap > MIN_GAP && gn > 0.0 {
                    primal.push((gap.ln(), gn.ln()));
                }
            }
            let y = &y_star + &(d * r);
            if let Some(v) = dual_eval(f, y.view(), s)?.value() {
                let gap = v - d_star;
                let gn = norm(dual_gradient(f, y.view(), v, s)?.view());
                if gap > MIN_GAP && gn > 0.0 {
                    dual.push((gap.ln(), gn.ln()));
                }
            }
        }
    }
    if primal.len() < 2 || dual.len() < 2 {
        return Err(RadialError::EmptySamples);
    }
    Ok(GrowthProbe {
        theta_primal: slope(&primal),
        theta_dual: slope(&dual),
        primal_samples: primal.len(),
        dual_samples: dual.len(),
    })
}

/// Whether `f^Γ(y) >= f^Γ(y*) + κ‖y - y*‖` holds at every sample; returns the
/// worst slack.
pub fn dual_sharpness_slack<F: Objective + ?Sized>(
    f: &F,
    y_star: ArrayView1<f64>,
    kappa: f64,
    samples: &[Array1<f64>],
    s: &DualSettings,
) -> Result<f64> {
    let d_star = dual_eval(f, y_star, s)?.to_f64();
    let mut worst = f64::INFINITY;
    for y in samples {
        let v = dual_eval(f, y.view(), s)?;
        let slack = match v {
            ExtReal::Infinite => f64::INFINITY,
            other => other.to_f64() - d_star - kappa * norm((y - &y_star).view()),
        };
        worst = worst.min(slack);
    }
    Ok(worst)
}
