//! Random QP instances and their conditioning constants.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algorithms::{default_l_eta, smoothing_from, RowNorm, SmoothedDual, SolveOptions, Status};
use crate::conditioning::{diameter_d, smoothness_bound};
use crate::dual::{DualOracle, DualSettings};
use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::direction_set;
use crate::problems::qp::{QpInstance, QuadraticMatrix};

/// `max (1 - ½xᵀQx - cᵀx)` over `Ax <= 1` with `Q = PPᵀ`.
///
/// Entries are i.i.d. standard normal from a ChaCha8 stream seeded with
/// `seed`, drawn in the order `A` (row-major), `P` (row-major), `c`.
pub fn generate_qp(n: usize, m: usize, r: usize, seed: u64) -> Result<QpInstance> {
    if n == 0 || m == 0 || r == 0 {
        return Err(RadialError::Config(format!("sizes must be positive, got (n, m, r) = ({n}, {m}, {r})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| {
        Array2::from_shape_simple_fn((rows, cols), || StandardNormal.sample(&mut rng))
    };
    let a = draw(m, n);
    let p = draw(n, r);
    let c: Array1<f64> = draw(1, n).row(0).to_owned();
    QpInstance::new(QuadraticMatrix::Factored(p), c, a, Array1::ones(m))
}

/// The constants behind the smoothing step size for a QP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpConstants {
    /// `λ·λmax(Q)`, the level-set smoothness of the quadratic part.
    pub l: f64,
    /// A certified lower bound on `R(f)`.
    pub r: f64,
    /// A sampled estimate of `D(f)`.
    pub d: f64,
    /// `max ‖aᵢ/bᵢ‖²`.
    pub max_row_norm_sq: f64,
}

impl QpConstants {
    pub fn estimate(qp: &QpInstance, directions: usize, seed: u64) -> Result<Self> {
        let dirs = direction_set(qp.n(), directions, seed);
        let d = diameter_d(qp, &dirs, &DualSettings::default())?.value;
        Ok(QpConstants {
            l: qp.lambda() * qp.piece.q.lambda_max(),
            r: qp.radius_lower_bound(),
            d,
            max_row_norm_sq: qp.gauge.max_row_norm_sq(),
        })
    }

    /// `(1 + D/R)³L`.
    pub fn smooth_dual_bound(&self) -> f64 {
        smoothness_bound(self.l, self.d, self.r)
    }

    pub fn l_eta(&self, eta: f64, reading: RowNorm) -> f64 {
        default_l_eta(self.l, self.d, self.r, self.max_row_norm_sq, eta, reading)
    }
}

/// `η = ε/(2 log(1 + m))`, so the smoothing error stays below `ε/2`.
pub fn default_eta(eps: f64, m: usize) -> f64 {
    eps / (2.0 * ((1 + m) as f64).ln())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOptions {
    pub eta_start: f64,
    pub eta_end: f64,
    /// Iterations per smoothing level.
    pub stage_iters: usize,
    /// Total iteration cap over all levels.
    pub max_iters: usize,
}

impl Default for ReferenceOptions {
    fn default() -> Self {
        ReferenceOptions { eta_start: 1e-3, eta_end: 1e-9, stage_iters: 25_000, max_iters: 1_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    /// Best feasible primal value found.
    pub p_star: f64,
    /// `1/min f^Γ`, an upper bound on the optimum.
    pub p_upper: f64,
    pub x: Array1<f64>,
    pub iterations: usize,
}

/// A long smoothing run with `η` shrinking tenfold per level from
/// `eta_start` to `eta_end`, each level warm-started at the previous
/// level's last point with the momentum restarted.
pub fn reference_solve(qp: &Arc<QpInstance>, consts: &QpConstants, opts: &ReferenceOptions) -> Result<ReferenceSolution> {
    let n = qp.n();
    let mut y = Array1::zeros(n);
    let mut best_x = Array1::zeros(n);
    let mut best = match qp.primal_value(best_x.view()) {
        ExtReal::Finite(v) => v.get(),
        _ => return Err(RadialError::NoFiniteValue("QP objective at the origin".into())),
    };
    let mut best_dual = 1.0 / best;
    let mut eta = opts.eta_start;
    let mut used = 0;
    while used < opts.max_iters {
        let s = SmoothedDual::for_qp(qp.clone(), eta, consts.l_eta(eta, RowNorm::Squared))?;
        let iters = opts.stage_iters.min(opts.max_iters - used);
        let mut so = SolveOptions::iters(iters);
        so.record_every = iters;
        let t = smoothing_from(&s, y, &so)?;
        if let Status::Error(e) = &t.status {
            return Err(RadialError::Oracle(format!("reference solve failed: {e}")));
        }
        used += t.iterations;
        if t.best_primal > best {
            best = t.best_primal;
            best_x = t.best_x.clone();
        }
        best_dual = best_dual.min(t.best_dual);
        y = t.y;
        if eta <= opts.eta_end * (1.0 + 1e-12) {
            break;
        }
        eta = (eta / 10.0).max(opts.eta_end);
    }
    let gauge = qp.max_gauge(best_x.view());
    if gauge > 1.0 + 1e-9 {
        return Err(RadialError::Oracle(format!("reference point violates the constraints (gauge {gauge})")));
    }
    Ok(ReferenceSolution { p_star: best, p_upper: 1.0 / best_dual, x: best_x, iterations: used })
}
