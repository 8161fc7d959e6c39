//! Projection and conditional-gradient baselines that work on the primal QP
//! directly, for comparison with the radial methods.

use ndarray::{Array1, ArrayView1, ArrayView2, Zip};

use crate::algorithms::{SolveOptions, SolveTrace, Status, TraceBuilder};
use crate::error::{check_dim, RadialError, Result};
use crate::linalg::norm;
use crate::problems::qp::{QpInstance, QuadraticPiece};

/// Budget for the inner halfspace projections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    pub max_cycles: usize,
    pub tol: f64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions { max_cycles: 20_000, tol: 1e-11 }
    }
}

/// Euclidean projection onto `{x : Ax <= b}` by cyclic Dykstra over the
/// halfspaces. Returns the point and the number of full cycles used.
/// Stops once a cycle moves the point by at most `tol` and every row is
/// satisfied to within `tol·‖aᵢ‖`.
pub fn dykstra_project(
    point: ArrayView1<f64>,
    a: ArrayView2<f64>,
    b: ArrayView1<f64>,
    max_cycles: usize,
    tol: f64,
) -> Result<(Array1<f64>, usize)> {
    let (m, n) = a.dim();
    check_dim(n, point.len())?;
    check_dim(m, b.len())?;
    if m == 0 {
        return Err(RadialError::Config("projection needs at least one halfspace".into()));
    }
    let row_sq: Vec<f64> = a.rows().into_iter().map(|r| r.dot(&r)).collect();
    let mut x = point.to_owned();
    let mut incr = vec![Array1::<f64>::zeros(n); m];
    let mut prev = x.clone();
    for cycle in 1..=max_cycles {
        for i in 0..m {
            let ai = a.row(i);
            // z = x + e_i, then project z onto the i-th halfspace
            let z = &x + &incr[i];
            let viol = ai.dot(&z) - b[i];
            if viol > 0.0 && row_sq[i] > 0.0 {
                let t = viol / row_sq[i];
                Zip::from(&mut x).and(&z).and(&ai).for_each(|xj, &zj, &aj| *xj = zj - t * aj);
                incr[i] = &ai * t;
            } else {
                x.assign(&z);
                incr[i].fill(0.0);
            }
        }
        let moved = Zip::from(&x).and(&prev).fold(0.0f64, |acc, &p, &q| acc + (p - q) * (p - q)).sqrt();
        if moved <= tol {
            let feasible = (0..m).all(|i| a.row(i).dot(&x) - b[i] <= tol * row_sq[i].sqrt());
            if feasible {
                return Ok((x, cycle));
            }
        }
        prev.assign(&x);
    }
    Err(RadialError::ProjectionFailure { cycles: max_cycles })
}

fn project(qp: &QpInstance, p: ArrayView1<f64>, po: ProjectionOptions) -> Result<(Array1<f64>, usize)> {
    let r = dykstra_project(p, qp.a.view(), qp.b.view(), po.max_cycles, po.tol)?;
    qp.piece.ops().add(r.1 * qp.m() * qp.n());
    Ok(r)
}

/// `∇f(x) = -λ(Qx + c)` and `f(x) = 1 - λ(½xᵀQx + cᵀx)` for the quadratic part.
fn primal_value_grad(piece: &QuadraticPiece, x: ArrayView1<f64>) -> (f64, Array1<f64>) {
    let (xqx, qx) = piece.q.quad_form(x);
    piece.ops().add(piece.q.cost() + x.len());
    let lam = piece.lambda;
    let f = 1.0 - lam * (0.5 * xqx + piece.c.dot(&x));
    (f, (qx + &piece.c) * (-lam))
}

/// Projected gradient ascent `x ← proj(x + ∇f(x)/L)` on the QP; set `l` to `λ·λmax(Q)`.
pub fn projected_gradient(
    qp: &QpInstance,
    x0: ArrayView1<f64>,
    l: f64,
    po: ProjectionOptions,
    opts: &SolveOptions,
) -> Result<SolveTrace> {
    projected_run(qp, x0, l, po, opts, false)
}

/// Projected gradient ascent with momentum `(k-1)/(k+2)` on the projected points.
pub fn accelerated_projected(
    qp: &QpInstance,
    x0: ArrayView1<f64>,
    l: f64,
    po: ProjectionOptions,
    opts: &SolveOptions,
) -> Result<SolveTrace> {
    projected_run(qp, x0, l, po, opts, true)
}

fn projected_run(
    qp: &QpInstance,
    x0: ArrayView1<f64>,
    l: f64,
    po: ProjectionOptions,
    opts: &SolveOptions,
    momentum: bool,
) -> Result<SolveTrace> {
    check_dim(qp.n(), x0.len())?;
    if !(l > 0.0 && l.is_finite()) {
        return Err(RadialError::Domain { what: "L", value: l });
    }
    let mut tb = TraceBuilder::new(qp.n(), opts);
    let (mut y, cycles) = project(qp, x0, po)?;
    tb.add_inner(cycles);
    let mut x_prev = y.clone();
    let step = 1.0 / l;

    for k in 0..opts.max_iters {
        let (_, g) = primal_value_grad(&qp.piece, y.view());
        let (x, cycles) = match project(qp, (&y + &(&g * step)).view(), po) {
            Ok(r) => r,
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        tb.add_inner(cycles);
        let f = qp.piece.primal_raw(x.view());
        let gauge = qp.max_gauge(x.view());
        let last = k + 1 == opts.max_iters;
        if let Some(done) = tb.observe(k, &x, &x, 1.0 / f, f, gauge, norm(g.view()), step, last) {
            return Ok(tb.finish(done));
        }
        y = if momentum {
            let beta = opts.momentum(k);
            &x + &((&x - &x_prev) * beta)
        } else {
            x.clone()
        };
        x_prev = x;
    }
    Ok(tb.finish(Status::ItersExhausted))
}

/// A linear maximization oracle over the feasible set: `argmax_{s∈C} gᵀs`.
pub trait LinearOracle {
    fn maximize(&self, g: ArrayView1<f64>) -> Result<Array1<f64>>;
}

/// The exact oracle for an axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct BoxOracle {
    pub lo: Array1<f64>,
    pub hi: Array1<f64>,
}

impl BoxOracle {
    pub fn new(lo: Array1<f64>, hi: Array1<f64>) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(RadialError::Config("box needs lo <= hi".into()));
        }
        Ok(BoxOracle { lo, hi })
    }
}

impl LinearOracle for BoxOracle {
    fn maximize(&self, g: ArrayView1<f64>) -> Result<Array1<f64>> {
        check_dim(self.lo.len(), g.len())?;
        Ok(Zip::from(&g).and(&self.lo).and(&self.hi).map_collect(|&gi, &l, &h| if gi > 0.0 { h } else { l }))
    }
}

/// Frank-Wolfe ascent on the quadratic part with exact linesearch
/// `β = min(∇f(x)ᵀd / (λ dᵀQd), 1)` along `d = s - x`.
pub fn frank_wolfe(
    piece: &QuadraticPiece,
    lmo: &dyn LinearOracle,
    x0: ArrayView1<f64>,
    opts: &SolveOptions,
) -> Result<SolveTrace> {
    check_dim(piece.dim(), x0.len())?;
    let mut tb = TraceBuilder::new(piece.dim(), opts);
    let mut x = x0.to_owned();
    for k in 0..opts.max_iters {
        let (_, g) = primal_value_grad(piece, x.view());
        let s = match lmo.maximize(g.view()) {
            Ok(s) => s,
            Err(e) => return Ok(tb.finish(Status::Error(e.to_string()))),
        };
        let d = &s - &x;
        let slope = g.dot(&d);
        let beta = if slope <= 0.0 || d.iter().all(|&v| v == 0.0) {
            0.0
        } else {
            let curv = piece.lambda * piece.q.curvature(d.view());
            piece.ops().add(piece.q.cost());
            if curv > 0.0 { (slope / curv).min(1.0) } else { 1.0 }
        };
        x.scaled_add(beta, &d);
        let f = piece.primal_raw(x.view());
        let last = k + 1 == opts.max_iters;
        if let Some(done) = tb.observe(k, &x, &x, 1.0 / f, f, 0.0, norm(g.view()), beta, last || beta == 0.0) {
            return Ok(tb.finish(done));
        }
        if beta == 0.0 {
            return Ok(tb.finish(Status::Stationary));
        }
    }
    Ok(tb.finish(Status::ItersExhausted))
}
