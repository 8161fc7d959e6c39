//! Quadratic programs `max 1 - λ(½xᵀQx + cᵀx)` subject to `Ax <= b`, with
//! their closed-form radial duals.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::dual::DualOracle;
use crate::error::{check_dim, RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::{is_psd, power_iteration};
use crate::objective::Objective;
use crate::problems::RawObjective;

/// Shared multiply-add counter for instrumentation.
#[derive(Debug, Clone, Default)]
pub struct OpCounter(Arc<AtomicU64>);

impl OpCounter {
    #[inline]
    pub fn add(&self, n: usize) {
        self.0.fetch_add(n as u64, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

/// A symmetric matrix `Q`, held densely or as a factor `Q = PPᵀ`.
#[derive(Debug, Clone)]
pub enum QuadraticMatrix {
    Dense(Array2<f64>),
    Factored(Array2<f64>),
}

impl QuadraticMatrix {
    pub fn dim(&self) -> usize {
        match self {
            QuadraticMatrix::Dense(q) => q.nrows(),
            QuadraticMatrix::Factored(p) => p.nrows(),
        }
    }

    /// Multiply-adds per call to [`QuadraticMatrix::quad_form`].
    pub fn cost(&self) -> usize {
        match self {
            QuadraticMatrix::Dense(q) => q.len(),
            QuadraticMatrix::Factored(p) => 2 * p.len(),
        }
    }

    /// Returns `(yᵀQy, Qy)`.
    pub fn quad_form(&self, y: ArrayView1<f64>) -> (f64, Array1<f64>) {
        match self {
            QuadraticMatrix::Dense(q) => {
                let qy = q.dot(&y);
                (y.dot(&qy), qy)
            }
            QuadraticMatrix::Factored(p) => {
                let w = p.t().dot(&y);
                (w.dot(&w), p.dot(&w))
            }
        }
    }

    /// `‖Pᵀd‖² = dᵀQd` without forming `Qd` in the factored case.
    pub fn curvature(&self, d: ArrayView1<f64>) -> f64 {
        match self {
            QuadraticMatrix::Dense(q) => d.dot(&q.dot(&d)),
            QuadraticMatrix::Factored(p) => {
                let w = p.t().dot(&d);
                w.dot(&w)
            }
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        match self {
            QuadraticMatrix::Dense(q) => q.clone(),
            QuadraticMatrix::Factored(p) => p.dot(&p.t()),
        }
    }

    pub fn is_psd(&self) -> bool {
        match self {
            QuadraticMatrix::Dense(q) => is_psd(q.view()),
            QuadraticMatrix::Factored(_) => true,
        }
    }

    /// Largest eigenvalue, clipped at zero.
    pub fn lambda_max(&self) -> f64 {
        let n = self.dim();
        match self {
            QuadraticMatrix::Factored(p) => {
                // λmax(PPᵀ) = λmax(PᵀP), the smaller of the two
                let g = p.t().dot(p);
                power_iteration(g.nrows(), |v| g.dot(&v), 500, 11)
            }
            QuadraticMatrix::Dense(q) => {
                // shift so the operator is PSD, then undo the shift
                let shift = q.rows().into_iter().map(|r| r.iter().map(|e| e.abs()).sum::<f64>()).fold(0.0, f64::max);
                let shifted = |v: ArrayView1<f64>| q.dot(&v) + &v * shift;
                (power_iteration(n, shifted, 2000, 11) - shift).max(0.0)
            }
        }
    }
}

/// The dual of `(1 - λ(½xᵀQx + cᵀx))₊`:
/// `((s + √(s² + 2q))/2)₊` with `s = 1 + λcᵀy`, `q = λyᵀQy`, and zero when
/// the discriminant is negative.
#[derive(Debug, Clone)]
pub struct QuadraticPiece {
    pub q: QuadraticMatrix,
    pub c: Array1<f64>,
    pub lambda: f64,
    ops: OpCounter,
}

/// Intermediate quantities of the closed form at one `y`.
struct PieceEval {
    value: f64,
    s: f64,
    disc: f64,
    qy: Array1<f64>,
}

impl QuadraticPiece {
    pub fn new(q: QuadraticMatrix, c: Array1<f64>, lambda: f64) -> Result<Self> {
        check_dim(q.dim(), c.len())?;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(RadialError::Domain { what: "lambda", value: lambda });
        }
        Ok(QuadraticPiece { q, c, lambda, ops: OpCounter::default() })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn ops(&self) -> &OpCounter {
        &self.ops
    }

    fn eval(&self, y: ArrayView1<f64>) -> PieceEval {
        let (yqy, qy) = self.q.quad_form(y);
        self.ops.add(self.q.cost() + self.c.len());
        let s = 1.0 + self.lambda * self.c.dot(&y);
        let disc = s * s + 2.0 * self.lambda * yqy;
        let value = if disc < 0.0 { 0.0 } else { (0.5 * (s + disc.sqrt())).max(0.0) };
        PieceEval { value, s, disc, qy }
    }

    pub fn value(&self, y: ArrayView1<f64>) -> f64 {
        self.eval(y).value
    }

    /// `(value, gradient)` with gradient `½(λc + (sλc + 2λQy)/√(s² + 2q))`.
    pub fn value_grad(&self, y: ArrayView1<f64>) -> Result<(f64, Array1<f64>)> {
        let e = self.eval(y);
        let g = self.grad_from(&e)?;
        Ok((e.value, g))
    }

    fn grad_from(&self, e: &PieceEval) -> Result<Array1<f64>> {
        if e.value <= 0.0 || e.disc < 0.0 {
            return Ok(Array1::zeros(self.dim()));
        }
        if e.disc == 0.0 {
            return Err(RadialError::BoundarySubgradient);
        }
        let rd = e.disc.sqrt();
        let lam = self.lambda;
        Ok((&self.c * (lam * (1.0 + e.s / rd)) + &e.qy * (2.0 * lam / rd)) * 0.5)
    }

    /// Primal value `1 - λ(½xᵀQx + cᵀx)` before truncation.
    pub fn primal_raw(&self, x: ArrayView1<f64>) -> f64 {
        let (xqx, _) = self.q.quad_form(x);
        1.0 - self.lambda * (0.5 * xqx + self.c.dot(&x))
    }
}

impl DualOracle for QuadraticPiece {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn dual_value(&self, y: ArrayView1<f64>, _warm: Option<f64>) -> Result<ExtReal> {
        check_dim(self.dim(), y.len())?;
        Ok(ExtReal::positive_part(self.value(y)))
    }

    fn dual_subgradient(&self, y: ArrayView1<f64>, _v: f64) -> Result<Array1<f64>> {
        check_dim(self.dim(), y.len())?;
        self.value_grad(y).map(|(_, g)| g)
    }

    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal {
        ExtReal::positive_part(self.primal_raw(x))
    }
}

impl Objective for QuadraticPiece {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        ExtReal::positive_part(self.primal_raw(x))
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        let (_, qx) = self.q.quad_form(x);
        Some((qx + &self.c) * (-self.lambda))
    }

    fn hessian(&self, _x: ArrayView1<f64>) -> Option<Array2<f64>> {
        Some(self.q.to_dense() * (-self.lambda))
    }

    fn is_concave(&self) -> bool {
        self.q.is_psd()
    }

    fn is_differentiable(&self) -> bool {
        true
    }
}

/// The gauge `max_i (aᵢᵀy/bᵢ)₊` of `{x : Ax <= b}` with `b > 0`.
#[derive(Debug, Clone)]
pub struct PolyhedralGauge {
    /// Rows `aᵢ/bᵢ`.
    pub rows: Array2<f64>,
    ops: OpCounter,
}

impl PolyhedralGauge {
    pub fn new(a: &Array2<f64>, b: &Array1<f64>) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        if let Some(&bad) = b.iter().find(|&&bi| !(bi > 0.0 && bi.is_finite())) {
            return Err(RadialError::Domain { what: "constraint right-hand side b_i", value: bad });
        }
        let mut rows = a.clone();
        for (mut row, &bi) in rows.axis_iter_mut(Axis(0)).zip(b.iter()) {
            row /= bi;
        }
        Ok(PolyhedralGauge { rows, ops: OpCounter::default() })
    }

    pub fn from_rows(rows: Array2<f64>) -> Self {
        PolyhedralGauge { rows, ops: OpCounter::default() }
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }

    pub fn ops(&self) -> &OpCounter {
        &self.ops
    }

    /// All row products `aᵢᵀy/bᵢ`.
    pub fn row_values(&self, y: ArrayView1<f64>) -> Array1<f64> {
        self.ops.add(self.rows.len());
        self.rows.dot(&y)
    }

    /// `(gauge value, index of the first maximizing row)`; the index is `None`
    /// when no row is positive.
    pub fn eval(&self, y: ArrayView1<f64>) -> (f64, Option<usize>) {
        argmax_positive(self.row_values(y).view())
    }

    /// A subgradient: the first maximizing row, or zero when the gauge vanishes.
    pub fn subgradient(&self, y: ArrayView1<f64>) -> Array1<f64> {
        match self.eval(y).1 {
            Some(i) => self.rows.row(i).to_owned(),
            None => Array1::zeros(self.dim()),
        }
    }

    pub fn max_row_norm_sq(&self) -> f64 {
        self.rows.axis_iter(Axis(0)).map(|r| r.dot(&r)).fold(0.0, f64::max)
    }

    /// `min_i bᵢ/‖aᵢ‖`, the distance from the origin to the boundary.
    pub fn inradius(&self) -> f64 {
        let m = self.max_row_norm_sq();
        if m == 0.0 {
            f64::INFINITY
        } else {
            1.0 / m.sqrt()
        }
    }

    /// Whether each row is a signed coordinate axis, as for box constraints.
    pub fn box_bounds(&self) -> Option<(Array1<f64>, Array1<f64>)> {
        let n = self.dim();
        let mut lo = Array1::from_elem(n, f64::NEG_INFINITY);
        let mut hi = Array1::from_elem(n, f64::INFINITY);
        for row in self.rows.axis_iter(Axis(0)) {
            let nz: Vec<usize> = (0..n).filter(|&j| row[j] != 0.0).collect();
            if nz.len() != 1 {
                return None;
            }
            let j = nz[0];
            let bound = 1.0 / row[j];
            if row[j] > 0.0 {
                hi[j] = hi[j].min(bound);
            } else {
                lo[j] = lo[j].max(bound);
            }
        }
        lo.iter().chain(hi.iter()).all(|v| v.is_finite()).then_some((lo, hi))
    }
}

/// `(max(0, max_i v_i), first index attaining a positive max)`.
pub(crate) fn argmax_positive(v: ArrayView1<f64>) -> (f64, Option<usize>) {
    let mut best = 0.0;
    let mut idx = None;
    for (i, &vi) in v.iter().enumerate() {
        if vi > best {
            best = vi;
            idx = Some(i);
        }
    }
    (best, idx)
}

impl DualOracle for PolyhedralGauge {
    fn dim(&self) -> usize {
        self.rows.ncols()
    }

    fn dual_value(&self, y: ArrayView1<f64>, _warm: Option<f64>) -> Result<ExtReal> {
        check_dim(self.dim(), y.len())?;
        Ok(ExtReal::positive_part(self.eval(y).0))
    }

    fn dual_subgradient(&self, y: ArrayView1<f64>, _v: f64) -> Result<Array1<f64>> {
        check_dim(self.dim(), y.len())?;
        Ok(self.subgradient(y))
    }

    fn active_subgradients(&self, y: ArrayView1<f64>, v: f64, slack: f64) -> Result<Vec<Array1<f64>>> {
        let vals = self.row_values(y);
        let mut out: Vec<Array1<f64>> = vals
            .iter()
            .enumerate()
            .filter(|(_, &vi)| vi >= v - slack)
            .map(|(i, _)| self.rows.row(i).to_owned())
            .collect();
        if out.is_empty() {
            out.push(self.subgradient(y));
        }
        Ok(out)
    }

    /// The indicator of `{x : gauge(x) <= 1}`.
    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal {
        if self.eval(x).0 <= 1.0 {
            ExtReal::Infinite
        } else {
            ExtReal::Zero
        }
    }

    fn constraint_gauge(&self, x: ArrayView1<f64>) -> f64 {
        self.eval(x).0
    }

    fn primal_supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        Some(Array1::zeros(x.len()))
    }
}

/// `max 1 - λ(½xᵀQx + cᵀx)` subject to `Ax <= b`.
#[derive(Debug, Clone)]
pub struct QpInstance {
    pub piece: QuadraticPiece,
    pub gauge: PolyhedralGauge,
    pub a: Array2<f64>,
    pub b: Array1<f64>,
}

impl QpInstance {
    pub fn new(q: QuadraticMatrix, c: Array1<f64>, a: Array2<f64>, b: Array1<f64>) -> Result<Self> {
        check_dim(q.dim(), c.len())?;
        check_dim(c.len(), a.ncols())?;
        let gauge = PolyhedralGauge::new(&a, &b)?;
        let piece = QuadraticPiece::new(q, c, 1.0)?;
        Ok(QpInstance { piece, gauge, a, b })
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(RadialError::Domain { what: "lambda", value: lambda });
        }
        self.piece.lambda = lambda;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.piece.dim()
    }

    pub fn m(&self) -> usize {
        self.gauge.len()
    }

    pub fn lambda(&self) -> f64 {
        self.piece.lambda
    }

    pub fn op_count(&self) -> u64 {
        self.piece.ops().get() + self.gauge.ops().get()
    }

    pub fn reset_op_count(&self) {
        self.piece.ops().reset();
        self.gauge.ops().reset();
    }

    /// All dual piece values: the quadratic piece first, then each row.
    pub fn piece_values(&self, y: ArrayView1<f64>) -> (f64, Array1<f64>) {
        (self.piece.value(y), self.gauge.row_values(y))
    }

    /// `max{((s + √(s² + 2q))/2)₊, aᵢᵀy/bᵢ}`.
    pub fn qp_dual_value(&self, y: ArrayView1<f64>) -> ExtReal {
        let (quad, rows) = self.piece_values(y);
        let (lin, _) = argmax_positive(rows.view());
        ExtReal::positive_part(quad.max(lin))
    }

    /// Gradient of the active piece; the quadratic piece wins ties, then the
    /// lowest row index.
    pub fn qp_dual_subgradient(&self, y: ArrayView1<f64>) -> Result<Array1<f64>> {
        let e = self.piece.eval(y);
        let (lin, idx) = argmax_positive(self.gauge.row_values(y).view());
        if e.value <= 0.0 && lin <= 0.0 {
            return Err(RadialError::NoFiniteValue("dual value is zero".into()));
        }
        if e.value >= lin {
            self.piece.grad_from(&e)
        } else {
            Ok(self.gauge.rows.row(idx.expect("positive row max has an index")).to_owned())
        }
    }

    /// `max_i aᵢᵀx/bᵢ`, clipped at zero.
    pub fn max_gauge(&self, x: ArrayView1<f64>) -> f64 {
        self.gauge.eval(x).0
    }

    /// The unconstrained quadratic part as a raw objective `-(½xᵀQx + cᵀx)`.
    pub fn raw_objective(&self) -> QpRaw {
        QpRaw { q: self.piece.q.clone(), c: self.piece.c.clone() }
    }

    /// A lower bound on the distance from the origin to the zero set of the
    /// primal: the smaller of the polyhedron's inradius and the positive root
    /// of `½λ·λmax(Q)t² + λ‖c‖t = 1`.
    pub fn radius_lower_bound(&self) -> f64 {
        let lam = self.lambda();
        let a = 0.5 * lam * self.piece.q.lambda_max();
        let b = lam * self.piece.c.dot(&self.piece.c).sqrt();
        let quad_root = if a > 0.0 {
            (-b + (b * b + 4.0 * a).sqrt()) / (2.0 * a)
        } else if b > 0.0 {
            1.0 / b
        } else {
            f64::INFINITY
        };
        quad_root.min(self.gauge.inradius())
    }
}

impl DualOracle for QpInstance {
    fn dim(&self) -> usize {
        self.n()
    }

    fn dual_value(&self, y: ArrayView1<f64>, _warm: Option<f64>) -> Result<ExtReal> {
        check_dim(self.n(), y.len())?;
        Ok(self.qp_dual_value(y))
    }

    fn dual_subgradient(&self, y: ArrayView1<f64>, _v: f64) -> Result<Array1<f64>> {
        check_dim(self.n(), y.len())?;
        self.qp_dual_subgradient(y)
    }

    fn active_subgradients(&self, y: ArrayView1<f64>, v: f64, slack: f64) -> Result<Vec<Array1<f64>>> {
        let e = self.piece.eval(y);
        let mut out = Vec::new();
        if e.value >= v - slack && e.disc > 0.0 {
            out.push(self.piece.grad_from(&e)?);
        }
        let rows = self.gauge.row_values(y);
        for (i, &ri) in rows.iter().enumerate() {
            if ri >= v - slack {
                out.push(self.gauge.rows.row(i).to_owned());
            }
        }
        if out.is_empty() {
            out.push(self.qp_dual_subgradient(y)?);
        }
        Ok(out)
    }

    /// The quadratic part; feasibility is reported by `constraint_gauge`.
    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal {
        ExtReal::positive_part(self.piece.primal_raw(x))
    }

    fn constraint_gauge(&self, x: ArrayView1<f64>) -> f64 {
        self.max_gauge(x)
    }

    fn primal_supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        Objective::supgradient(&self.piece, x)
    }
}

/// The primal `min{(1 - λ(½xᵀQx + cᵀx))₊, ι_{Ax<=b}(x)}`.
impl Objective for QpInstance {
    fn dim(&self) -> usize {
        self.n()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        if self.max_gauge(x) <= 1.0 {
            ExtReal::positive_part(self.piece.primal_raw(x))
        } else {
            ExtReal::Zero
        }
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        Objective::supgradient(&self.piece, x)
    }

    fn is_concave(&self) -> bool {
        self.piece.q.is_psd()
    }
}

/// `h(x) = -(½xᵀQx + cᵀx)`.
#[derive(Debug, Clone)]
pub struct QpRaw {
    pub q: QuadraticMatrix,
    pub c: Array1<f64>,
}

impl RawObjective for QpRaw {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: ArrayView1<f64>) -> f64 {
        let (xqx, _) = self.q.quad_form(x);
        -(0.5 * xqx + self.c.dot(&x))
    }

    fn gradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        let (_, qx) = self.q.quad_form(x);
        Some(-(qx + &self.c))
    }

    fn hessian(&self, _x: ArrayView1<f64>) -> Option<Array2<f64>> {
        Some(-self.q.to_dense())
    }

    fn is_concave(&self) -> bool {
        self.q.is_psd()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{dual_eval, DualSettings};
    use ndarray::array;

    fn unconstrained(q: Array2<f64>, c: Array1<f64>) -> QpInstance {
        let n = c.len();
        QpInstance::new(QuadraticMatrix::Dense(q), c, Array2::zeros((0, n)), Array1::zeros(0)).unwrap()
    }

    #[test]
    fn origin_has_unit_dual() {
        let inst = QpInstance::new(
            QuadraticMatrix::Factored(array![[1.0], [2.0]]),
            array![0.5, -1.0],
            array![[1.0, 0.0], [0.0, 3.0]],
            array![1.0, 1.0],
        )
        .unwrap();
        assert_eq!(inst.qp_dual_value(array![0.0, 0.0].view()).value(), Some(1.0));
    }

    #[test]
    fn identity_quadratic_closed_form() {
        let inst = unconstrained(Array2::eye(2), array![0.0, 0.0]);
        let d = inst.qp_dual_value(array![1.0, 0.0].view()).value().unwrap();
        assert!((d - (1.0 + 3f64.sqrt()) / 2.0).abs() < 1e-15);
        let b = dual_eval(&inst, array![1.0, 0.0].view(), &DualSettings::with_tol(1e-14)).unwrap().value().unwrap();
        assert!((b - d).abs() < 1e-12);
    }

    #[test]
    fn negative_discriminant_leaves_only_gauges() {
        let inst = QpInstance::new(
            QuadraticMatrix::Dense(-Array2::<f64>::eye(2)),
            array![0.0, 0.0],
            array![[1.0, 1.0]],
            array![2.0],
        )
        .unwrap();
        let y = array![0.8, 0.0];
        // 1 - 2‖y‖² < 0
        assert_eq!(inst.piece.value(y.view()), 0.0);
        assert!((inst.qp_dual_value(y.view()).value().unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(inst.qp_dual_subgradient(y.view()).unwrap(), array![0.5, 0.5]);
    }

    #[test]
    fn gradient_at_origin_is_c() {
        let inst = unconstrained(Array2::eye(2), array![0.3, -0.7]);
        let g = inst.qp_dual_subgradient(array![0.0, 0.0].view()).unwrap();
        assert!((g[0] - 0.3).abs() < 1e-15 && (g[1] + 0.7).abs() < 1e-15);
    }

    #[test]
    fn gauge_examples() {
        let g = PolyhedralGauge::new(&array![[1.0]], &array![2.0]).unwrap();
        assert_eq!(g.eval(array![4.0].view()).0, 2.0);
        assert_eq!(g.eval(array![0.0].view()), (0.0, None));
        assert!(PolyhedralGauge::new(&array![[1.0]], &array![0.0]).is_err());
        let ties = PolyhedralGauge::new(&array![[1.0, 0.0], [1.0, 0.0]], &array![1.0, 1.0]).unwrap();
        assert_eq!(ties.eval(array![1.0, 0.0].view()).1, Some(0));
    }

    #[test]
    fn box_rows_are_detected() {
        let a = array![[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -1.0]];
        let g = PolyhedralGauge::new(&a, &array![1.0, 1.0, 1.0, 3.0]).unwrap();
        let (lo, hi) = g.box_bounds().unwrap();
        assert_eq!(lo, array![-1.0, -3.0]);
        assert_eq!(hi, array![1.0, 0.5]);
        let g2 = PolyhedralGauge::new(&array![[1.0, 1.0]], &array![1.0]).unwrap();
        assert!(g2.box_bounds().is_none());
    }

    #[test]
    fn lambda_max_of_factored_and_dense() {
        let p = array![[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]];
        assert!((QuadraticMatrix::Factored(p.clone()).lambda_max() - 4.0).abs() < 1e-9);
        assert!((QuadraticMatrix::Dense(p.dot(&p.t())).lambda_max() - 4.0).abs() < 1e-9);
        let d = QuadraticMatrix::Dense(array![[2.0, 0.0], [0.0, -5.0]]);
        assert!((d.lambda_max() - 2.0).abs() < 1e-9);
        assert!(!d.is_psd());
    }

    #[test]
    fn op_counter_tracks_matvecs() {
        let inst = QpInstance::new(
            QuadraticMatrix::Factored(Array2::ones((4, 2))),
            Array1::zeros(4),
            Array2::ones((3, 4)),
            Array1::ones(3),
        )
        .unwrap();
        inst.reset_op_count();
        let _ = inst.qp_dual_value(Array1::zeros(4).view());
        assert_eq!(inst.op_count(), (2 * 8 + 4 + 12) as u64);
    }
}
