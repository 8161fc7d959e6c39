//! Objectives with closed-form duals and geometry, used as test instances and
//! CLI examples.

use ndarray::{Array1, Array2, ArrayView1};

use crate::ext_real::ExtReal;
use crate::linalg::norm;
use crate::objective::FnObjective;

/// `√(1 - ‖x‖²)₊`, with dual `√(1 + ‖y‖²)`.
pub fn sqrt_ball(n: usize) -> FnObjective {
    FnObjective::new(n, |x| {
        let t = 1.0 - x.dot(&x);
        if t > 0.0 {
            ExtReal::positive_part(t.sqrt())
        } else {
            ExtReal::Zero
        }
    })
    .with_supgradient(|x| {
        let s = (1.0 - x.dot(&x)).max(f64::MIN_POSITIVE).sqrt();
        x.mapv(|xi| -xi / s)
    })
    .with_hessian(|x| {
        let t = (1.0 - x.dot(&x)).max(f64::MIN_POSITIVE);
        let s = t.sqrt();
        outer_plus_identity(x, -1.0 / (s * t), -1.0 / s)
    })
    .concave()
    .with_radius(1.0)
    .with_diameter(1.0)
}

/// `(1 - ½‖x‖²)₊`, with `R = D = √2` and level-set smoothness `L = 1`.
pub fn half_quadratic(n: usize) -> FnObjective {
    FnObjective::new(n, |x| ExtReal::positive_part(1.0 - 0.5 * x.dot(&x)))
        .with_supgradient(|x| -x.to_owned())
        .with_hessian(move |_| -Array2::<f64>::eye(n))
        .concave()
        .with_radius(2f64.sqrt())
        .with_diameter(2f64.sqrt())
}

/// The sharp objective `(1 - ‖x‖)₊`, with dual `1 + ‖y‖`.
pub fn cone(n: usize) -> FnObjective {
    shifted_cone(Array1::zeros(n))
}

/// `(1 - ‖x - center‖)₊`, sharp with constant 1 around `center`.
pub fn shifted_cone(center: Array1<f64>) -> FnObjective {
    let n = center.len();
    let c2 = center.clone();
    let r = 1.0 - norm(center.view());
    let d = 1.0 + norm(center.view());
    FnObjective::new(n, move |x| ExtReal::positive_part(1.0 - norm((&x - &center).view())))
        .with_supgradient(move |x| {
            let d = &x - &c2;
            let nd = norm(d.view());
            if nd == 0.0 {
                Array1::zeros(x.len())
            } else {
                -d / nd
            }
        })
        .concave()
        .with_radius(r)
        .with_diameter(d)
}

/// `(1 - ‖x‖⁴)₊`, whose growth exponent at the origin is `3/4`.
pub fn quartic(n: usize) -> FnObjective {
    FnObjective::new(n, |x| {
        let s = x.dot(&x);
        ExtReal::positive_part(1.0 - s * s)
    })
    .with_supgradient(|x| x.mapv(|xi| -4.0 * x.dot(&x) * xi))
    .with_hessian(|x| {
        let s = x.dot(&x);
        outer_plus_identity(x, -8.0, -4.0 * s)
    })
    .concave()
    .with_radius(1.0)
    .with_diameter(1.0)
}

/// `(1 - ‖x‖²)₊`, whose growth exponent at the origin is `1/2`.
pub fn paraboloid(n: usize) -> FnObjective {
    FnObjective::new(n, |x| ExtReal::positive_part(1.0 - x.dot(&x)))
        .with_supgradient(|x| x.mapv(|xi| -2.0 * xi))
        .with_hessian(move |_| Array2::<f64>::eye(n) * -2.0)
        .concave()
        .with_radius(1.0)
        .with_diameter(1.0)
}

/// `(x₁ + 1)₊`, unbounded above; its dual `(1 - y₁)₊` vanishes for `y₁ >= 1`.
pub fn affine_unbounded(n: usize) -> FnObjective {
    FnObjective::new(n, |x| ExtReal::positive_part(x[0] + 1.0))
        .with_supgradient(move |_| {
            let mut e = Array1::zeros(n);
            e[0] = 1.0;
            e
        })
        .with_hessian(move |_| Array2::zeros((n, n)))
        .concave()
        .with_radius(1.0)
        .with_diameter(f64::INFINITY)
}

/// `√(1 - xᵀQx)₊` for PSD `Q`, with dual `√(1 + yᵀQy)` and dual Hessian `Q`
/// at the origin.
pub fn ellipsoid(q: Array2<f64>) -> FnObjective {
    let n = q.nrows();
    let (q1, q2, q3) = (q.clone(), q.clone(), q);
    FnObjective::new(n, move |x| {
        let t = 1.0 - x.dot(&q1.dot(&x));
        if t > 0.0 {
            ExtReal::positive_part(t.sqrt())
        } else {
            ExtReal::Zero
        }
    })
    .with_supgradient(move |x| {
        let qx = q2.dot(&x);
        let s = (1.0 - x.dot(&qx)).max(f64::MIN_POSITIVE).sqrt();
        qx / -s
    })
    .with_hessian(move |x| {
        let qx = q3.dot(&x);
        let t = (1.0 - x.dot(&qx)).max(f64::MIN_POSITIVE);
        let s = t.sqrt();
        let mut h = &q3 * (-1.0 / s);
        for i in 0..n {
            for j in 0..n {
                h[[i, j]] -= qx[i] * qx[j] / (s * t);
            }
        }
        h
    })
    .concave()
}

/// `x² + 0.1` in one dimension, which is not upper radial.
pub fn shifted_square() -> FnObjective {
    FnObjective::new(1, |x| ExtReal::positive_part(x[0] * x[0] + 0.1)).with_supgradient(|x| x.mapv(|t| 2.0 * t))
}

/// `a·xxᵀ + b·I`.
fn outer_plus_identity(x: ArrayView1<f64>, a: f64, b: f64) -> Array2<f64> {
    let n = x.len();
    let mut h = Array2::<f64>::eye(n) * b;
    for i in 0..n {
        for j in 0..n {
            h[[i, j]] += a * x[i] * x[j];
        }
    }
    h
}
