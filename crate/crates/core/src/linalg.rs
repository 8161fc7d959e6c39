//! Small dense helpers shared across modules.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[inline]
pub fn norm(v: ArrayView1<f64>) -> f64 {
    v.dot(&v).sqrt()
}

#[inline]
pub fn distance(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// Largest eigenvalue of a symmetric PSD operator by power iteration.
pub fn power_iteration<F>(dim: usize, apply: F, iters: usize, seed: u64) -> f64
where
    F: Fn(ArrayView1<f64>) -> Array1<f64>,
{
    if dim == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Array1<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let n0 = norm(v.view());
    v /= n0;
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = apply(v.view());
        let nw = norm(w.view());
        if nw == 0.0 {
            return 0.0;
        }
        lambda = v.dot(&w);
        v = w / nw;
    }
    lambda.max(0.0)
}

/// Operator 2-norm of a symmetric matrix (largest absolute eigenvalue).
pub fn symmetric_norm(m: ArrayView2<f64>) -> f64 {
    let sq = |v: ArrayView1<f64>| m.dot(&m.dot(&v));
    power_iteration(m.nrows(), sq, 200, 7).sqrt()
}

/// Minimum-norm point of the convex hull of `points`, by Frank-Wolfe with
/// exact line search on the simplex.
pub fn min_norm_in_hull(points: &[Array1<f64>], iters: usize) -> Array1<f64> {
    assert!(!points.is_empty(), "min_norm_in_hull needs at least one point");
    if points.len() == 1 {
        return points[0].clone();
    }
    let k = points.len();
    let mut weights = vec![1.0 / k as f64; k];
    let mut p = combine(points, &weights);
    for _ in 0..iters {
        let (j, _) = points
            .iter()
            .map(|g| g.dot(&p))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });
        let dir = &points[j] - &p;
        let den = dir.dot(&dir);
        if den <= 1e-300 {
            break;
        }
        let t = (-p.dot(&dir) / den).clamp(0.0, 1.0);
        if t == 0.0 {
            break;
        }
        for w in weights.iter_mut() {
            *w *= 1.0 - t;
        }
        weights[j] += t;
        p = combine(points, &weights);
    }
    p
}

fn combine(points: &[Array1<f64>], weights: &[f64]) -> Array1<f64> {
    let mut out = Array1::zeros(points[0].len());
    for (g, w) in points.iter().zip(weights) {
        out.scaled_add(*w, g);
    }
    out
}

/// The `2n` signed coordinate directions followed by `random` seeded uniform
/// unit vectors.
pub fn direction_set(dim: usize, random: usize, seed: u64) -> Vec<Array1<f64>> {
    let mut dirs = Vec::with_capacity(2 * dim + random);
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut e = Array1::zeros(dim);
            e[i] = sign;
            dirs.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while dirs.len() < 2 * dim + random {
        let v: Array1<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let nv = norm(v.view());
        if nv > 1e-12 {
            dirs.push(v / nv);
        }
    }
    dirs
}

/// Whether a symmetric matrix is positive semidefinite, by a Cholesky
/// factorization of `M + δI` with `δ` a small multiple of the diagonal scale.
pub fn is_psd(m: ArrayView2<f64>) -> bool {
    let n = m.nrows();
    let scale = m.diag().iter().fold(0.0f64, |a, d| a.max(d.abs())).max(1e-300);
    let delta = 1e-12 * scale * n as f64;
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = m[[j, j]] + delta;
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > 0.0) {
            return false;
        }
        let dj = d.sqrt();
        l[[j, j]] = dj;
        for i in (j + 1)..n {
            let mut s = m[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / dj;
        }
    }
    true
}

pub fn identity(n: usize) -> Array2<f64> {
    Array2::eye(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn power_iteration_finds_top_eigenvalue() {
        let m = array![[3.0, 1.0], [1.0, 3.0]];
        let lam = power_iteration(2, |v| m.dot(&v), 100, 1);
        assert!((lam - 4.0).abs() < 1e-9);
        assert!((symmetric_norm(array![[-5.0, 0.0], [0.0, 2.0]].view()) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn min_norm_point_of_segment_crossing_origin() {
        let pts = vec![array![1.0, 1.0], array![-1.0, 1.0]];
        let p = min_norm_in_hull(&pts, 100);
        assert!((p[0]).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
        let pts = vec![array![2.0, 0.0], array![-1.0, 0.0]];
        assert!(norm(min_norm_in_hull(&pts, 100).view()) < 1e-12);
    }

    #[test]
    fn psd_detection() {
        assert!(is_psd(array![[2.0, 1.0], [1.0, 2.0]].view()));
        assert!(is_psd(array![[1.0, 1.0], [1.0, 1.0]].view()));
        assert!(!is_psd(array![[1.0, 2.0], [2.0, 1.0]].view()));
    }

    #[test]
    fn direction_set_is_unit_and_seeded() {
        let a = direction_set(3, 10, 5);
        let b = direction_set(3, 10, 5);
        assert_eq!(a.len(), 16);
        assert_eq!(a, b);
        assert!(a.iter().all(|d| (norm(d.view()) - 1.0).abs() < 1e-12));
    }
}
