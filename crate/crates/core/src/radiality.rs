//! Numeric checks that `v -> v f(y/v)` is nondecreasing (upper radiality).

use ndarray::{Array1, ArrayView1};

use crate::ext_real::ExtReal;
use crate::objective::{perspective_unchecked, Objective};

/// A pair `v1 < v2` along direction `y` with the perspective values found there.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub y: Array1<f64>,
    pub v1: f64,
    pub v2: f64,
    pub p1: ExtReal,
    pub p2: ExtReal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialityReport {
    pub pass: bool,
    /// Pairs where the perspective decreased by more than `eps_mono`.
    pub violations: Vec<Witness>,
    /// Pairs with both values finite where the perspective failed to increase.
    pub strictness_failures: Vec<Witness>,
    pub pairs_checked: usize,
}

impl RadialityReport {
    pub fn is_strict(&self) -> bool {
        self.pass && self.strictness_failures.is_empty()
    }
}

/// Geometric grid of `count` points from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (ratio * i as f64).exp()).collect()
}

/// 81 points from `1e-4` to `1e4`.
pub fn default_v_grid() -> Vec<f64> {
    geometric_grid(1e-4, 1e4, 81)
}

/// Sweeps each direction over consecutive pairs of `v_grid`, flagging
/// `f^p(y, v1) > f^p(y, v2) + eps_mono · max(1, f^p(y, v2))`.
pub fn check_upper_radial<F: Objective + ?Sized>(
    f: &F,
    directions: &[Array1<f64>],
    v_grid: &[f64],
    eps_mono: f64,
) -> RadialityReport {
    let mut violations = Vec::new();
    let mut strictness_failures = Vec::new();
    let mut pairs_checked = 0;
    for y in directions {
        let vals: Vec<ExtReal> = v_grid.iter().map(|&v| perspective_unchecked(f, y.view(), v)).collect();
        for i in 1..v_grid.len() {
            pairs_checked += 1;
            let (p1, p2) = (vals[i - 1], vals[i]);
            let witness = || Witness { y: y.clone(), v1: v_grid[i - 1], v2: v_grid[i], p1, p2 };
            let (a, b) = (p1.to_f64(), p2.to_f64());
            if b.is_finite() && a > b + eps_mono * b.max(1.0) {
                violations.push(witness());
            } else if p1.is_finite() && p2.is_finite() && b <= a {
                strictness_failures.push(witness());
            }
        }
    }
    RadialityReport { pass: violations.is_empty(), violations, strictness_failures, pairs_checked }
}

/// Convenience form taking a single direction.
pub fn check_ray<F: Objective + ?Sized>(f: &F, y: ArrayView1<f64>, v_grid: &[f64], eps_mono: f64) -> RadialityReport {
    check_upper_radial(f, &[y.to_owned()], v_grid, eps_mono)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::direction_set;
    use crate::objective::FnObjective;
    use ndarray::array;

    #[test]
    fn concave_objective_passes() {
        let f = FnObjective::new(3, |x| ExtReal::positive_part(1.0 - 0.5 * x.dot(&x)));
        let dirs = direction_set(3, 32, 3);
        let r = check_upper_radial(&f, &dirs, &default_v_grid(), 1e-9);
        assert!(r.pass);
        assert!(r.is_strict());
        assert_eq!(r.pairs_checked, dirs.len() * 80);
    }

    #[test]
    fn shifted_square_fails_with_witness() {
        let f = FnObjective::new(1, |x| ExtReal::positive_part(x[0] * x[0] + 0.1));
        let r = check_ray(&f, array![1.0].view(), &default_v_grid(), 1e-9);
        assert!(!r.pass);
        let w = &r.violations[0];
        assert!(w.v1 < w.v2 && w.p1 > w.p2);
        // y²/v + 0.1 v decreases exactly for v < √10
        assert!(r.violations.iter().all(|w| w.v1 < 10f64.sqrt()));
    }

    #[test]
    fn grid_is_geometric() {
        let g = geometric_grid(1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-12 && (g[2] - 100.0).abs() < 1e-9);
    }
}
