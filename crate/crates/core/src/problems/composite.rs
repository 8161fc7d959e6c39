//! Compositions of radial pieces: pointwise minima (whose duals are maxima)
//! and trimmed means over per-sample objectives.

use std::sync::Arc;

use ndarray::{Array1, ArrayView1};

use crate::dual::{dual_eval_warm, dual_gradient, DualOracle, DualSettings};
use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionRule {
    /// `min_i f_i`, dual `max_i f_i^Γ`.
    Min,
    /// Mean of the best `s - t` of the `s` piece values.
    Trimmed(usize),
}

/// A composite of pieces that each expose primal values and a dual.
#[derive(Clone)]
pub struct CompositeObjective {
    pub pieces: Vec<Arc<dyn DualOracle>>,
    pub rule: CompositionRule,
    pub settings: DualSettings,
}

/// `min_i f_i`; the dual is the maximum of the piece duals.
pub fn min_compose(pieces: Vec<Arc<dyn DualOracle>>) -> Result<CompositeObjective> {
    CompositeObjective::new(pieces, CompositionRule::Min)
}

/// Mean of the best `s - t` piece values, evaluated by bisection on the dual side.
pub fn trimmed_objective(pieces: Vec<Arc<dyn DualOracle>>, t: usize) -> Result<CompositeObjective> {
    if t >= pieces.len() {
        return Err(RadialError::Config(format!("cannot trim {t} of {} samples", pieces.len())));
    }
    CompositeObjective::new(pieces, CompositionRule::Trimmed(t))
}

impl CompositeObjective {
    pub fn new(pieces: Vec<Arc<dyn DualOracle>>, rule: CompositionRule) -> Result<Self> {
        let first = pieces.first().ok_or_else(|| RadialError::Config("composite needs at least one piece".into()))?;
        let n = first.dim();
        if let Some(p) = pieces.iter().find(|p| p.dim() != n) {
            return Err(RadialError::DimensionMismatch { expected: n, found: p.dim() });
        }
        Ok(CompositeObjective { pieces, rule, settings: DualSettings::default() })
    }

    pub fn with_settings(mut self, settings: DualSettings) -> Self {
        self.settings = settings;
        self
    }

    /// Dual values of every piece at `y`.
    pub fn piece_duals(&self, y: ArrayView1<f64>) -> Result<Vec<ExtReal>> {
        self.pieces.iter().map(|p| p.dual_value(y, None)).collect()
    }

    /// Indices of the best `s - t` pieces at `x`, lowest index first on ties.
    fn selected(&self, vals: &[ExtReal], t: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        // stable sort keeps the lower index ahead among equal values
        idx.sort_by(|&i, &j| vals[j].cmp(&vals[i]));
        idx.truncate(vals.len() - t);
        idx
    }
}

impl Objective for CompositeObjective {
    fn dim(&self) -> usize {
        self.pieces[0].dim()
    }

    fn value(&self, x: ArrayView1<f64>) -> ExtReal {
        let vals: Vec<ExtReal> = self.pieces.iter().map(|p| p.primal_value(x)).collect();
        match self.rule {
            CompositionRule::Min => vals.into_iter().min().unwrap_or(ExtReal::Zero),
            CompositionRule::Trimmed(t) => {
                let sel = self.selected(&vals, t);
                if sel.iter().any(|&i| vals[i].is_infinite()) {
                    return ExtReal::Infinite;
                }
                let sum: f64 = sel.iter().map(|&i| vals[i].to_f64()).sum();
                ExtReal::positive_part(sum / sel.len() as f64)
            }
        }
    }

    fn supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        let vals: Vec<ExtReal> = self.pieces.iter().map(|p| p.primal_value(x)).collect();
        match self.rule {
            CompositionRule::Min => {
                let (i, _) = vals.iter().enumerate().min_by(|a, b| a.1.cmp(b.1))?;
                self.pieces[i].primal_supgradient(x)
            }
            CompositionRule::Trimmed(t) => {
                let sel = self.selected(&vals, t);
                let mut g = Array1::zeros(x.len());
                for &i in &sel {
                    g += &self.pieces[i].primal_supgradient(x)?;
                }
                Some(g / sel.len() as f64)
            }
        }
    }

    fn is_concave(&self) -> bool {
        false
    }
}

impl DualOracle for CompositeObjective {
    fn dim(&self) -> usize {
        self.pieces[0].dim()
    }

    fn dual_value(&self, y: ArrayView1<f64>, warm: Option<f64>) -> Result<ExtReal> {
        match self.rule {
            CompositionRule::Min => Ok(self.piece_duals(y)?.into_iter().max().unwrap_or(ExtReal::Zero)),
            CompositionRule::Trimmed(_) => dual_eval_warm(self, y, warm, &self.settings),
        }
    }

    /// For `Min`, the subgradient of the first piece attaining the maximum.
    fn dual_subgradient(&self, y: ArrayView1<f64>, v: f64) -> Result<Array1<f64>> {
        match self.rule {
            CompositionRule::Min => {
                let duals = self.piece_duals(y)?;
                let best = duals.iter().copied().max().unwrap_or(ExtReal::Zero);
                let i = duals.iter().position(|&d| d == best).unwrap_or(0);
                let vi = best.value().ok_or_else(|| RadialError::NoFiniteValue("composite dual is not finite".into()))?;
                self.pieces[i].dual_subgradient(y, vi)
            }
            CompositionRule::Trimmed(_) => dual_gradient(self, y, v, &self.settings),
        }
    }

    fn active_subgradients(&self, y: ArrayView1<f64>, v: f64, slack: f64) -> Result<Vec<Array1<f64>>> {
        if self.rule != CompositionRule::Min {
            return Ok(vec![self.dual_subgradient(y, v)?]);
        }
        let duals = self.piece_duals(y)?;
        let mut out = Vec::new();
        for (p, d) in self.pieces.iter().zip(&duals) {
            if let Some(di) = d.value() {
                if di >= v - slack {
                    out.extend(p.active_subgradients(y, di, slack - (v - di))?);
                }
            }
        }
        if out.is_empty() {
            out.push(self.dual_subgradient(y, v)?);
        }
        Ok(out)
    }

    /// The minimum over pieces that are not pure constraints.
    fn primal_value(&self, x: ArrayView1<f64>) -> ExtReal {
        match self.rule {
            CompositionRule::Min => self
                .pieces
                .iter()
                .map(|p| p.primal_value(x))
                .filter(|v| !v.is_infinite())
                .min()
                .unwrap_or(ExtReal::Infinite),
            CompositionRule::Trimmed(_) => Objective::value(self, x),
        }
    }

    fn primal_supgradient(&self, x: ArrayView1<f64>) -> Option<Array1<f64>> {
        Objective::supgradient(self, x)
    }

    fn constraint_gauge(&self, x: ArrayView1<f64>) -> f64 {
        self.pieces.iter().map(|p| p.constraint_gauge(x)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::RadialDual;
    use crate::objective::FnObjective;
    use ndarray::array;

    fn constant(v: f64) -> Arc<dyn DualOracle> {
        Arc::new(RadialDual::new(
            FnObjective::new(1, move |_| ExtReal::positive_part(v)).with_supgradient(|_| array![0.0]),
        ))
    }

    #[test]
    fn trimmed_mean_of_two_largest() {
        let c = trimmed_objective(vec![constant(0.2), constant(0.5), constant(0.9)], 1).unwrap();
        let v = Objective::value(&c, array![0.0].view()).value().unwrap();
        assert!((v - 0.7).abs() < 1e-15);
        let plain = trimmed_objective(vec![constant(0.2), constant(0.5), constant(0.9)], 0).unwrap();
        assert!((Objective::value(&plain, array![0.0].view()).value().unwrap() - 1.6 / 3.0).abs() < 1e-15);
        assert!(trimmed_objective(vec![constant(1.0)], 1).is_err());
    }

    #[test]
    fn single_piece_min_is_that_piece() {
        let c = min_compose(vec![constant(0.5)]).unwrap();
        let d = c.dual_value(array![0.3].view(), None).unwrap().value().unwrap();
        assert!((d - 2.0).abs() < 1e-9);
    }
}
