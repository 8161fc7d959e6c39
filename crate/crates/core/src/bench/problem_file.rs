//! Problem files: TOML documents describing a QP, a Poisson likelihood, a
//! composite of pieces or a custom test objective.
//!
//! ```toml
//! type = "qp"           # qp | poisson | composite | custom
//! Q = [[2.0, 0.0], [0.0, 1.0]]   # or P = [[...]] for Q = PPᵀ
//! c = [0.5, -1.0]
//! A = { csv = "rows.csv" }       # inline arrays or a CSV of rows
//! b = [1.0, 1.0, 1.0]
//! lambda = 1.0
//! ```
//!
//! A `qp` without matrices but with `n`, `m`, `r` and `seed` is generated
//! randomly. `poisson` takes `A`, counts `b` and an interior `anchor`
//! (optionally `u0`, default one below the likelihood at the anchor).
//! `composite` takes `rule = "min" | "trimmed"`, `trim` and `[[pieces]]`.
//! `custom` takes either a library `name` with `n`, or `Q`, `c` and
//! `constant` for `(constant + cᵀx + ½xᵀQx)₊`. Any problem may set `x0`
//! (start point) and `tol` (bisection tolerance).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use ndarray::{Array1, Array2};
use serde::Deserialize;
use toml::Spanned;

use crate::bench::generate::generate_qp;
use crate::dual::{DualOracle, DualSettings, RadialDual};
use crate::error::{RadialError, Result};
use crate::ext_real::ExtReal;
use crate::linalg::is_psd;
use crate::objective::{FnObjective, Objective};
use crate::problems::analytic;
use crate::problems::composite::{CompositeObjective, CompositionRule};
use crate::problems::poisson::{poisson_loglik, translate_truncate};
use crate::problems::qp::{QpInstance, QuadraticMatrix};
use crate::problems::RawObjective;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixSrc {
    Inline(Vec<Vec<f64>>),
    Csv { csv: String },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum VectorSrc {
    Inline(Vec<f64>),
    Csv { csv: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(rename = "type")]
    kind: Spanned<String>,
    n: Option<Spanned<usize>>,
    m: Option<Spanned<usize>>,
    r: Option<Spanned<usize>>,
    seed: Option<u64>,
    #[serde(rename = "Q")]
    q: Option<Spanned<MatrixSrc>>,
    #[serde(rename = "P")]
    p: Option<Spanned<MatrixSrc>>,
    c: Option<Spanned<VectorSrc>>,
    #[serde(rename = "A")]
    a: Option<Spanned<MatrixSrc>>,
    b: Option<Spanned<VectorSrc>>,
    lambda: Option<Spanned<f64>>,
    anchor: Option<Spanned<VectorSrc>>,
    u0: Option<Spanned<f64>>,
    name: Option<Spanned<String>>,
    constant: Option<Spanned<f64>>,
    rule: Option<Spanned<String>>,
    trim: Option<Spanned<usize>>,
    pieces: Option<Spanned<Vec<RawProblem>>>,
    x0: Option<Spanned<VectorSrc>>,
    tol: Option<Spanned<f64>>,
}

/// A problem ready for the checkers and solvers.
#[derive(Clone)]
pub struct LoadedProblem {
    pub kind: String,
    pub objective: Arc<dyn Objective>,
    pub oracle: Arc<dyn DualOracle>,
    /// Set for `qp` problems, which support every method.
    pub qp: Option<Arc<QpInstance>>,
    pub x0: Array1<f64>,
    pub settings: DualSettings,
}

impl LoadedProblem {
    pub fn dim(&self) -> usize {
        self.x0.len()
    }
}

struct Ctx<'a> {
    src: &'a str,
    base: Option<PathBuf>,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.src[..offset.min(self.src.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, field: &str, span: std::ops::Range<usize>, msg: impl std::fmt::Display) -> Result<T> {
        Err(RadialError::Config(format!("line {}, field `{field}`: {msg}", self.line(span.start))))
    }

    fn missing<T>(&self, field: &str, owner: &Spanned<String>) -> Result<T> {
        self.err(field, owner.span(), format!("required for type `{}`", owner.get_ref()))
    }

    fn read_csv(&self, field: &str, span: std::ops::Range<usize>, file: &str) -> Result<Vec<Vec<f64>>> {
        let path = match &self.base {
            Some(b) => b.join(file),
            None => PathBuf::from(file),
        };
        let mut rdr = match csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(&path) {
            Ok(r) => r,
            Err(e) => return self.err(field, span, format!("cannot read {}: {e}", path.display())),
        };
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => return self.err(field, span, format!("{}: {e}", path.display())),
            };
            let mut row = Vec::with_capacity(rec.len());
            for (j, cell) in rec.iter().enumerate() {
                match cell.parse::<f64>() {
                    Ok(v) => row.push(v),
                    Err(_) => {
                        return self.err(field, span, format!("{} row {}, column {}: `{cell}` is not a number", path.display(), i + 1, j + 1))
                    }
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }

    fn matrix(&self, field: &str, m: &Spanned<MatrixSrc>) -> Result<Array2<f64>> {
        let rows = match m.get_ref() {
            MatrixSrc::Inline(r) => r.clone(),
            MatrixSrc::Csv { csv } => self.read_csv(field, m.span(), csv)?,
        };
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || cols == 0 {
            return self.err(field, m.span(), "matrix is empty");
        }
        if let Some(i) = rows.iter().position(|r| r.len() != cols) {
            return self.err(field, m.span(), format!("row {} has {} entries, expected {cols}", i + 1, rows[i].len()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        if flat.iter().any(|v| !v.is_finite()) {
            return self.err(field, m.span(), "entries must be finite");
        }
        Ok(Array2::from_shape_vec((rows.len(), cols), flat).expect("shape checked"))
    }

    fn vector(&self, field: &str, v: &Spanned<VectorSrc>) -> Result<Array1<f64>> {
        let vals = match v.get_ref() {
            VectorSrc::Inline(x) => x.clone(),
            VectorSrc::Csv { csv } => self.read_csv(field, v.span(), csv)?.into_iter().flatten().collect(),
        };
        if vals.iter().any(|x| !x.is_finite()) {
            return self.err(field, v.span(), "entries must be finite");
        }
        Ok(Array1::from(vals))
    }

    fn expect_len(&self, field: &str, span: std::ops::Range<usize>, found: usize, expected: usize) -> Result<()> {
        if found == expected {
            Ok(())
        } else {
            self.err(field, span, format!("has length {found}, expected {expected}"))
        }
    }
}

/// Parses a problem from TOML text; CSV references resolve against `base`.
pub fn parse_problem(src: &str, base: Option<&Path>) -> Result<LoadedProblem> {
    let raw: RawProblem = toml::from_str(src).map_err(|e| RadialError::Config(e.to_string().trim_end().to_string()))?;
    let ctx = Ctx { src, base: base.map(Path::to_path_buf) };
    build(&ctx, &raw)
}

/// Reads and parses a problem file.
pub fn load_problem(path: &Path) -> Result<LoadedProblem> {
    let src = std::fs::read_to_string(path).map_err(|e| RadialError::Config(format!("reading {}: {e}", path.display())))?;
    parse_problem(&src, path.parent()).map_err(|e| match e {
        RadialError::Config(msg) => RadialError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn build(ctx: &Ctx, raw: &RawProblem) -> Result<LoadedProblem> {
    let settings = match &raw.tol {
        Some(t) if !(*t.get_ref() > 0.0 && *t.get_ref() < 1.0) => return ctx.err("tol", t.span(), "must lie in (0, 1)"),
        Some(t) => DualSettings::with_tol(*t.get_ref()),
        None => DualSettings::default(),
    };
    let (kind, objective, oracle, qp): (_, Arc<dyn Objective>, Arc<dyn DualOracle>, _) = match raw.kind.get_ref().as_str() {
        "qp" => {
            let qp = Arc::new(build_qp(ctx, raw)?);
            ("qp", qp.clone(), qp.clone(), Some(qp))
        }
        "poisson" => {
            let f: Arc<dyn Objective> = Arc::new(build_poisson(ctx, raw)?);
            ("poisson", f.clone(), Arc::new(RadialDual::with_settings(f, settings)), None)
        }
        "custom" => {
            let f = build_custom(ctx, raw)?;
            ("custom", f.clone(), Arc::new(RadialDual::with_settings(f, settings)), None)
        }
        "composite" => {
            let c = Arc::new(build_composite(ctx, raw)?.with_settings(settings));
            ("composite", c.clone(), c, None)
        }
        other => return ctx.err("type", raw.kind.span(), format!("unknown problem type `{other}` (expected qp, poisson, composite or custom)")),
    };
    let n = objective.dim();
    let x0 = match &raw.x0 {
        Some(v) => {
            let x = ctx.vector("x0", v)?;
            ctx.expect_len("x0", v.span(), x.len(), n)?;
            x
        }
        None => Array1::zeros(n),
    };
    Ok(LoadedProblem { kind: kind.to_string(), objective, oracle, qp, x0, settings })
}

/// Columns of the factor `P` when a generated QP leaves `r` unset.
pub const DEFAULT_RANK: usize = 100;

fn build_qp(ctx: &Ctx, raw: &RawProblem) -> Result<QpInstance> {
    let has_data = raw.q.is_some() || raw.p.is_some() || raw.a.is_some();
    let qp = if !has_data {
        let size = |f: &Option<Spanned<usize>>, name: &str| match f {
            Some(v) => Ok(*v.get_ref()),
            None => ctx.missing(name, &raw.kind),
        };
        let (n, m) = (size(&raw.n, "n")?, size(&raw.m, "m")?);
        let r = raw.r.as_ref().map_or(DEFAULT_RANK, |r| *r.get_ref());
        generate_qp(n, m, r, raw.seed.unwrap_or(1)).or_else(|e| ctx.err("n", raw.kind.span(), e))?
    } else {
        let c = match &raw.c {
            Some(c) => ctx.vector("c", c)?,
            None => return ctx.missing("c", &raw.kind),
        };
        let n = c.len();
        let q = match (&raw.q, &raw.p) {
            (Some(q), None) => {
                let m = ctx.matrix("Q", q)?;
                if m.dim() != (n, n) {
                    return ctx.err("Q", q.span(), format!("has shape {:?}, expected ({n}, {n})", m.dim()));
                }
                if m.iter().zip(m.t().iter()).any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + a.abs())) {
                    return ctx.err("Q", q.span(), "must be symmetric");
                }
                QuadraticMatrix::Dense(m)
            }
            (None, Some(p)) => {
                let m = ctx.matrix("P", p)?;
                ctx.expect_len("P", p.span(), m.nrows(), n)?;
                QuadraticMatrix::Factored(m)
            }
            (Some(q), Some(_)) => return ctx.err("Q", q.span(), "give either `Q` or `P`, not both"),
            (None, None) => return ctx.missing("Q", &raw.kind),
        };
        let (a, a_span) = match &raw.a {
            Some(a) => (ctx.matrix("A", a)?, a.span()),
            None => return ctx.missing("A", &raw.kind),
        };
        if a.ncols() != n {
            return ctx.err("A", a_span, format!("has {} columns, expected {n}", a.ncols()));
        }
        let b = match &raw.b {
            Some(b) => {
                let v = ctx.vector("b", b)?;
                ctx.expect_len("b", b.span(), v.len(), a.nrows())?;
                if let Some(i) = v.iter().position(|&x| !(x > 0.0)) {
                    return ctx.err("b", b.span(), format!("entry {} is {}, but every entry must be positive", i + 1, v[i]));
                }
                v
            }
            None => Array1::ones(a.nrows()),
        };
        QpInstance::new(q, c, a, b)?
    };
    match &raw.lambda {
        Some(l) => qp.with_lambda(*l.get_ref()).or_else(|e| ctx.err("lambda", l.span(), e)),
        None => Ok(qp),
    }
}

fn build_poisson(ctx: &Ctx, raw: &RawProblem) -> Result<impl Objective> {
    let a = match &raw.a {
        Some(a) => ctx.matrix("A", a)?,
        None => return ctx.missing("A", &raw.kind),
    };
    let b = match &raw.b {
        Some(b) => {
            let v = ctx.vector("b", b)?;
            ctx.expect_len("b", b.span(), v.len(), a.nrows())?;
            v
        }
        None => return ctx.missing("b", &raw.kind),
    };
    let (anchor, span) = match &raw.anchor {
        Some(x) => (ctx.vector("anchor", x)?, x.span()),
        None => return ctx.missing("anchor", &raw.kind),
    };
    ctx.expect_len("anchor", span.clone(), anchor.len(), a.ncols())?;
    let lik = poisson_loglik(a, b).or_else(|e| ctx.err("b", raw.kind.span(), e))?;
    let at = lik.value(anchor.view());
    if !at.is_finite() {
        return ctx.err("anchor", span, "the likelihood is not finite here; every Aᵢx must be positive");
    }
    let u0 = raw.u0.as_ref().map_or(at - 1.0, |u| *u.get_ref());
    translate_truncate(lik, anchor, u0).or_else(|e| ctx.err("u0", raw.u0.as_ref().map_or(span, |u| u.span()), e))
}

fn build_custom(ctx: &Ctx, raw: &RawProblem) -> Result<Arc<dyn Objective>> {
    if let Some(name) = &raw.name {
        let n = match &raw.n {
            Some(n) if *n.get_ref() > 0 => *n.get_ref(),
            Some(n) => return ctx.err("n", n.span(), "must be positive"),
            None if name.get_ref() == "shifted_square" => 1,
            None => return ctx.missing("n", &raw.kind),
        };
        let f = match name.get_ref().as_str() {
            "sqrt_ball" => analytic::sqrt_ball(n),
            "half_quadratic" => analytic::half_quadratic(n),
            "cone" => analytic::cone(n),
            "quartic" => analytic::quartic(n),
            "paraboloid" => analytic::paraboloid(n),
            "affine_unbounded" => analytic::affine_unbounded(n),
            "shifted_square" if n == 1 => analytic::shifted_square(),
            "shifted_square" => return ctx.err("n", name.span(), "shifted_square is one-dimensional"),
            other => {
                return ctx.err(
                    "name",
                    name.span(),
                    format!("unknown objective `{other}` (expected sqrt_ball, half_quadratic, cone, quartic, paraboloid, affine_unbounded or shifted_square)"),
                )
            }
        };
        return Ok(Arc::new(f));
    }
    let (q, q_span) = match &raw.q {
        Some(q) => (ctx.matrix("Q", q)?, q.span()),
        None => return ctx.missing("name` or `Q", &raw.kind),
    };
    let n = q.nrows();
    if q.ncols() != n {
        return ctx.err("Q", q_span, "must be square");
    }
    let c = match &raw.c {
        Some(c) => {
            let v = ctx.vector("c", c)?;
            ctx.expect_len("c", c.span(), v.len(), n)?;
            v
        }
        None => Array1::zeros(n),
    };
    let k = raw.constant.as_ref().map_or(1.0, |k| *k.get_ref());
    let concave = is_psd((-&q).view());
    let (q1, q2, q3, c1, c2) = (q.clone(), q.clone(), q, c.clone(), c);
    let mut f = FnObjective::new(n, move |x| ExtReal::positive_part(k + c1.dot(&x) + 0.5 * x.dot(&q1.dot(&x))))
        .with_supgradient(move |x| &c2 + &q2.dot(&x))
        .with_hessian(move |_| q3.clone());
    if concave {
        f = f.concave();
    }
    Ok(Arc::new(f))
}

fn build_composite(ctx: &Ctx, raw: &RawProblem) -> Result<CompositeObjective> {
    let pieces = match &raw.pieces {
        Some(p) if p.get_ref().is_empty() => return ctx.err("pieces", p.span(), "needs at least one piece"),
        Some(p) => p,
        None => return ctx.missing("pieces", &raw.kind),
    };
    let mut oracles = Vec::new();
    for piece in pieces.get_ref() {
        if piece.kind.get_ref() == "composite" {
            return ctx.err("type", piece.kind.span(), "composites cannot be nested");
        }
        let loaded = build(ctx, piece)?;
        if let Some(first) = oracles.first() {
            let first: &Arc<dyn DualOracle> = first;
            if first.dim() != loaded.dim() {
                return ctx.err("pieces", piece.kind.span(), format!("piece has dimension {}, expected {}", loaded.dim(), first.dim()));
            }
        }
        oracles.push(loaded.oracle);
    }
    let rule = match (raw.rule.as_ref().map(|r| r.get_ref().as_str()), &raw.trim) {
        (None | Some("min"), None) => CompositionRule::Min,
        (Some("trimmed"), t) => CompositionRule::Trimmed(t.as_ref().map_or(0, |t| *t.get_ref())),
        (None | Some("min"), Some(t)) => return ctx.err("trim", t.span(), "only applies to rule = \"trimmed\""),
        (Some(other), _) => {
            let span = raw.rule.as_ref().expect("matched Some").span();
            return ctx.err("rule", span, format!("unknown rule `{other}` (expected min or trimmed)"));
        }
    };
    if let CompositionRule::Trimmed(t) = rule {
        if t >= oracles.len() {
            let span = raw.trim.as_ref().map_or(pieces.span(), |t| t.span());
            return ctx.err("trim", span, format!("cannot trim {t} of {} pieces", oracles.len()));
        }
    }
    CompositeObjective::new(oracles, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn inline_qp() {
        let p = parse_problem(
            "type = \"qp\"\nQ = [[1.0, 0.0], [0.0, 2.0]]\nc = [0.5, 0.0]\nA = [[1.0, 0.0], [0.0, 1.0]]\nb = [1.0, 2.0]\n",
            None,
        )
        .unwrap();
        let qp = p.qp.unwrap();
        assert_eq!((qp.n(), qp.m()), (2, 2));
        assert_eq!(p.oracle.dual_value(Array1::zeros(2).view(), None).unwrap(), ExtReal::ONE);
    }

    #[test]
    fn csv_matrix_is_resolved_relative_to_the_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.csv"), "1, 0\n0, 1\n-1, -1\n").unwrap();
        let path = dir.path().join("p.toml");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "type = \"qp\"\nP = [[1.0], [0.5]]\nc = [0.0, 0.1]\nA = {{ csv = \"a.csv\" }}").unwrap();
        let p = load_problem(&path).unwrap();
        assert_eq!(p.qp.unwrap().m(), 3);
    }

    #[test]
    fn diagnostics_carry_line_and_field() {
        let src = "type = \"qp\"\nQ = [[1.0]]\nc = [0.5]\nA = [[1.0]]\nb = [0.0]\n";
        let e = parse_problem(src, None).err().unwrap().to_string();
        assert!(e.contains("line 5") && e.contains("`b`"), "{e}");
        let e = parse_problem("type = \"qp\"\nQ = [[1.0, 2.0]]\nc = [0.5]\n", None).err().unwrap().to_string();
        assert!(e.contains("line 2") && e.contains("`Q`"), "{e}");
        let e = parse_problem("type = \"lp\"\n", None).err().unwrap().to_string();
        assert!(e.contains("line 1") && e.contains("`type`"), "{e}");
        let e = parse_problem("type = \"qp\"\nc = [1.0, \"x\"]\n", None).err().unwrap().to_string();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn custom_quadratic_and_named() {
        let p = parse_problem("type = \"custom\"\nQ = [[2.0]]\nc = [0.0]\nconstant = 0.1\n", None).unwrap();
        assert!(!p.objective.is_concave());
        let v = p.objective.value(ndarray::array![1.0].view()).value().unwrap();
        assert!((v - 1.1).abs() < 1e-15);
        let p = parse_problem("type = \"custom\"\nname = \"sqrt_ball\"\nn = 3\n", None).unwrap();
        assert!(p.objective.is_concave());
    }

    #[test]
    fn composite_of_pieces() {
        let src = "type = \"composite\"\nrule = \"min\"\n[[pieces]]\ntype = \"custom\"\nname = \"cone\"\nn = 2\n\
                   [[pieces]]\ntype = \"custom\"\nname = \"sqrt_ball\"\nn = 2\n";
        let p = parse_problem(src, None).unwrap();
        let v = p.objective.value(ndarray::array![0.5, 0.0].view()).value().unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn generated_qp() {
        let p = parse_problem("type = \"qp\"\nn = 3\nm = 9\nr = 2\nseed = 4\n", None).unwrap();
        assert_eq!(p.qp.unwrap().a, generate_qp(3, 9, 2, 4).unwrap().a);
    }
}
