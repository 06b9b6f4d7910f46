use std::collections::BTreeMap;
use std::sync::Arc;

use super::ast::{Formula, Term};
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::pl::{same_graph, PLFunction};
use crate::poly::PiecewisePoly;
use crate::rational::{one, qi, zero, Q};

/// Variable index to PL function; all on one graph.
pub type Assignment = BTreeMap<usize, PLFunction>;

fn graph_of(a: &Assignment) -> Result<&Arc<MetricGraph>> {
    let mut it = a.values();
    let g = it
        .next()
        .ok_or_else(|| Error::Precondition("empty assignment".into()))?
        .graph();
    if it.any(|f| !same_graph(f.graph(), g)) {
        return Err(Error::GraphMismatch);
    }
    Ok(g)
}

fn pl_term(t: &Term, a: &Assignment, g: &Arc<MetricGraph>) -> Result<PLFunction> {
    match t {
        Term::Var(i) => a.get(i).cloned().ok_or(Error::Unassigned(*i)),
        Term::One => Ok(PLFunction::constant(g, one())),
        Term::Zero => Ok(PLFunction::zero(g)),
        Term::Scale(c, t) => Ok(pl_term(t, a, g)?.scale(c)),
        Term::Add(x, y) => pl_term(x, a, g)?.add(&pl_term(y, a, g)?),
        Term::Sub(x, y) => pl_term(x, a, g)?.sub(&pl_term(y, a, g)?),
        Term::Abs(t) => Ok(pl_term(t, a, g)?.abs()),
        Term::Mul(x, y) => match (constant(x), constant(y)) {
            (Some(c), _) => Ok(pl_term(y, a, g)?.scale(&c)),
            (_, Some(c)) => Ok(pl_term(x, a, g)?.scale(&c)),
            _ => Err(Error::DegreeCap("product inside a piecewise-linear context".into())),
        },
    }
}

// Value of a term with no variables.
fn constant(t: &Term) -> Option<Q> {
    match t {
        Term::Var(_) => None,
        Term::One => Some(one()),
        Term::Zero => Some(zero()),
        Term::Scale(c, t) => Some(c * constant(t)?),
        Term::Add(x, y) => Some(constant(x)? + constant(y)?),
        Term::Sub(x, y) => Some(constant(x)? - constant(y)?),
        Term::Mul(x, y) => Some(constant(x)? * constant(y)?),
        Term::Abs(t) => Some(num_traits::Signed::abs(&constant(t)?)),
    }
}

fn poly_term(t: &Term, a: &Assignment, g: &Arc<MetricGraph>) -> Result<PiecewisePoly> {
    if t.degree() <= 1 {
        return Ok(PiecewisePoly::from_pl(&pl_term(t, a, g)?));
    }
    match t {
        Term::Scale(c, t) => Ok(poly_term(t, a, g)?.scale(c)),
        Term::Add(x, y) => poly_term(x, a, g)?.add(&poly_term(y, a, g)?),
        Term::Sub(x, y) => poly_term(x, a, g)?.sub(&poly_term(y, a, g)?),
        Term::Mul(x, y) => poly_term(x, a, g)?.mul(&poly_term(y, a, g)?),
        Term::Abs(_) => Err(Error::DegreeCap("abs applies only to piecewise-linear terms".into())),
        Term::Var(_) | Term::One | Term::Zero => unreachable!("degree ≤ 1"),
    }
}

/// Exact value of a term as a piecewise polynomial.
pub fn eval_term(t: &Term, a: &Assignment) -> Result<PiecewisePoly> {
    t.check()?;
    let mut vars = Default::default();
    t.vars(&mut vars);
    if let Some(i) = vars.iter().find(|i| !a.contains_key(i)) {
        return Err(Error::Unassigned(*i));
    }
    poly_term(t, a, graph_of(a)?)
}

fn eval_at(f: &Formula, a: &Assignment, g: &Arc<MetricGraph>, tol: &Q) -> Result<CertifiedValue> {
    Ok(match f {
        Formula::Norm(t) => poly_term(t, a, g)?.sup_norm(tol),
        Formula::Const(c) => CertifiedValue::exact(c.clone()),
        Formula::Add(x, y) => eval_at(x, a, g, tol)?.add(&eval_at(y, a, g, tol)?),
        Formula::DotMinus(x, y) => eval_at(x, a, g, tol)?.dotminus(&eval_at(y, a, g, tol)?),
        Formula::Max(v) => fold(v, a, g, tol, CertifiedValue::max)?,
        Formula::Min(v) => fold(v, a, g, tol, CertifiedValue::min)?,
        Formula::Scale(c, x) => eval_at(x, a, g, tol)?.scale(c),
        Formula::Sqrt(x) => eval_at(x, a, g, tol)?.sqrt(tol)?,
        Formula::Dist(x, y) => {
            let d = Term::Sub(Box::new(x.clone()), Box::new(y.clone()));
            poly_term(&d, a, g)?.sup_norm(tol)
        }
    })
}

fn fold(
    v: &[Formula],
    a: &Assignment,
    g: &Arc<MetricGraph>,
    tol: &Q,
    op: fn(&CertifiedValue, &CertifiedValue) -> CertifiedValue,
) -> Result<CertifiedValue> {
    let mut acc: Option<CertifiedValue> = None;
    for f in v {
        let x = eval_at(f, a, g, tol)?;
        acc = Some(match acc {
            Some(y) => op(&y, &x),
            None => x,
        });
    }
    acc.ok_or_else(|| Error::Precondition("max/min of no arguments".into()))
}

/// Certified value of a quantifier-free formula, no wider than `width`.
pub fn eval_qf(f: &Formula, a: &Assignment, width: &Q) -> Result<CertifiedValue> {
    if width <= &zero() {
        return Err(Error::Precondition("interval width must be positive".into()));
    }
    f.check()?;
    if let Some(i) = f.vars().into_iter().find(|i| !a.contains_key(i)) {
        return Err(Error::Unassigned(i));
    }
    let g = match graph_of(a) {
        Ok(g) => g.clone(),
        // closed formulas evaluate on the one-point space
        Err(Error::Precondition(_)) => Arc::new(MetricGraph::new(vec!["p"], vec![]).expect("point")),
        Err(e) => return Err(e),
    };
    let mut tol = width.clone();
    let mut best = eval_at(f, a, &g, &tol)?;
    // square roots and sums widen enclosures; tighten until the result fits
    for _ in 0..12 {
        if &best.width() <= width {
            break;
        }
        tol = &tol / qi(1 << 16);
        best = eval_at(f, a, &g, &tol)?;
    }
    Ok(best)
}
