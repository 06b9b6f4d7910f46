use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    One,
    Zero,
    Scale(Q, Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Abs(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Norm(Term),
    Const(Q),
    Add(Box<Formula>, Box<Formula>),
    DotMinus(Box<Formula>, Box<Formula>),
    Max(Vec<Formula>),
    Min(Vec<Formula>),
    Scale(Q, Box<Formula>),
    Sqrt(Box<Formula>),
    Dist(Term, Term),
}

impl Term {
    /// Polynomial degree in the PL inputs.
    pub fn degree(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::One | Term::Zero => 0,
            Term::Scale(_, t) | Term::Abs(t) => t.degree(),
            Term::Add(a, b) | Term::Sub(a, b) => a.degree().max(b.degree()),
            Term::Mul(a, b) => a.degree() + b.degree(),
        }
    }

    /// Enforce the degree cap: a product must have a constant factor or two
    /// factors of equal degree 1 or 2; `abs` only applies to PL terms.
    pub fn check(&self) -> Result<()> {
        match self {
            Term::Var(_) | Term::One | Term::Zero => Ok(()),
            Term::Scale(_, t) => t.check(),
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.check()?;
                b.check()
            }
            Term::Mul(a, b) => {
                a.check()?;
                b.check()?;
                let (da, db) = (a.degree(), b.degree());
                if da == 0 || db == 0 || (da == db && da <= 2) {
                    Ok(())
                } else {
                    Err(Error::DegreeCap(format!(
                        "product of degree-{da} and degree-{db} factors; only products of two PL factors or two such products are supported"
                    )))
                }
            }
            Term::Abs(t) => {
                t.check()?;
                if t.degree() > 1 {
                    Err(Error::DegreeCap("abs applies only to piecewise-linear terms".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::One | Term::Zero => {}
            Term::Scale(_, t) | Term::Abs(t) => t.vars(out),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

impl Formula {
    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Formula::Norm(t) => t.vars(out),
            Formula::Const(_) => {}
            Formula::Add(a, b) | Formula::DotMinus(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Max(v) | Formula::Min(v) => v.iter().for_each(|f| f.collect_vars(out)),
            Formula::Scale(_, f) | Formula::Sqrt(f) => f.collect_vars(out),
            Formula::Dist(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            Formula::Norm(t) => t.check(),
            Formula::Const(_) => Ok(()),
            Formula::Add(a, b) | Formula::DotMinus(a, b) => {
                a.check()?;
                b.check()
            }
            Formula::Max(v) | Formula::Min(v) => v.iter().try_for_each(Formula::check),
            Formula::Scale(_, f) | Formula::Sqrt(f) => f.check(),
            Formula::Dist(a, b) => Term::Sub(Box::new(a.clone()), Box::new(b.clone())).check(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::One => write!(f, "1"),
            Term::Zero => write!(f, "0"),
            Term::Scale(c, t) => write!(f, "scale({}, {t})", fmt_q(c)),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Sub(a, b) => write!(f, "({a} - {b})"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
            Term::Abs(t) => write!(f, "abs({t})"),
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, name: &str, v: &[Formula]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Norm(t) => write!(f, "norm({t})"),
            Formula::Const(c) => write!(f, "{}", fmt_q(c)),
            Formula::Add(a, b) => write!(f, "({a} + {b})"),
            Formula::DotMinus(a, b) => write!(f, "dot-({a}, {b})"),
            Formula::Max(v) => list(f, "max", v),
            Formula::Min(v) => list(f, "min", v),
            Formula::Scale(c, x) => write!(f, "scale({}, {x})", fmt_q(c)),
            Formula::Sqrt(x) => write!(f, "sqrt({x})"),
            Formula::Dist(a, b) => write!(f, "d({a}, {b})"),
        }
    }
}
