//! Quantifier-free continuous-logic formulas over the PL model of C(X).

mod ast;
mod axiom;
mod eval;
mod parse;
mod quantifier;

pub use ast::{Formula, Term};
pub use axiom::{projectionless_formula, projectionless_value, PROJECTIONLESS};
pub use eval::{eval_qf, eval_term, Assignment};
pub use parse::{parse_formula, parse_term};
pub use quantifier::{bound_quantifier, Bound, Budget, Domain, Mode};
