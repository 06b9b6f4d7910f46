//! The universal axiom separating connected spaces: `C(X)` is projectionless
//! iff this formula vanishes on every norm-one `x1`.

use num_traits::Signed;

use super::ast::Formula;
use super::eval::{eval_qf, Assignment};
use super::parse::parse_formula;
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::rational::{one, q, Q};

/// `min(2‖1 − ff*‖ ∸ 1, 1 ∸ 4‖ff* − (ff*)²‖)` for real `f`.
pub const PROJECTIONLESS: &str = "min(dot-(2*norm(1-x1*x1), 1), dot-(1, 4*norm(x1*x1-(x1*x1)*(x1*x1))))";

pub fn projectionless_formula() -> Formula {
    parse_formula(PROJECTIONLESS).expect("axiom parses")
}

/// Value of the axiom body at `f`, which must have sup-norm 1.
pub fn projectionless_value(f: &PLFunction, width: &Q) -> Result<CertifiedValue> {
    let n = f.sup_norm();
    if (n - one()).abs() > q(1, 1_000_000_000) {
        return Err(Error::Precondition(format!(
            "projectionless axiom needs a norm-one function, got norm {}",
            crate::rational::fmt_q(&f.sup_norm())
        )));
    }
    let a: Assignment = [(1, f.clone())].into_iter().collect();
    eval_qf(&projectionless_formula(), &a, width)
}
