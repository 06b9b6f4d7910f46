//! One-sided bounds on `sup`/`inf` quantifiers by searching PL candidates.

use std::sync::Arc;

use super::ast::Formula;
use super::eval::{eval_qf, Assignment};
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::pl::PLFunction;
use crate::rational::{one, qi, Q};
use crate::random;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sup,
    Inf,
}

/// Where the quantified variables range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Sup-norm at most 1.
    UnitBall,
    /// Sup-norm exactly 1.
    UnitSphere,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Interior breakpoints per edge of each random candidate.
    pub breakpoints: usize,
    /// Number of random candidates after the fixed ones.
    pub samples: usize,
    pub seed: u64,
}

/// A one-sided bound: for `Sup` the true supremum is at least
/// `value.lower()`; for `Inf` the true infimum is at most `value.upper()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub mode: Mode,
    pub value: CertifiedValue,
    pub witness: Assignment,
    pub witness_index: usize,
    pub candidates: usize,
}

impl Bound {
    /// The certified one-sided bound.
    pub fn bound(&self) -> &Q {
        match self.mode {
            Mode::Sup => self.value.lower(),
            Mode::Inf => self.value.upper(),
        }
    }
}

fn candidate(
    graph: &Arc<MetricGraph>,
    index: usize,
    domain: Domain,
    budget: &Budget,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<PLFunction> {
    match (index, domain) {
        (0, Domain::UnitBall) => Some(PLFunction::zero(graph)),
        (0, Domain::UnitSphere) => None,
        (1, _) => Some(PLFunction::constant(graph, one())),
        (_, Domain::UnitBall) => Some(random::pl(rng, graph, budget.breakpoints, &qi(-1), &qi(1))),
        (_, Domain::UnitSphere) => Some(random::normalized_pl(rng, graph, budget.breakpoints)),
    }
}

/// Search `2 + samples` candidate tuples for `vars` (all-zero, all-one,
/// then seeded random PL functions), keeping `fixed` as the rest of the
/// assignment. The best candidate wins; ties go to the earliest.
#[allow(clippy::too_many_arguments)]
pub fn bound_quantifier(
    mode: Mode,
    formula: &Formula,
    vars: &[usize],
    graph: &Arc<MetricGraph>,
    fixed: &Assignment,
    domain: Domain,
    budget: &Budget,
    width: &Q,
) -> Result<Bound> {
    if vars.is_empty() {
        return Err(Error::Precondition("no variables to quantify".into()));
    }
    let mut rng = random::rng(budget.seed);
    let mut best: Option<Bound> = None;
    let mut seen = 0;
    for index in 0..budget.samples + 2 {
        let mut a = fixed.clone();
        let mut skip = false;
        for &v in vars {
            match candidate(graph, index, domain, budget, &mut rng) {
                Some(f) => {
                    a.insert(v, f);
                }
                None => skip = true,
            }
        }
        if skip {
            continue;
        }
        seen += 1;
        let value = eval_qf(formula, &a, width)?;
        let better = match &best {
            None => true,
            Some(b) => match mode {
                Mode::Sup => value.lower() > b.value.lower(),
                Mode::Inf => value.upper() < b.value.upper(),
            },
        };
        if better {
            best = Some(Bound { mode, value, witness: a, witness_index: index, candidates: 0 });
        }
    }
    let mut best = best.expect("at least the constant candidate");
    best.candidates = seen;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::rational::default_width;

    fn budget(samples: usize) -> Budget {
        Budget { breakpoints: 3, samples, seed: 7 }
    }

    #[test]
    fn norm_bounds() {
        let g = Arc::new(MetricGraph::interval());
        let f = parse_formula("norm(x1)").unwrap();
        let w = default_width();
        let sup = bound_quantifier(Mode::Sup, &f, &[1], &g, &Assignment::new(), Domain::UnitBall, &budget(5), &w).unwrap();
        assert_eq!(sup.bound(), &qi(1));
        let inf = bound_quantifier(Mode::Inf, &f, &[1], &g, &Assignment::new(), Domain::UnitBall, &budget(5), &w).unwrap();
        assert_eq!(inf.bound(), &qi(0));
        assert_eq!(inf.witness_index, 0);
    }

    #[test]
    fn monotone_in_samples() {
        let g = Arc::new(MetricGraph::interval());
        let f = parse_formula("norm(x1 - x1*x1)").unwrap();
        let w = default_width();
        let mut last = None;
        for n in [0, 2, 5, 10] {
            let b = bound_quantifier(Mode::Sup, &f, &[1], &g, &Assignment::new(), Domain::UnitBall, &budget(n), &w).unwrap();
            if let Some(prev) = last {
                assert!(b.bound() >= &prev);
            }
            let again = eval_qf(&f, &b.witness, &w).unwrap();
            assert_eq!(again, b.value);
            last = Some(b.bound().clone());
        }
    }

    #[test]
    fn empty_variable_list() {
        let g = Arc::new(MetricGraph::interval());
        let f = parse_formula("norm(x1)").unwrap();
        let r = bound_quantifier(Mode::Sup, &f, &[], &g, &Assignment::new(), Domain::UnitBall, &budget(1), &default_width());
        assert!(r.is_err());
    }
}
