//! Parse and evaluate quantifier-free formulas, then bound a supremum.

use std::sync::Arc;

use continua::logic::{bound_quantifier, eval_qf, parse_formula, Assignment, Budget, Domain, Mode};
use continua::rational::{default_width, q, qi};
use continua::{MetricGraph, PLFunction};

fn main() -> continua::Result<()> {
    let g = Arc::new(MetricGraph::interval());
    let tent = PLFunction::on_single_edge(&g, vec![(qi(0), qi(0)), (q(1, 2), qi(1)), (qi(1), qi(0))])?;
    let a: Assignment = [(1, tent)].into_iter().collect();
    let phi = parse_formula("norm(x1*x1 - x1)")?;
    println!("{phi} = {}", eval_qf(&phi, &a, &default_width())?);

    let budget = Budget { breakpoints: 4, samples: 200, seed: 7 };
    let b = bound_quantifier(Mode::Sup, &phi, &[1], &g, &Assignment::new(), Domain::UnitBall, &budget, &default_width())?;
    println!("sup over the unit ball ≥ {} (candidate {} of {})", b.bound(), b.witness_index, b.candidates);
    Ok(())
}
