//! Chain refinements of open covers: found on the interval, ruled out on
//! the circle.

use std::sync::Arc;

use continua::chain::{find_chain_refinement, Cover, SearchBudget, SearchOutcome};
use continua::rational::{q, qi};
use continua::sets::interval_set;
use continua::{MetricGraph, OpenSet, PLFunction};

fn report(name: &str, out: &SearchOutcome) {
    match out {
        SearchOutcome::Found(c) => println!("{name}: chain of {} links, assignment {:?}", c.chain.len(), c.assignment),
        SearchOutcome::Exhausted { depth, reason } => println!("{name}: exhausted at depth {depth} ({reason:?})"),
        SearchOutcome::Inconclusive { depth, reason } => println!("{name}: inconclusive at depth {depth}: {reason}"),
    }
}

fn main() -> continua::Result<()> {
    let i = Arc::new(MetricGraph::interval());
    let sets = vec![
        interval_set(&i, &qi(0), &q(1, 2))?,
        interval_set(&i, &q(1, 4), &q(3, 4))?,
        interval_set(&i, &q(2, 5), &qi(1))?,
    ];
    let u = Cover::new(&i, sets)?;
    report("interval", &find_chain_refinement(&u, 3, &SearchBudget::default())?);

    let c = Arc::new(MetricGraph::circle());
    let arc = |pts| -> continua::Result<OpenSet> { Ok(OpenSet::new(PLFunction::on_single_edge(&c, pts)?)) };
    let sets = vec![
        arc(vec![(qi(0), q(1, 4)), (q(1, 2), q(-1, 4)), (qi(1), q(1, 4))])?,
        arc(vec![(qi(0), q(-1, 12)), (q(1, 3), q(1, 4)), (q(5, 6), q(-1, 4)), (qi(1), q(-1, 12))])?,
        arc(vec![(qi(0), q(-1, 12)), (q(1, 6), q(-1, 4)), (q(2, 3), q(1, 4)), (qi(1), q(-1, 12))])?,
    ];
    let u = Cover::new(&c, sets)?;
    for depth in [2, 4, 6] {
        report("circle", &find_chain_refinement(&u, depth, &SearchBudget::default())?);
    }
    Ok(())
}
