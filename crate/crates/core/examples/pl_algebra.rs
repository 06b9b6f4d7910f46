//! Exact arithmetic on piecewise-linear functions over a metric graph.

use std::sync::Arc;

use continua::rational::{fmt_q, q, qi};
use continua::{MetricGraph, PLFunction};

fn show(f: &PLFunction) -> String {
    let edges: Vec<String> = f
        .pieces()
        .iter()
        .map(|pts| pts.iter().map(|(t, v)| format!("({}, {})", fmt_q(t), fmt_q(v))).collect::<Vec<_>>().join(" "))
        .collect();
    edges.join(" | ")
}

fn main() -> continua::Result<()> {
    let g = Arc::new(MetricGraph::path(&[qi(1), q(1, 2)])?);
    let f = PLFunction::from_vertex_values(&g, vec![qi(0), qi(1), q(-1, 2)], vec![vec![(q(1, 3), qi(2))], vec![]])?;
    let h = f.min_const(&qi(1)).max(&f.neg())?;
    println!("f = {}", show(&f));
    println!("max(min(f, 1), -f) = {}", show(&h));
    let (lo, at) = f.min_value();
    println!("min f = {} at {}", fmt_q(&lo), at.describe(&g));
    println!("|f|_sup = {}", fmt_q(&f.sup_norm()));

    // products leave the PL world and become piecewise polynomials
    let sq = f.mul(&f)?;
    let e = sq.extrema(&q(1, 1_000_000));
    println!("max f^2 in [{}, {}]", fmt_q(e.max.lower()), fmt_q(e.max.upper()));
    Ok(())
}
