//! Build a witness from a nonnegative tuple and turn it back into a chain.

use std::sync::Arc;

use continua::chain::{build_witness, extract_chain, psi0, sigma_parts};
use continua::rational::{default_width, fmt_q, q, qi};
use continua::{MetricGraph, PLFunction, Q};

fn main() -> continua::Result<()> {
    let g = Arc::new(MetricGraph::interval());
    let tent = |pts: Vec<(Q, Q)>| PLFunction::on_single_edge(&g, pts);
    let fs = vec![
        tent(vec![(qi(0), qi(1)), (q(1, 2), qi(0)), (qi(1), qi(0))])?,
        tent(vec![(qi(0), qi(0)), (q(1, 2), qi(1)), (qi(1), qi(0))])?,
        tent(vec![(qi(0), qi(0)), (q(1, 2), qi(0)), (qi(1), qi(1))])?,
    ];
    let delta = psi0(&fs)?.lower().clone() / qi(2);
    let (w, c) = build_witness(&fs, &delta)?;
    let parts = sigma_parts(&fs, &w, &default_width())?;
    println!("k = {}, m = {}, depth {}, chain assignment {:?}", fs.len(), w.m, c.depth, c.assignment);
    println!("sigma body {} ≤ δ = {}", parts.value, fmt_q(&delta));
    println!("ψ₁ = {}, ψ₂ = {}, deficit = {}", parts.psi1, parts.psi2, parts.deficit);

    let ex = extract_chain(&fs, &w, &default_width())?;
    ex.certificate.verify(&g)?;
    println!("extracted {} links, kept {:?}, refines via {:?}", ex.links.len(), ex.kept, ex.certificate.assignment);
    Ok(())
}
