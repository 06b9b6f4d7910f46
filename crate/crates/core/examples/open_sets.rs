//! Open and closed sets as strict superlevel and sublevel sets.

use std::sync::Arc;

use continua::rational::{q, qi};
use continua::sets::{covers, interval_set, mesh_cells};
use continua::MetricGraph;

fn main() -> continua::Result<()> {
    let g = Arc::new(MetricGraph::interval());
    let a = interval_set(&g, &qi(0), &q(1, 2))?;
    let b = interval_set(&g, &q(1, 3), &qi(1))?;
    let c = interval_set(&g, &q(2, 3), &qi(1))?;
    println!("a ∪ c covers I: {:?}", covers(&g, &[a.clone(), c.clone()])?.is_ok());
    println!("a ∪ b covers I: {:?}", covers(&g, &[a.clone(), b.clone()])?.is_ok());
    let gap = a.union(&c)?.complement();
    if let Some(p) = gap.some_point() {
        println!("I \\ (a ∪ c) contains {}", p.describe(&g));
    }
    println!("(a ∪ c) has {} components", a.union(&c)?.components().len());
    println!("mesh at depth 2 has {} cells", mesh_cells(&g, 2)?.len());
    Ok(())
}
