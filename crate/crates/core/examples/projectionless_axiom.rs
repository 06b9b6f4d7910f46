//! The projectionless axiom vanishes on connected graphs and detects
//! disconnection through a component indicator.

use std::sync::Arc;

use continua::logic::{projectionless_value, PROJECTIONLESS};
use continua::random;
use continua::rational::{default_width, qi};
use continua::{MetricGraph, PLFunction};

fn main() -> continua::Result<()> {
    println!("axiom body: {PROJECTIONLESS}");
    let g = Arc::new(MetricGraph::circle());
    let mut rng = random::rng(0);
    let mut worst = qi(0);
    for _ in 0..50 {
        let f = random::normalized_pl(&mut rng, &g, 5);
        let v = projectionless_value(&f, &default_width())?;
        if v.upper() > &worst {
            worst = v.upper().clone();
        }
    }
    println!("circle: largest value over 50 samples ≤ {}", continua::rational::to_f64(&worst));

    let two = Arc::new(MetricGraph::disjoint_intervals(2));
    let indicator = PLFunction::with_vertex_values(
        two.clone(),
        vec![qi(1), qi(1), qi(0), qi(0)],
        vec![vec![(qi(0), qi(1)), (qi(1), qi(1))], vec![(qi(0), qi(0)), (qi(1), qi(0))]],
    )?;
    println!("two intervals, indicator: {}", projectionless_value(&indicator, &default_width())?);
    Ok(())
}
