//! Fiber products of circle maps out of the arc, computed cell by cell.

use std::sync::Arc;

use continua::amalgam::{fiber_product_circle, CircleMap};
use continua::rational::{fmt_q, q, qi};
use continua::{MetricGraph, PLFunction};

fn show(name: &str, f: &CircleMap, g: &CircleMap) -> continua::Result<()> {
    match fiber_product_circle(f, g) {
        Ok(fp) => {
            let pts: Vec<String> = fp.coords.iter().map(|(x, y)| format!("({}, {})", fmt_q(x), fmt_q(y))).collect();
            println!("{name}: {} components, {} segments, vertices {}", fp.components(), fp.graph.edge_count(), pts.join(" "));
        }
        Err(e) => println!("{name}: {e}"),
    }
    Ok(())
}

fn main() -> continua::Result<()> {
    let f = CircleMap::standard();
    show("x vs y + 1/2", &f, &CircleMap::shifted(&q(1, 2)))?;
    show("x vs y", &f, &f)?;
    let i = Arc::new(MetricGraph::interval());
    let twice = CircleMap::new(PLFunction::on_single_edge(&i, vec![(qi(0), qi(0)), (qi(1), qi(2))])?);
    show("2x vs y", &twice, &f)?;
    let flat = CircleMap::new(PLFunction::zero(&i));
    show("0 vs 0", &flat, &flat)?;
    Ok(())
}
