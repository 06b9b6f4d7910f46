//! Two maps from the arc onto the circle whose fiber product is
//! disconnected, and candidate connected completions that all fail.

use std::sync::Arc;

use continua::amalgam::{fiber_product_circle, hoehn_check, ArcMap, CircleMap};
use continua::rational::{q, qi};
use continua::{MetricGraph, PLFunction};

fn main() -> continua::Result<()> {
    let f = CircleMap::standard();
    let g = CircleMap::shifted(&q(1, 2));
    let fp = fiber_product_circle(&f, &g)?;
    println!("fiber product: {}", hoehn_check(&fp.graph, &fp.r, &fp.s, &f, &g)?);

    let w = Arc::new(MetricGraph::interval());
    let r = ArcMap::new(PLFunction::identity(&w)?)?;
    let candidates = [
        ("s = r", r.clone()),
        ("s = 1 - r", ArcMap::new(PLFunction::identity(&w)?.neg().add_const(&qi(1)))?),
        ("s = 0", ArcMap::constant(&w, qi(0))?),
    ];
    for (name, s) in candidates {
        println!("W = [0,1], r = id, {name}: {}", hoehn_check(&w, &r, &s, &f, &g)?);
    }
    Ok(())
}
