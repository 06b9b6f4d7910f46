//! Fiber products `{(x, y) : f(x) = g(y)}` of two circle maps out of `[0, 1]`.
//!
//! On each cell of the product grid of breakpoints the lift difference
//! `H(x, y) = F(x) − G(y)` is affine, so every level set `H = n` meets the
//! cell in a segment, a single corner, or nothing. Edges are measured in the
//! sup norm of the square to keep lengths rational.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Signed;

use super::maps::{compose_check, ArcMap, CircleMap, Comparison};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::pl::PLFunction;
use crate::rational::{fmt_q, qmax, zero, Q};

pub type Pt = (Q, Q);

#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub graph: Arc<MetricGraph>,
    pub r: ArcMap,
    pub s: ArcMap,
    /// Coordinates of each vertex of `graph`.
    pub coords: Vec<Pt>,
}

impl FiberProduct {
    pub fn components(&self) -> usize {
        self.graph.components().count
    }
}

fn lerp(a: &Pt, b: &Pt, ha: &Q, hb: &Q, n: &Q) -> Pt {
    let s = (n - ha) / (hb - ha);
    (&a.0 + (&b.0 - &a.0) * &s, &a.1 + (&b.1 - &a.1) * &s)
}

/// Level-set pieces of `H` on one cell with corners `x0 < x1`, `y0 < y1`.
fn cell(x: (&Pt, &Pt), y: (&Pt, &Pt), segs: &mut BTreeSet<(Pt, Pt)>, pts: &mut BTreeSet<Pt>) -> Result<()> {
    let ((x0, f0), (x1, f1)) = (x.0, x.1);
    let ((y0, g0), (y1, g1)) = (y.0, y.1);
    // counter-clockwise corners and their H values
    let corners = [
        ((x0.clone(), y0.clone()), f0 - g0),
        ((x1.clone(), y0.clone()), f1 - g0),
        ((x1.clone(), y1.clone()), f1 - g1),
        ((x0.clone(), y1.clone()), f0 - g1),
    ];
    let lo = corners.iter().map(|c| &c.1).min().unwrap().ceil();
    let hi = corners.iter().map(|c| &c.1).max().unwrap().floor();
    if corners.iter().all(|c| c.1 == corners[0].1) && corners[0].1.is_integer() {
        return Err(Error::Precondition(format!(
            "fiber product contains the 2-cell [{}, {}] x [{}, {}]",
            fmt_q(x0),
            fmt_q(x1),
            fmt_q(y0),
            fmt_q(y1)
        )));
    }
    let mut n = lo;
    while n <= hi {
        let mut hits: BTreeSet<Pt> = BTreeSet::new();
        for i in 0..4 {
            let (a, ha) = &corners[i];
            let (b, hb) = &corners[(i + 1) % 4];
            if *ha == n {
                hits.insert(a.clone());
            }
            if (ha < &n && &n < hb) || (hb < &n && &n < ha) {
                hits.insert(lerp(a, b, ha, hb, &n));
            }
        }
        let hits: Vec<Pt> = hits.into_iter().collect();
        match hits.len() {
            0 => {}
            1 => {
                pts.insert(hits[0].clone());
            }
            2 => {
                pts.insert(hits[0].clone());
                pts.insert(hits[1].clone());
                segs.insert((hits[0].clone(), hits[1].clone()));
            }
            k => return Err(Error::Verification(format!("level set meets a cell boundary in {k} points"))),
        }
        n += Q::from_integer(1.into());
    }
    Ok(())
}

/// The fiber product of `f` and `g` with its coordinate projections.
pub fn fiber_product_circle(f: &CircleMap, g: &CircleMap) -> Result<FiberProduct> {
    let fl = f.unit_lift()?;
    let gl = g.unit_lift()?;
    let mut segs = BTreeSet::new();
    let mut pts = BTreeSet::new();
    for xi in fl.windows(2) {
        for yj in gl.windows(2) {
            cell((&xi[0], &xi[1]), (&yj[0], &yj[1]), &mut segs, &mut pts)?;
        }
    }
    if pts.is_empty() {
        return Err(Error::Precondition("fiber product is empty".into()));
    }
    let index: BTreeMap<Pt, usize> = pts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let coords: Vec<Pt> = pts.into_iter().collect();
    let names: Vec<String> = (0..coords.len()).map(|i| format!("w{i}")).collect();
    let edges = segs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let len = qmax(&(&b.0 - &a.0).abs(), &(&b.1 - &a.1).abs());
            (format!("s{k}"), names[index[a]].clone(), names[index[b]].clone(), len)
        })
        .collect();
    let graph = Arc::new(MetricGraph::new(names.clone(), edges)?);
    let proj = |which: fn(&Pt) -> &Q| -> Result<ArcMap> {
        let vertex = coords.iter().map(|p| which(p).clone()).collect();
        let pieces = segs
            .iter()
            .zip(graph.edges())
            .map(|((a, b), e)| vec![(zero(), which(a).clone()), (e.len.clone(), which(b).clone())])
            .collect();
        ArcMap::new(PLFunction::with_vertex_values(graph.clone(), vertex, pieces)?)
    };
    let r = proj(|p| &p.0)?;
    let s = proj(|p| &p.1)?;
    if compose_check(f, &r, g, &s)? != Comparison::Equal {
        return Err(Error::Verification("fiber product does not commute".into()));
    }
    Ok(FiberProduct { graph, r, s, coords })
}
