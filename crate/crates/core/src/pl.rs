//! Continuous piecewise-linear functions on a metric graph, with exact
//! rational breakpoints.
//!
//! Each edge carries a strictly increasing list of `(t, value)` breakpoints
//! running from `t = 0` to `t = len`. Collinear interior breakpoints are
//! always removed, so two functions are equal iff their representations are.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::rational::{fmt_q, qi, zero, Q};

pub(crate) fn same_graph(a: &Arc<MetricGraph>, b: &Arc<MetricGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct PLFunction {
    graph: Arc<MetricGraph>,
    vertex: Vec<Q>,
    pieces: Vec<Vec<(Q, Q)>>,
}

impl PartialEq for PLFunction {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph) && self.vertex == other.vertex && self.pieces == other.pieces
    }
}

/// Drop interior breakpoints lying on the segment through their neighbours.
fn simplify(pts: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    let mut out: Vec<(Q, Q)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 {
            let (t0, v0) = &out[out.len() - 2];
            let (t1, v1) = &out[out.len() - 1];
            if (v1 - v0) * (&p.0 - t1) == (&p.1 - v1) * (t1 - t0) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Interpolate a sorted breakpoint list at `t` (assumed inside its range).
pub(crate) fn interpolate(pts: &[(Q, Q)], t: &Q) -> Q {
    let i = pts.partition_point(|(s, _)| s <= t);
    if i == 0 {
        return pts[0].1.clone();
    }
    if i == pts.len() {
        return pts[pts.len() - 1].1.clone();
    }
    let (t0, v0) = &pts[i - 1];
    if t0 == t {
        return v0.clone();
    }
    let (t1, v1) = &pts[i];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Sorted union of the breakpoint parameters of two lists.
pub(crate) fn merge_ts(a: &[(Q, Q)], b: &[(Q, Q)]) -> Vec<Q> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                x.0.clone()
            }
            (Some(x), Some(y)) if x.0 > y.0 => {
                j += 1;
                y.0.clone()
            }
            (Some(x), Some(_)) => {
                i += 1;
                j += 1;
                x.0.clone()
            }
            (Some(x), None) => {
                i += 1;
                x.0.clone()
            }
            (None, Some(y)) => {
                j += 1;
                y.0.clone()
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

impl PLFunction {
    /// Build from per-edge breakpoints (edge order of the graph). Vertex values
    /// are read off the edges; isolated vertices must use
    /// [`PLFunction::with_vertex_values`].
    pub fn new(graph: Arc<MetricGraph>, pieces: Vec<Vec<(Q, Q)>>) -> Result<Self> {
        let mut vertex: Vec<Option<Q>> = vec![None; graph.vertex_count()];
        for (e, pts) in graph.edges().iter().zip(&pieces) {
            if let (Some(first), Some(last)) = (pts.first(), pts.last()) {
                vertex[e.u].get_or_insert_with(|| first.1.clone());
                vertex[e.v].get_or_insert_with(|| last.1.clone());
            }
        }
        if let Some(v) = vertex.iter().position(Option::is_none) {
            return Err(Error::InvalidFunction(format!(
                "vertex {} has no incident edge; give its value explicitly",
                graph.vertices()[v]
            )));
        }
        let vertex = vertex.into_iter().map(Option::unwrap).collect();
        Self::with_vertex_values(graph, vertex, pieces)
    }

    pub fn with_vertex_values(graph: Arc<MetricGraph>, vertex: Vec<Q>, pieces: Vec<Vec<(Q, Q)>>) -> Result<Self> {
        if vertex.len() != graph.vertex_count() {
            return Err(Error::InvalidFunction(format!(
                "{} vertex values for {} vertices",
                vertex.len(),
                graph.vertex_count()
            )));
        }
        if pieces.len() != graph.edge_count() {
            return Err(Error::InvalidFunction(format!(
                "{} edge lists for {} edges",
                pieces.len(),
                graph.edge_count()
            )));
        }
        let mut out = Vec::with_capacity(pieces.len());
        for (e, pts) in graph.edges().iter().zip(pieces) {
            if pts.len() < 2 {
                return Err(Error::InvalidFunction(format!("edge {}: need at least two breakpoints", e.id)));
            }
            if !pts[0].0.is_zero() || pts[pts.len() - 1].0 != e.len {
                return Err(Error::InvalidFunction(format!("edge {}: breakpoints must span [0, len]", e.id)));
            }
            if pts.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidFunction(format!("edge {}: breakpoints not strictly increasing", e.id)));
            }
            if pts[0].1 != vertex[e.u] || pts[pts.len() - 1].1 != vertex[e.v] {
                return Err(Error::InvalidFunction(format!(
                    "edge {}: endpoint values disagree with vertex values (discontinuous)",
                    e.id
                )));
            }
            out.push(simplify(pts));
        }
        Ok(Self { graph, vertex, pieces: out })
    }

    pub fn constant(graph: &Arc<MetricGraph>, c: Q) -> Self {
        let pieces = graph
            .edges()
            .iter()
            .map(|e| vec![(zero(), c.clone()), (e.len.clone(), c.clone())])
            .collect();
        Self { graph: graph.clone(), vertex: vec![c; graph.vertex_count()], pieces }
    }

    pub fn zero(graph: &Arc<MetricGraph>) -> Self {
        Self::constant(graph, zero())
    }

    /// Vertex values plus strictly interior `(t, value)` points per edge.
    pub fn from_vertex_values(graph: &Arc<MetricGraph>, vertex: Vec<Q>, interior: Vec<Vec<(Q, Q)>>) -> Result<Self> {
        if interior.len() != graph.edge_count() {
            return Err(Error::InvalidFunction("one interior list per edge required".into()));
        }
        if vertex.len() != graph.vertex_count() {
            return Err(Error::InvalidFunction("one value per vertex required".into()));
        }
        let pieces = graph
            .edges()
            .iter()
            .zip(interior)
            .map(|(e, inner)| {
                let mut pts = Vec::with_capacity(inner.len() + 2);
                pts.push((zero(), vertex[e.u].clone()));
                pts.extend(inner);
                pts.push((e.len.clone(), vertex[e.v].clone()));
                pts
            })
            .collect();
        Self::with_vertex_values(graph.clone(), vertex, pieces)
    }

    /// Convenience for single-edge graphs such as the interval.
    pub fn on_single_edge(graph: &Arc<MetricGraph>, pts: Vec<(Q, Q)>) -> Result<Self> {
        if graph.edge_count() != 1 {
            return Err(Error::InvalidFunction("graph must have exactly one edge".into()));
        }
        Self::new(graph.clone(), vec![pts])
    }

    /// `t ↦ t` on a single-edge graph.
    pub fn identity(graph: &Arc<MetricGraph>) -> Result<Self> {
        let len = graph.edges().first().map(|e| e.len.clone()).unwrap_or_else(zero);
        Self::on_single_edge(graph, vec![(zero(), zero()), (len.clone(), len)])
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn pieces(&self) -> &[Vec<(Q, Q)>] {
        &self.pieces
    }

    pub fn breakpoints(&self, edge: usize) -> &[(Q, Q)] {
        &self.pieces[edge]
    }

    pub fn vertex_values(&self) -> &[Q] {
        &self.vertex
    }

    pub fn vertex_value(&self, v: usize) -> &Q {
        &self.vertex[v]
    }

    pub fn breakpoint_count(&self) -> usize {
        self.pieces.iter().map(Vec::len).sum()
    }

    pub fn eval_edge(&self, edge: usize, t: &Q) -> Q {
        interpolate(&self.pieces[edge], t)
    }

    pub fn eval(&self, p: &Point) -> Result<Q> {
        match p {
            Point::Vertex(v) => self
                .vertex
                .get(*v)
                .cloned()
                .ok_or_else(|| Error::UnknownEdge(format!("vertex #{v}"))),
            Point::Edge { edge, t } => {
                let e = self
                    .graph
                    .edges()
                    .get(*edge)
                    .ok_or_else(|| Error::UnknownEdge(format!("#{edge}")))?;
                if t.is_negative() || *t > e.len {
                    return Err(Error::PointOutOfRange { value: fmt_q(t), len: fmt_q(&e.len) });
                }
                Ok(self.eval_edge(*edge, t))
            }
        }
    }

    pub fn map(&self, f: impl Fn(&Q) -> Q) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|pts| simplify(pts.iter().map(|(t, v)| (t.clone(), f(v))).collect()))
            .collect();
        Self { graph: self.graph.clone(), vertex: self.vertex.iter().map(&f).collect(), pieces }
    }

    fn check_graph(&self, other: &Self) -> Result<()> {
        if same_graph(&self.graph, &other.graph) {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// Pointwise combination on the merged breakpoints. With `crossings`,
    /// points where `self - other` changes sign are inserted first, which
    /// makes the result exact for `min` and `max`.
    fn zip_with(&self, other: &Self, crossings: bool, op: impl Fn(&Q, &Q) -> Q) -> Result<Self> {
        self.check_graph(other)?;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (a, b) in self.pieces.iter().zip(&other.pieces) {
            let ts = merge_ts(a, b);
            let vals: Vec<(Q, Q, Q)> = ts
                .into_iter()
                .map(|t| {
                    let (x, y) = (interpolate(a, &t), interpolate(b, &t));
                    (t, x, y)
                })
                .collect();
            let mut pts = Vec::with_capacity(vals.len() * 2);
            for (i, (t, x, y)) in vals.iter().enumerate() {
                if crossings && i > 0 {
                    let (t0, x0, y0) = &vals[i - 1];
                    let d0 = x0 - y0;
                    let d1 = x - y;
                    if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                        let tc = t0 + (t - t0) * &d0 / (&d0 - &d1);
                        let xc = interpolate(a, &tc);
                        let v = op(&xc, &xc);
                        pts.push((tc, v));
                    }
                }
                pts.push((t.clone(), op(x, y)));
            }
            pieces.push(simplify(pts));
        }
        let vertex = self.vertex.iter().zip(&other.vertex).map(|(x, y)| op(x, y)).collect();
        Ok(Self { graph: self.graph.clone(), vertex, pieces })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, false, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, false, |x, y| x - y)
    }

    pub fn min(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, true, |x, y| if x <= y { x.clone() } else { y.clone() })
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, true, |x, y| if x >= y { x.clone() } else { y.clone() })
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|v| v * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn add_const(&self, c: &Q) -> Self {
        self.map(|v| v + c)
    }

    pub fn abs(&self) -> Self {
        self.max(&self.neg()).expect("same graph")
    }

    pub fn min_const(&self, c: &Q) -> Self {
        self.min(&Self::constant(&self.graph, c.clone())).expect("same graph")
    }

    pub fn max_const(&self, c: &Q) -> Self {
        self.max(&Self::constant(&self.graph, c.clone())).expect("same graph")
    }

    /// Every breakpoint and vertex, each with its value.
    fn samples(&self) -> impl Iterator<Item = (Point, &Q)> + '_ {
        let verts = self.vertex.iter().enumerate().map(|(v, x)| (Point::Vertex(v), x));
        let inner = self.pieces.iter().enumerate().flat_map(|(e, pts)| {
            let n = pts.len();
            pts[1..n - 1].iter().map(move |(t, v)| (Point::Edge { edge: e, t: t.clone() }, v))
        });
        verts.chain(inner)
    }

    /// Exact minimum with the first point attaining it.
    pub fn min_value(&self) -> (Q, Point) {
        let mut best: Option<(Point, &Q)> = None;
        for (p, v) in self.samples() {
            if best.as_ref().map_or(true, |(_, b)| v < *b) {
                best = Some((p, v));
            }
        }
        let (p, v) = best.expect("graph has a vertex");
        (v.clone(), p)
    }

    /// Exact maximum with the first point attaining it.
    pub fn max_value(&self) -> (Q, Point) {
        let mut best: Option<(Point, &Q)> = None;
        for (p, v) in self.samples() {
            if best.as_ref().map_or(true, |(_, b)| v > *b) {
                best = Some((p, v));
            }
        }
        let (p, v) = best.expect("graph has a vertex");
        (v.clone(), p)
    }

    /// Sup-norm `max |f|`, exact.
    pub fn sup_norm(&self) -> Q {
        let (lo, _) = self.min_value();
        let (hi, _) = self.max_value();
        if -&lo > hi {
            -lo
        } else {
            hi
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.min_value().0.is_negative()
    }

    /// Points on `edge` strictly inside it where the function vanishes or
    /// changes sign (interior breakpoints with value 0 included).
    pub fn interior_zeros(&self, edge: usize) -> Vec<Q> {
        let pts = &self.pieces[edge];
        let mut out = Vec::new();
        for i in 0..pts.len() {
            let (t, v) = &pts[i];
            if i > 0 {
                let (t0, v0) = &pts[i - 1];
                if (v0.is_positive() && v.is_negative()) || (v0.is_negative() && v.is_positive()) {
                    out.push(t0 + (t - t0) * v0 / (v0 - v));
                }
            }
            if i > 0 && i + 1 < pts.len() && v.is_zero() {
                out.push(t.clone());
            }
        }
        out
    }

    /// Scale so that `max |f| = 1`; `None` for the zero function.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.sup_norm();
        if n.is_zero() {
            None
        } else {
            Some(self.scale(&(qi(1) / n)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn interval() -> Arc<MetricGraph> {
        Arc::new(MetricGraph::interval())
    }

    fn lin(g: &Arc<MetricGraph>, a: Q, b: Q) -> PLFunction {
        PLFunction::on_single_edge(g, vec![(zero(), a), (qi(1), b)]).unwrap()
    }

    #[test]
    fn evaluation() {
        let g = interval();
        let t = lin(&g, qi(0), qi(1));
        assert_eq!(t.eval(&Point::on_edge(&g, 0, q(1, 2)).unwrap()).unwrap(), q(1, 2));
        let one = PLFunction::constant(&g, qi(1));
        assert_eq!(one.eval(&Point::Vertex(1)).unwrap(), qi(1));
        let tent = PLFunction::on_single_edge(&g, vec![(qi(0), qi(0)), (q(1, 2), qi(1)), (qi(1), qi(0))]).unwrap();
        assert_eq!(tent.eval(&Point::on_edge(&g, 0, q(1, 4)).unwrap()).unwrap(), q(1, 2));
        assert!(tent.eval(&Point::Edge { edge: 3, t: q(1, 2) }).is_err());
    }

    #[test]
    fn algebra_examples() {
        let g = interval();
        let t = lin(&g, qi(0), qi(1));
        let s = lin(&g, qi(1), qi(0));
        assert_eq!(t.add(&s).unwrap(), PLFunction::constant(&g, qi(1)));
        let a = t.add_const(&q(-1, 2)).abs();
        assert_eq!(
            a.breakpoints(0),
            &[(qi(0), q(1, 2)), (q(1, 2), qi(0)), (qi(1), q(1, 2))]
        );
        let m = t.min(&s).unwrap();
        assert_eq!(m.max_value().0, q(1, 2));
        assert_eq!(m.max_value().1, Point::on_edge(&g, 0, q(1, 2)).unwrap());
    }

    #[test]
    fn discontinuity_rejected() {
        let g = Arc::new(MetricGraph::path(&[qi(1), qi(1)]).unwrap());
        let bad = PLFunction::new(
            g.clone(),
            vec![vec![(qi(0), qi(0)), (qi(1), qi(1))], vec![(qi(0), qi(2)), (qi(1), qi(0))]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn mismatched_graphs() {
        let a = PLFunction::constant(&interval(), qi(1));
        let b = PLFunction::constant(&Arc::new(MetricGraph::circle()), qi(1));
        assert_eq!(a.add(&b), Err(Error::GraphMismatch));
    }

    #[test]
    fn zeros_found() {
        let g = interval();
        let f = lin(&g, qi(-1), qi(1));
        assert_eq!(f.interior_zeros(0), vec![q(1, 2)]);
    }
}
