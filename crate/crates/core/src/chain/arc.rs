//! Arc-length coordinates on a graph that is an arc.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::{interpolate, PLFunction};
use crate::rational::{pow2, zero, Q};

#[derive(Clone, Debug)]
pub struct ArcCoords {
    graph: Arc<MetricGraph>,
    order: Vec<(usize, bool)>,
    offsets: Vec<Q>,
    total: Q,
}

impl ArcCoords {
    pub fn new(graph: &Arc<MetricGraph>) -> Result<Self> {
        let order = graph
            .arc_order()
            .ok_or_else(|| Error::Precondition("X must be an arc (a path graph)".into()))?;
        let mut offsets = Vec::with_capacity(order.len());
        let mut total = zero();
        for &(e, _) in &order {
            offsets.push(total.clone());
            total += &graph.edge(e).len;
        }
        Ok(Self { graph: graph.clone(), order, offsets, total })
    }

    pub fn total(&self) -> &Q {
        &self.total
    }

    pub fn point(&self, s: &Q) -> Point {
        let i = self.offsets.partition_point(|o| o <= s).max(1) - 1;
        let (e, forward) = self.order[i];
        let local = s - &self.offsets[i];
        let t = if forward { local } else { &self.graph.edge(e).len - local };
        Point::on_edge(&self.graph, e, t).expect("inside the arc")
    }

    /// Arc coordinate of a point of the graph.
    pub fn coord(&self, p: &Point) -> Q {
        match p {
            Point::Edge { edge, t } => {
                let i = self.order.iter().position(|(e, _)| e == edge).expect("edge on the arc");
                let (e, forward) = self.order[i];
                if forward {
                    &self.offsets[i] + t
                } else {
                    &self.offsets[i] + &self.graph.edge(e).len - t
                }
            }
            Point::Vertex(v) => {
                let (e0, f0) = self.order[0];
                let start = if f0 { self.graph.edge(e0).u } else { self.graph.edge(e0).v };
                if *v == start {
                    return zero();
                }
                for (i, &(e, forward)) in self.order.iter().enumerate() {
                    let edge = self.graph.edge(e);
                    let end = if forward { edge.v } else { edge.u };
                    if end == *v {
                        return &self.offsets[i] + &edge.len;
                    }
                }
                unreachable!("vertex on the arc")
            }
        }
    }

    /// The function as breakpoints over `[0, total]`.
    pub fn values(&self, f: &PLFunction) -> Vec<(Q, Q)> {
        let mut out: Vec<(Q, Q)> = Vec::new();
        for (&(e, forward), off) in self.order.iter().zip(&self.offsets) {
            let len = &self.graph.edge(e).len;
            let mut pts: Vec<(Q, Q)> = f
                .breakpoints(e)
                .iter()
                .map(|(t, v)| (if forward { off + t } else { off + len - t }, v.clone()))
                .collect();
            if !forward {
                pts.reverse();
            }
            if !out.is_empty() {
                pts.remove(0);
            }
            out.extend(pts);
        }
        out
    }

    /// The PL function with the given breakpoints over `[0, total]`.
    pub fn function(&self, vals: &[(Q, Q)]) -> PLFunction {
        let mut pieces = vec![Vec::new(); self.graph.edge_count()];
        for (&(e, forward), off) in self.order.iter().zip(&self.offsets) {
            let len = &self.graph.edge(e).len;
            let end = off + len;
            let mut pts = vec![(off.clone(), interpolate(vals, off))];
            pts.extend(vals.iter().filter(|(s, _)| off < s && s < &end).cloned());
            pts.push((end.clone(), interpolate(vals, &end)));
            let mut local: Vec<(Q, Q)> = pts
                .into_iter()
                .map(|(s, v)| (if forward { &s - off } else { &end - &s }, v))
                .collect();
            if !forward {
                local.reverse();
            }
            pieces[e] = local;
        }
        PLFunction::new(self.graph.clone(), pieces).expect("arc function is continuous")
    }

    /// Grid points of the dyadic mesh at `depth`, in arc order.
    pub fn grid(&self, depth: u32) -> Vec<Q> {
        let n = 1u64 << depth;
        let mut out = vec![zero()];
        for (&(e, _), off) in self.order.iter().zip(&self.offsets) {
            let step = &self.graph.edge(e).len / pow2(depth);
            out.extend((1..=n).map(|j| off + &step * Q::from_integer(j.into())));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn reversed_edges_round_trip() {
        let g = Arc::new(
            MetricGraph::new(vec!["a", "b", "c"], vec![("e1", "a", "b", qi(1)), ("e2", "c", "b", q(1, 2))]).unwrap(),
        );
        let arc = ArcCoords::new(&g).unwrap();
        assert_eq!(arc.total(), &q(3, 2));
        let vals = vec![(qi(0), qi(0)), (qi(1), qi(1)), (q(5, 4), qi(3)), (q(3, 2), qi(0))];
        let f = arc.function(&vals);
        assert_eq!(arc.values(&f), vals);
        assert_eq!(f.eval(&arc.point(&q(5, 4))).unwrap(), qi(3));
        assert_eq!(arc.grid(1).len(), 5);
        for s in [qi(0), q(1, 3), qi(1), q(5, 4), q(3, 2)] {
            assert_eq!(arc.coord(&arc.point(&s)), s);
        }
    }
}
