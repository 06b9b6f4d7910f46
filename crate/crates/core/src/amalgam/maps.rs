//! Maps into the circle and into the arc `[0, 1]`.
//!
//! A circle map is stored as a real-valued lift measured in full turns, so
//! `x ↦ exp(2πi·lift(x))`. Two lifts describe the same map exactly when they
//! differ by an integer at every point, which keeps all checks rational.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::{interpolate, same_graph, PLFunction};
use crate::rational::{fmt_q, one, q, zero, Q};
use crate::sets::ClosedSet;

/// Fractional part in `[0, 1)`.
pub fn turn(x: &Q) -> Q {
    x - x.floor()
}

fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// `x ↦ exp(2πi·lift(x))` on a metric graph.
///
/// Lifts are given per edge and only need to agree modulo `ℤ` at shared
/// vertices; this is what lets a loop carry a nonzero winding number.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleMap {
    graph: Arc<MetricGraph>,
    pieces: Vec<Vec<(Q, Q)>>,
    vertex: Vec<Q>,
}

impl CircleMap {
    /// A map with a continuous lift.
    pub fn new(lift: PLFunction) -> Self {
        Self {
            graph: lift.graph().clone(),
            pieces: lift.pieces().to_vec(),
            vertex: lift.vertex_values().to_vec(),
        }
    }

    /// Per-edge lifts over `[0, len]`, continuous modulo `ℤ` at vertices.
    /// Isolated vertices take `vertex_lifts` (missing entries default to 0).
    pub fn from_pieces(graph: Arc<MetricGraph>, pieces: Vec<Vec<(Q, Q)>>, vertex_lifts: Vec<Option<Q>>) -> Result<Self> {
        if pieces.len() != graph.edge_count() {
            return Err(Error::InvalidFunction(format!(
                "{} lift lists for {} edges",
                pieces.len(),
                graph.edge_count()
            )));
        }
        let mut vertex: Vec<Option<Q>> = vertex_lifts;
        vertex.resize(graph.vertex_count(), None);
        for (e, pts) in graph.edges().iter().zip(&pieces) {
            if pts.len() < 2 || !pts[0].0.is_zero() || pts[pts.len() - 1].0 != e.len {
                return Err(Error::InvalidFunction(format!("edge {}: lift must span [0, len]", e.id)));
            }
            if pts.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidFunction(format!("edge {}: breakpoints not strictly increasing", e.id)));
            }
            for (v, val) in [(e.u, &pts[0].1), (e.v, &pts[pts.len() - 1].1)] {
                match &vertex[v] {
                    None => vertex[v] = Some(val.clone()),
                    Some(w) if !is_integer(&(w - val)) => {
                        return Err(Error::InvalidFunction(format!(
                            "edge {}: lift {} at vertex {} disagrees with {} modulo 1",
                            e.id,
                            fmt_q(val),
                            graph.vertices()[v],
                            fmt_q(w)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        let vertex = vertex.into_iter().map(|v| v.unwrap_or_else(zero)).collect();
        Ok(Self { graph, pieces, vertex })
    }

    /// `f(x) = exp(2πi·x)` on the unit interval.
    pub fn standard() -> Self {
        Self::shifted(&zero())
    }

    /// `y ↦ exp(2πi·(y + c))` on the unit interval.
    pub fn shifted(c: &Q) -> Self {
        let g = Arc::new(MetricGraph::interval());
        let lift = PLFunction::on_single_edge(&g, vec![(zero(), c.clone()), (one(), c + one())]).unwrap();
        Self::new(lift)
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn pieces(&self) -> &[Vec<(Q, Q)>] {
        &self.pieces
    }

    /// Lift increment along an edge; an integer for loops.
    pub fn winding(&self, edge: usize) -> Q {
        let pts = &self.pieces[edge];
        &pts[pts.len() - 1].1 - &pts[0].1
    }

    /// Some lift value at `p` (well defined modulo `ℤ`).
    pub fn lift_at(&self, p: &Point) -> Result<Q> {
        match p {
            Point::Vertex(v) => self
                .vertex
                .get(*v)
                .cloned()
                .ok_or_else(|| Error::InvalidGraph(format!("no vertex #{v}"))),
            Point::Edge { edge, t } => {
                let pts = self.pieces.get(*edge).ok_or_else(|| Error::UnknownEdge(format!("#{edge}")))?;
                Ok(interpolate(pts, t))
            }
        }
    }

    /// Angle at `p` in turns, in `[0, 1)`.
    pub fn angle(&self, p: &Point) -> Result<Q> {
        Ok(turn(&self.lift_at(p)?))
    }

    /// The lift as a function on `[0, 1]`, for maps out of the unit interval.
    pub fn unit_lift(&self) -> Result<&[(Q, Q)]> {
        let g = &self.graph;
        if g.edge_count() != 1 || g.edge(0).is_loop() || g.edge(0).len != one() {
            return Err(Error::Precondition("circle map must be defined on the unit interval".into()));
        }
        Ok(&self.pieces[0])
    }

    /// `self ∘ r` as a circle map on the domain of `r`.
    pub fn compose(&self, r: &ArcMap) -> Result<CircleMap> {
        Ok(CircleMap::new(compose_unit(self.unit_lift()?, r.values())?))
    }
}

/// `outer ∘ inner` where `outer` is given by breakpoints on `[0, 1]` and
/// `inner` takes values in `[0, 1]`.
pub fn compose_unit(outer: &[(Q, Q)], inner: &PLFunction) -> Result<PLFunction> {
    let (lo, _) = inner.min_value();
    let (hi, _) = inner.max_value();
    if lo.is_negative() || hi > one() {
        return Err(Error::Precondition(format!(
            "inner values [{}, {}] leave [0, 1]",
            fmt_q(&lo),
            fmt_q(&hi)
        )));
    }
    let pieces = inner
        .pieces()
        .iter()
        .map(|pts| {
            let mut out = vec![(pts[0].0.clone(), interpolate(outer, &pts[0].1))];
            for w in pts.windows(2) {
                let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
                let mut cross: Vec<&Q> = outer.iter().map(|(x, _)| x).filter(|x| (v0 < *x && *x < v1) || (v1 < *x && *x < v0)).collect();
                if v1 < v0 {
                    cross.reverse();
                }
                for x in cross {
                    let t = t0 + (t1 - t0) * (x - v0) / (v1 - v0);
                    out.push((t, interpolate(outer, x)));
                }
                out.push((t1.clone(), interpolate(outer, v1)));
            }
            out
        })
        .collect();
    let vertex = inner.vertex_values().iter().map(|v| interpolate(outer, v)).collect();
    PLFunction::with_vertex_values(inner.graph().clone(), vertex, pieces)
}

/// A map into the arc `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcMap {
    values: PLFunction,
}

impl ArcMap {
    pub fn new(values: PLFunction) -> Result<Self> {
        let (lo, _) = values.min_value();
        let (hi, _) = values.max_value();
        if lo.is_negative() || hi > one() {
            return Err(Error::InvalidFunction(format!(
                "arc map values [{}, {}] leave [0, 1]",
                fmt_q(&lo),
                fmt_q(&hi)
            )));
        }
        Ok(Self { values })
    }

    /// `t ↦ t` on the unit interval.
    pub fn identity() -> Self {
        let g = Arc::new(MetricGraph::interval());
        Self { values: PLFunction::identity(&g).unwrap() }
    }

    pub fn constant(graph: &Arc<MetricGraph>, c: Q) -> Result<Self> {
        Self::new(PLFunction::constant(graph, c))
    }

    pub fn values(&self) -> &PLFunction {
        &self.values
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        self.values.graph()
    }

    /// Exact `(min, max)` of the values.
    pub fn range(&self) -> (Q, Q) {
        (self.values.min_value().0, self.values.max_value().0)
    }

    pub fn is_surjective(&self) -> bool {
        self.range() == (zero(), one())
    }
}

/// Where `f ∘ r` and `g ∘ s` differ, with both angles in turns.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub point: Point,
    pub left: Q,
    pub right: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Comparison {
    Equal,
    Mismatch(Mismatch),
}

/// Exact test of `f ∘ r = g ∘ s` as maps into the circle.
pub fn compose_check(f: &CircleMap, r: &ArcMap, g: &CircleMap, s: &ArcMap) -> Result<Comparison> {
    if !same_graph(r.graph(), s.graph()) {
        return Err(Error::GraphMismatch);
    }
    let left = f.compose(r)?;
    let right = g.compose(s)?;
    compare(&left, &right)
}

/// Exact test that two circle maps on the same graph agree.
pub fn compare(a: &CircleMap, b: &CircleMap) -> Result<Comparison> {
    if !same_graph(&a.graph, &b.graph) {
        return Err(Error::GraphMismatch);
    }
    let mismatch = |p: Point| -> Result<Comparison> {
        Ok(Comparison::Mismatch(Mismatch { left: a.angle(&p)?, right: b.angle(&p)?, point: p }))
    };
    for v in 0..a.graph.vertex_count() {
        if !is_integer(&(&a.vertex[v] - &b.vertex[v])) {
            return mismatch(Point::Vertex(v));
        }
    }
    for e in 0..a.graph.edge_count() {
        let (pa, pb) = (&a.pieces[e], &b.pieces[e]);
        let ts = crate::pl::merge_ts(pa, pb);
        let d: Vec<(Q, Q)> = ts
            .into_iter()
            .map(|t| {
                let v = interpolate(pa, &t) - interpolate(pb, &t);
                (t, v)
            })
            .collect();
        for (i, (t, v)) in d.iter().enumerate() {
            if !is_integer(v) {
                return mismatch(Point::on_edge(&a.graph, e, t.clone())?);
            }
            if i > 0 && *v != d[i - 1].1 {
                // between two different integers the difference takes a half-integer value
                let (t0, v0) = &d[i - 1];
                let target = if v > v0 { v0 + q(1, 2) } else { v0 - q(1, 2) };
                let tc = t0 + (t - t0) * (&target - v0) / (v - v0);
                return mismatch(Point::on_edge(&a.graph, e, tc)?);
            }
        }
    }
    Ok(Comparison::Equal)
}

/// `m⁻¹[a, b]` as the closed set `{max(a − m, m − b) ≤ 0}`.
pub fn closed_preimage(m: &ArcMap, a: &Q, b: &Q) -> Result<ClosedSet> {
    if a > b {
        return Err(Error::Precondition(format!("empty interval [{}, {}]", fmt_q(a), fmt_q(b))));
    }
    let v = m.values();
    Ok(ClosedSet::new(v.neg().add_const(a).max(&v.add_const(&-b))?))
}

/// Lift value of a unit-interval circle map at `x ∈ [0, 1]`.
pub fn lift_of_unit(m: &CircleMap, x: &Q) -> Result<Q> {
    Ok(interpolate(m.unit_lift()?, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn unit() -> Arc<MetricGraph> {
        Arc::new(MetricGraph::interval())
    }

    #[test]
    fn identity_composition_agrees() {
        let f = CircleMap::standard();
        let r = ArcMap::identity();
        assert_eq!(compose_check(&f, &r, &f, &r).unwrap(), Comparison::Equal);
    }

    #[test]
    fn half_turn_shift_mismatches_everywhere() {
        let f = CircleMap::standard();
        let g = CircleMap::shifted(&q(1, 2));
        let r = ArcMap::identity();
        let s = ArcMap::new(PLFunction::identity(r.graph()).unwrap()).unwrap();
        match compose_check(&f, &r, &g, &s).unwrap() {
            Comparison::Mismatch(m) => {
                assert_eq!(m.point, Point::Vertex(0));
                assert_eq!((m.left, m.right), (zero(), q(1, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integer_offset_is_the_same_map() {
        let f = CircleMap::standard();
        let g = CircleMap::shifted(&qi(-3));
        let r = ArcMap::identity();
        let s = ArcMap::new(PLFunction::identity(r.graph()).unwrap()).unwrap();
        assert_eq!(compose_check(&f, &r, &g, &s).unwrap(), Comparison::Equal);
    }

    #[test]
    fn jump_between_integers_is_located() {
        let g = unit();
        let a = CircleMap::new(PLFunction::on_single_edge(&g, vec![(zero(), zero()), (one(), qi(2))]).unwrap());
        let b = CircleMap::new(PLFunction::zero(&g));
        match compare(&a, &b).unwrap() {
            Comparison::Mismatch(m) => assert_eq!(m.point, Point::Edge { edge: 0, t: q(1, 4) }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn loops_carry_winding() {
        let c = Arc::new(MetricGraph::circle());
        let m = CircleMap::from_pieces(c.clone(), vec![vec![(zero(), zero()), (one(), qi(1))]], vec![]).unwrap();
        assert_eq!(m.winding(0), qi(1));
        assert!(CircleMap::from_pieces(c, vec![vec![(zero(), zero()), (one(), q(1, 2))]], vec![]).is_err());
    }

    #[test]
    fn composition_inserts_outer_breakpoints() {
        let g = unit();
        let outer = vec![(zero(), zero()), (q(1, 2), qi(1)), (one(), zero())];
        let inner = PLFunction::on_single_edge(&g, vec![(zero(), one()), (one(), zero())]).unwrap();
        let h = compose_unit(&outer, &inner).unwrap();
        assert_eq!(h.breakpoints(0).to_vec(), outer);
        assert!(compose_unit(&outer, &PLFunction::constant(&g, qi(2))).is_err());
    }

    #[test]
    fn preimages() {
        let id = ArcMap::identity();
        let g = id.graph().clone();
        let half = closed_preimage(&id, &zero(), &q(1, 2)).unwrap();
        assert!(half.contains(&Point::on_edge(&g, 0, q(1, 2)).unwrap()).unwrap());
        assert!(!half.contains(&Point::on_edge(&g, 0, q(3, 5)).unwrap()).unwrap());
        let zero_map = ArcMap::constant(&g, zero()).unwrap();
        assert!(closed_preimage(&zero_map, &q(1, 2), &one()).unwrap().is_empty());
        let flip = ArcMap::new(PLFunction::on_single_edge(&g, vec![(zero(), one()), (one(), zero())]).unwrap()).unwrap();
        let upper = closed_preimage(&flip, &zero(), &q(1, 2)).unwrap();
        assert!(upper.contains(&Point::Vertex(1)).unwrap());
        assert!(!upper.contains(&Point::on_edge(&g, 0, q(1, 3)).unwrap()).unwrap());
        assert!(closed_preimage(&id, &one(), &zero()).is_err());
    }

    #[test]
    fn arc_maps_stay_in_range() {
        let g = unit();
        assert!(ArcMap::new(PLFunction::identity(&g).unwrap().scale(&qi(2))).is_err());
        assert!(ArcMap::identity().is_surjective());
        assert!(!ArcMap::constant(&g, q(1, 3)).unwrap().is_surjective());
    }
}
