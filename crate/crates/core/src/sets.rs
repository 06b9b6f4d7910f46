//! Open and closed sets in normal form: `{g > 0}` and `{g ≤ 0}` for a PL
//! generator `g`.

use std::sync::Arc;

use num_traits::Signed;

use crate::atoms::{Atom, AtomSet, AtomSpace};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::{same_graph, PLFunction};
use crate::rational::{qi, zero, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct OpenSet {
    gen: PLFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedSet {
    gen: PLFunction,
}

/// `{f > c}`.
pub fn superlevel(f: &PLFunction, c: &Q) -> OpenSet {
    OpenSet::new(f.add_const(&-c))
}

impl OpenSet {
    pub fn new(gen: PLFunction) -> Self {
        Self { gen }
    }

    pub fn generator(&self) -> &PLFunction {
        &self.gen
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        self.gen.graph()
    }

    pub fn whole(graph: &Arc<MetricGraph>) -> Self {
        Self::new(PLFunction::constant(graph, qi(1)))
    }

    pub fn empty(graph: &Arc<MetricGraph>) -> Self {
        Self::new(PLFunction::constant(graph, qi(-1)))
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(self.gen.eval(p)?.is_positive())
    }

    pub fn union(&self, o: &Self) -> Result<Self> {
        Ok(Self::new(self.gen.max(&o.gen)?))
    }

    pub fn intersect(&self, o: &Self) -> Result<Self> {
        Ok(Self::new(self.gen.min(&o.gen)?))
    }

    pub fn is_empty(&self) -> bool {
        !self.gen.max_value().0.is_positive()
    }

    /// A point of the set, if any.
    pub fn some_point(&self) -> Option<Point> {
        let (v, p) = self.gen.max_value();
        v.is_positive().then_some(p)
    }

    pub fn complement(&self) -> ClosedSet {
        ClosedSet { gen: self.gen.clone() }
    }

    /// `self ⊆ other`, decided exactly on the common subdivision.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        if !same_graph(self.graph(), other.graph()) {
            return Err(Error::GraphMismatch);
        }
        let sp = AtomSpace::subdivide(self.graph(), &[&self.gen, &other.gen]);
        let mine = sp.positive_atoms(&self.gen);
        Ok((0..sp.len()).all(|i| !mine[i] || sp.inside(&other.gen, i)))
    }

    /// Connected components, each as an open set, ordered by first atom.
    pub fn components(&self) -> Vec<OpenSet> {
        let sp = AtomSpace::subdivide(self.graph(), &[&self.gen]);
        let pos = sp.positive_atoms(&self.gen);
        sp.components(&pos)
            .into_iter()
            .map(|comp| {
                let mut member: AtomSet = vec![false; sp.len()];
                for i in comp {
                    member[i] = true;
                }
                OpenSet::new(restrict_to(&sp, &self.gen, &member))
            })
            .collect()
    }
}

/// `g` on the member atoms and `−|g|` elsewhere. Continuous because member
/// components only border non-members at zeros of `g`.
fn restrict_to(sp: &AtomSpace, g: &PLFunction, member: &AtomSet) -> PLFunction {
    let graph = sp.graph();
    let pick = |inside: bool, v: &Q| if inside { v.clone() } else { -v.abs() };
    let vertex = (0..graph.vertex_count()).map(|v| pick(member[v], g.vertex_value(v))).collect();
    let interior = (0..graph.edge_count())
        .map(|e| {
            let cuts = sp.cuts(e);
            let mut pts: Vec<(Q, Q)> = Vec::new();
            for k in 0..cuts.len() - 1 {
                let span_in = member[sp.index(Atom::Span { edge: e, k })];
                if k > 0 {
                    let at = sp.cut_atom(e, k);
                    pts.push((cuts[k].clone(), pick(member[at], &g.eval_edge(e, &cuts[k]))));
                }
                for (t, v) in g.breakpoints(e) {
                    if &cuts[k] < t && t < &cuts[k + 1] {
                        pts.push((t.clone(), pick(span_in, v)));
                    }
                }
            }
            pts
        })
        .collect();
    PLFunction::from_vertex_values(graph, vertex, interior).expect("restriction is continuous")
}

impl ClosedSet {
    pub fn new(gen: PLFunction) -> Self {
        Self { gen }
    }

    pub fn generator(&self) -> &PLFunction {
        &self.gen
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        self.gen.graph()
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(!self.gen.eval(p)?.is_positive())
    }

    pub fn union(&self, o: &Self) -> Result<Self> {
        Ok(Self::new(self.gen.min(&o.gen)?))
    }

    pub fn intersect(&self, o: &Self) -> Result<Self> {
        Ok(Self::new(self.gen.max(&o.gen)?))
    }

    pub fn is_empty(&self) -> bool {
        self.gen.min_value().0.is_positive()
    }

    pub fn some_point(&self) -> Option<Point> {
        let (v, p) = self.gen.min_value();
        (!v.is_positive()).then_some(p)
    }

    pub fn complement(&self) -> OpenSet {
        OpenSet::new(self.gen.clone())
    }

    /// Whether the set is all of X; otherwise a point outside it.
    pub fn is_whole(&self) -> std::result::Result<(), Point> {
        let (v, p) = self.gen.max_value();
        if v.is_positive() {
            Err(p)
        } else {
            Ok(())
        }
    }

    /// Connected components, as atom sets of the generator's subdivision.
    pub fn component_count(&self) -> usize {
        let sp = AtomSpace::subdivide(self.graph(), &[&self.gen]);
        let pos = sp.positive_atoms(&self.gen);
        let closed: AtomSet = pos.iter().map(|b| !b).collect();
        sp.components(&closed).len()
    }
}

/// Whether `sets` cover `graph`; otherwise a point missed by all of them.
pub fn covers(graph: &Arc<MetricGraph>, sets: &[OpenSet]) -> Result<std::result::Result<(), Point>> {
    let Some(first) = sets.first() else {
        return Ok(Err(Point::Vertex(0)));
    };
    let mut m = first.gen.clone();
    for s in &sets[1..] {
        m = m.max(&s.gen)?;
    }
    if !same_graph(graph, m.graph()) {
        return Err(Error::GraphMismatch);
    }
    let (v, p) = m.min_value();
    Ok(if v.is_positive() { Ok(()) } else { Err(p) })
}

/// Whether `a` and `b` intersect.
pub fn meets(a: &OpenSet, b: &OpenSet) -> Result<bool> {
    Ok(!a.intersect(b)?.is_empty())
}

/// Open cells of the dyadic mesh at `depth`: on each edge every open interval
/// between grid points (shortest first, then by left end), followed by the
/// open star of radius one step around each vertex.
pub fn mesh_cells(graph: &Arc<MetricGraph>, depth: i64) -> Result<Vec<OpenSet>> {
    if depth <= 0 {
        return Err(Error::Precondition(format!("mesh depth must be at least 1, got {depth}")));
    }
    let depth = depth as u32;
    let sp = AtomSpace::grid(graph, depth);
    let n = 1usize << depth;
    let mut out = Vec::new();
    for e in 0..graph.edge_count() {
        for width in 1..=n {
            for a in 0..=(n - width) {
                let mut s: AtomSet = vec![false; sp.len()];
                for k in a..a + width {
                    s[sp.index(Atom::Span { edge: e, k })] = true;
                    if k > a {
                        s[sp.cut_atom(e, k)] = true;
                    }
                }
                out.push(OpenSet::new(sp.open_generator(&s)));
            }
        }
    }
    for v in 0..graph.vertex_count() {
        let mut s: AtomSet = vec![false; sp.len()];
        s[v] = true;
        for (span, p) in sp.incidences() {
            if p == v {
                s[span] = true;
            }
        }
        out.push(OpenSet::new(sp.open_generator(&s)));
    }
    Ok(out)
}

/// The relatively open interval `(a, b)` on a single-edge graph: an end at or
/// beyond the edge's endpoint includes that endpoint, so `(0, 1/2)` on the
/// unit interval is `[0, 1/2)`.
pub fn interval_set(graph: &Arc<MetricGraph>, a: &Q, b: &Q) -> Result<OpenSet> {
    let t = PLFunction::identity(graph)?;
    let len = graph.edge(0).len.clone();
    let gen = match (a <= &zero(), b >= &len) {
        (true, true) => PLFunction::constant(graph, qi(1)),
        (true, false) => t.neg().add_const(b),
        (false, true) => t.add_const(&-a),
        (false, false) => t.add_const(&-a).min(&t.neg().add_const(b))?,
    };
    Ok(OpenSet::new(gen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn interval() -> Arc<MetricGraph> {
        Arc::new(MetricGraph::interval())
    }

    fn t(g: &Arc<MetricGraph>) -> PLFunction {
        PLFunction::identity(g).unwrap()
    }

    #[test]
    fn superlevel_examples() {
        let g = interval();
        assert!(!superlevel(&t(&g), &q(1, 2)).is_empty());
        assert!(superlevel(&t(&g), &qi(2)).is_empty());
        let all = superlevel(&PLFunction::constant(&g, qi(1)), &qi(0));
        assert_eq!(covers(&g, &[all]).unwrap(), Ok(()));
    }

    #[test]
    fn union_and_intersection() {
        let g = interval();
        let a = superlevel(&t(&g), &q(1, 2));
        let b = OpenSet::new(t(&g).neg().add_const(&q(1, 4)));
        assert!(a.intersect(&b).unwrap().is_empty());
        let c = superlevel(&t(&g), &q(1, 4));
        let d = OpenSet::new(t(&g).neg().add_const(&q(3, 4)));
        assert_eq!(covers(&g, &[c.union(&d).unwrap()]).unwrap(), Ok(()));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn covering_with_witness() {
        let g = interval();
        let ok = [interval_set(&g, &qi(0), &q(3, 5)).unwrap(), interval_set(&g, &q(2, 5), &qi(1)).unwrap()];
        assert_eq!(covers(&g, &ok).unwrap(), Ok(()));
        let gap = [interval_set(&g, &qi(0), &q(2, 5)).unwrap(), interval_set(&g, &q(3, 5), &qi(1)).unwrap()];
        let miss = covers(&g, &gap).unwrap().unwrap_err();
        assert_eq!(miss, Point::Edge { edge: 0, t: q(1, 2) });
        assert!(covers(&g, &[]).unwrap().is_err());
    }

    #[test]
    fn containment() {
        let g = interval();
        let half = superlevel(&t(&g), &q(1, 2));
        let quarter = superlevel(&t(&g), &q(1, 4));
        assert!(half.is_subset(&quarter).unwrap());
        assert!(!quarter.is_subset(&half).unwrap());
        assert!(half.is_subset(&half).unwrap());
        assert!(OpenSet::empty(&g).is_subset(&half).unwrap());
    }

    #[test]
    fn components_of_superlevels() {
        let g = interval();
        let far = superlevel(&t(&g).add_const(&q(-1, 2)).abs(), &q(1, 4));
        let comps = far.components();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].intersect(&comps[1]).unwrap().is_empty());
        let mut u = comps[0].clone();
        u = u.union(&comps[1]).unwrap();
        assert!(u.is_subset(&far).unwrap() && far.is_subset(&u).unwrap());
        assert_eq!(superlevel(&t(&g), &qi(0)).components().len(), 1);

        // a bump across the vertex of the circle stays one component
        let s = Arc::new(MetricGraph::circle());
        let bump = PLFunction::new(s.clone(), vec![vec![(qi(0), qi(1)), (q(1, 4), qi(-1)), (q(3, 4), qi(-1)), (qi(1), qi(1))]]).unwrap();
        assert_eq!(OpenSet::new(bump).components().len(), 1);
    }

    #[test]
    fn mesh_cell_counts() {
        let g = interval();
        let c1 = mesh_cells(&g, 1).unwrap();
        // (0,1/2), (1/2,1), (0,1) and two vertex stars
        assert_eq!(c1.len(), 5);
        assert!(c1[0].is_subset(&interval_set(&g, &qi(0), &q(1, 2)).unwrap()).unwrap());
        assert!(mesh_cells(&g, 2).unwrap().len() > c1.len());
        assert!(mesh_cells(&g, 0).is_err());
    }
}
