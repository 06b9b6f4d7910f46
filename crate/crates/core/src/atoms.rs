//! Finite decompositions of a metric graph into atoms: vertices, interior cut
//! points, and the open spans between consecutive cuts.
//!
//! Open sets whose generators only change sign at cuts are exactly unions of
//! atoms, which turns topological questions into finite bookkeeping.

use std::sync::Arc;

use num_traits::Signed;
use petgraph::unionfind::UnionFind;

use crate::graph::{MetricGraph, Point};
use crate::pl::PLFunction;
use crate::rational::{midpoint, pow2, qi, zero, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Vertex(usize),
    /// Interior cut `k` (1-based within the edge's cut list).
    Cut { edge: usize, k: usize },
    /// Open span between cuts `k` and `k + 1`.
    Span { edge: usize, k: usize },
}

#[derive(Clone, Debug)]
pub struct AtomSpace {
    graph: Arc<MetricGraph>,
    cuts: Vec<Vec<Q>>,
    cut_base: Vec<usize>,
    span_base: Vec<usize>,
    len: usize,
}

pub type AtomSet = Vec<bool>;

/// `g > 0` on the open segment `(a, b)` of `edge`, decided exactly.
pub fn positive_on_open(g: &PLFunction, edge: usize, a: &Q, b: &Q) -> bool {
    if g.eval_edge(edge, a).is_negative() || g.eval_edge(edge, b).is_negative() {
        return false;
    }
    let mut ts = vec![a.clone()];
    ts.extend(g.breakpoints(edge).iter().filter(|(t, _)| a < t && t < b).map(|(t, _)| t.clone()));
    ts.push(b.clone());
    for (i, w) in ts.windows(2).enumerate() {
        if i > 0 && !g.eval_edge(edge, &w[0]).is_positive() {
            return false;
        }
        if !g.eval_edge(edge, &midpoint(&w[0], &w[1])).is_positive() {
            return false;
        }
    }
    true
}

impl AtomSpace {
    fn from_cuts(graph: &Arc<MetricGraph>, mut cuts: Vec<Vec<Q>>) -> Self {
        for c in &mut cuts {
            c.sort();
            c.dedup();
        }
        let mut cut_base = Vec::with_capacity(cuts.len());
        let mut next = graph.vertex_count();
        for c in &cuts {
            cut_base.push(next);
            next += c.len() - 2;
        }
        let mut span_base = Vec::with_capacity(cuts.len());
        for c in &cuts {
            span_base.push(next);
            next += c.len() - 1;
        }
        Self { graph: graph.clone(), cuts, cut_base, span_base, len: next }
    }

    /// Common subdivision by the breakpoints and sign changes of `fs`: each
    /// function has constant sign on every span.
    pub fn subdivide(graph: &Arc<MetricGraph>, fs: &[&PLFunction]) -> Self {
        let cuts = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                let mut c = vec![zero(), edge.len.clone()];
                for f in fs {
                    c.extend(f.breakpoints(e).iter().map(|(t, _)| t.clone()));
                    c.extend(f.interior_zeros(e));
                }
                c
            })
            .collect();
        Self::from_cuts(graph, cuts)
    }

    /// Uniform dyadic grid: edge `e` is cut at `j·len/2^depth`.
    pub fn grid(graph: &Arc<MetricGraph>, depth: u32) -> Self {
        let n = 1u64 << depth;
        let cuts = graph
            .edges()
            .iter()
            .map(|e| {
                let step = &e.len / pow2(depth);
                (0..=n).map(|j| &step * Q::from_integer(j.into())).collect()
            })
            .collect();
        Self::from_cuts(graph, cuts)
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cuts(&self, edge: usize) -> &[Q] {
        &self.cuts[edge]
    }

    pub fn atom(&self, i: usize) -> Atom {
        if i < self.graph.vertex_count() {
            return Atom::Vertex(i);
        }
        let e = self.cut_base.partition_point(|&b| b <= i);
        if e > 0 && i < self.span_base[0] {
            let e = e - 1;
            return Atom::Cut { edge: e, k: i - self.cut_base[e] + 1 };
        }
        let e = self.span_base.partition_point(|&b| b <= i) - 1;
        Atom::Span { edge: e, k: i - self.span_base[e] }
    }

    pub fn index(&self, a: Atom) -> usize {
        match a {
            Atom::Vertex(v) => v,
            Atom::Cut { edge, k } => self.cut_base[edge] + k - 1,
            Atom::Span { edge, k } => self.span_base[edge] + k,
        }
    }

    /// The atom at cut `k` of `edge` (a vertex at either end).
    pub fn cut_atom(&self, edge: usize, k: usize) -> usize {
        let n = self.cuts[edge].len();
        let e = self.graph.edge(edge);
        if k == 0 {
            e.u
        } else if k == n - 1 {
            e.v
        } else {
            self.cut_base[edge] + k - 1
        }
    }

    pub fn is_span(&self, i: usize) -> bool {
        matches!(self.atom(i), Atom::Span { .. })
    }

    /// Every `(span, endpoint)` incidence; a span on a loop edge with a
    /// single cut touches its vertex twice.
    pub fn incidences(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for e in 0..self.cuts.len() {
            for k in 0..self.cuts[e].len() - 1 {
                let s = self.span_base[e] + k;
                out.push((s, self.cut_atom(e, k)));
                out.push((s, self.cut_atom(e, k + 1)));
            }
        }
        out
    }

    /// A point inside the atom (span midpoint for spans).
    pub fn sample(&self, i: usize) -> Point {
        match self.atom(i) {
            Atom::Vertex(v) => Point::Vertex(v),
            Atom::Cut { edge, k } => Point::Edge { edge, t: self.cuts[edge][k].clone() },
            Atom::Span { edge, k } => {
                Point::Edge { edge, t: midpoint(&self.cuts[edge][k], &self.cuts[edge][k + 1]) }
            }
        }
    }

    /// Whether the whole atom lies in `{g > 0}`.
    pub fn inside(&self, g: &PLFunction, i: usize) -> bool {
        match self.atom(i) {
            Atom::Span { edge, k } => positive_on_open(g, edge, &self.cuts[edge][k], &self.cuts[edge][k + 1]),
            _ => g.eval(&self.sample(i)).expect("atom on graph").is_positive(),
        }
    }

    /// Atoms entirely inside `{g > 0}`. On a subdivision by `g` this is
    /// exactly the set.
    pub fn positive_atoms(&self, g: &PLFunction) -> AtomSet {
        (0..self.len).map(|i| self.inside(g, i)).collect()
    }

    /// Atoms meeting `{g > 0}`.
    pub fn meeting_atoms(&self, g: &PLFunction) -> AtomSet {
        (0..self.len)
            .map(|i| match self.atom(i) {
                Atom::Span { edge, k } => {
                    let (a, b) = (&self.cuts[edge][k], &self.cuts[edge][k + 1]);
                    g.eval_edge(edge, &midpoint(a, b)).is_positive()
                        || g.eval_edge(edge, a).is_positive()
                        || g.eval_edge(edge, b).is_positive()
                        || g.breakpoints(edge).iter().any(|(t, v)| a < t && t < b && v.is_positive())
                }
                _ => self.inside(g, i),
            })
            .collect()
    }

    /// Whether an atom set is open: each member point has all adjacent
    /// spans in the set.
    pub fn is_open(&self, s: &AtomSet) -> bool {
        self.incidences().iter().all(|&(span, p)| !s[p] || s[span])
    }

    pub fn closure(&self, s: &AtomSet) -> AtomSet {
        let mut out = s.clone();
        for (span, p) in self.incidences() {
            if s[span] {
                out[p] = true;
            }
        }
        out
    }

    pub fn interior(&self, s: &AtomSet) -> AtomSet {
        let mut out = s.clone();
        for (span, p) in self.incidences() {
            if !s[span] {
                out[p] = false;
            }
        }
        out
    }

    /// Connected components of the atom set, as lists of atom indices in
    /// order of their smallest atom.
    pub fn components(&self, s: &AtomSet) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.len);
        for (span, p) in self.incidences() {
            if s[span] && s[p] {
                uf.union(span, p);
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in (0..self.len).filter(|&i| s[i]) {
            let r = uf.find(i);
            match roots.iter().position(|&x| x == r) {
                Some(j) => groups[j].push(i),
                None => {
                    roots.push(r);
                    groups.push(vec![i]);
                }
            }
        }
        groups
    }

    /// A PL generator `g` with `{g > 0}` equal to the open atom set `s`:
    /// value 1 on member points and member span midpoints, 0 on boundary
    /// points, −1 elsewhere.
    pub fn open_generator(&self, s: &AtomSet) -> PLFunction {
        let closure = self.closure(s);
        let point_value = |i: usize| {
            if s[i] {
                qi(1)
            } else if closure[i] {
                zero()
            } else {
                qi(-1)
            }
        };
        let vertex = (0..self.graph.vertex_count()).map(point_value).collect();
        let interior = (0..self.cuts.len())
            .map(|e| {
                let cuts = &self.cuts[e];
                let mut pts = Vec::new();
                for k in 0..cuts.len() - 1 {
                    if k > 0 {
                        pts.push((cuts[k].clone(), point_value(self.cut_atom(e, k))));
                    }
                    let v = if s[self.span_base[e] + k] { qi(1) } else { qi(-1) };
                    pts.push((midpoint(&cuts[k], &cuts[k + 1]), v));
                }
                pts
            })
            .collect();
        PLFunction::from_vertex_values(&self.graph, vertex, interior).expect("valid atom generator")
    }

    /// Generator `g` with `{g ≤ 0}` equal to the closed atom set `s`.
    pub fn closed_generator(&self, s: &AtomSet) -> PLFunction {
        let comp: AtomSet = s.iter().map(|b| !b).collect();
        self.open_generator(&comp)
    }

    pub fn full(&self) -> AtomSet {
        vec![true; self.len]
    }
}

pub fn union(a: &AtomSet, b: &AtomSet) -> AtomSet {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

pub fn intersect(a: &AtomSet, b: &AtomSet) -> AtomSet {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

pub fn complement(a: &AtomSet) -> AtomSet {
    a.iter().map(|x| !x).collect()
}

pub fn is_empty(a: &AtomSet) -> bool {
    !a.iter().any(|x| *x)
}

pub fn is_subset(a: &AtomSet, b: &AtomSet) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn grid_atoms_on_interval() {
        let g = Arc::new(MetricGraph::interval());
        let sp = AtomSpace::grid(&g, 2);
        // 2 vertices, 3 interior cuts, 4 spans
        assert_eq!(sp.len(), 9);
        for i in 0..sp.len() {
            assert_eq!(sp.index(sp.atom(i)), i);
        }
        assert_eq!(sp.atom(2), Atom::Cut { edge: 0, k: 1 });
        assert_eq!(sp.atom(5), Atom::Span { edge: 0, k: 0 });
    }

    #[test]
    fn generator_round_trip() {
        let g = Arc::new(MetricGraph::circle());
        let sp = AtomSpace::grid(&g, 2);
        // spans 0 and 1 plus the cut between them
        let mut s = vec![false; sp.len()];
        s[sp.index(Atom::Span { edge: 0, k: 0 })] = true;
        s[sp.index(Atom::Span { edge: 0, k: 1 })] = true;
        s[sp.index(Atom::Cut { edge: 0, k: 1 })] = true;
        assert!(sp.is_open(&s));
        let gen = sp.open_generator(&s);
        assert_eq!(sp.positive_atoms(&gen), s);
        assert_eq!(gen.eval(&Point::Vertex(0)).unwrap(), zero());
        assert_eq!(sp.components(&s).len(), 1);
    }

    #[test]
    fn open_segment_positivity() {
        let g = Arc::new(MetricGraph::interval());
        let f = PLFunction::on_single_edge(&g, vec![(qi(0), q(-1, 2)), (qi(1), q(1, 2))]).unwrap();
        assert!(positive_on_open(&f, 0, &q(1, 2), &qi(1)));
        assert!(!positive_on_open(&f, 0, &q(1, 4), &qi(1)));
        let tent = PLFunction::on_single_edge(&g, vec![(qi(0), qi(0)), (q(1, 2), qi(1)), (qi(1), qi(0))]).unwrap();
        assert!(positive_on_open(&tent, 0, &qi(0), &qi(1)));
    }
}
