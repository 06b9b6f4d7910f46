//! Finite metric graphs: the desk-scale model of a compactum.
//!
//! A graph is a list of named vertices and a list of edges with positive
//! rational lengths. Loops and multi-edges are allowed, so the circle is a
//! single vertex carrying one loop.

use std::collections::HashMap;
use std::fmt;

use num_traits::Signed;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub len: Q,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// Connected components of a graph, labelled `0..count` in order of the
/// first vertex that reaches them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub vertex_component: Vec<usize>,
    pub edge_component: Vec<usize>,
}

impl Components {
    pub fn vertices_of(&self, c: usize) -> Vec<usize> {
        (0..self.vertex_component.len()).filter(|&v| self.vertex_component[v] == c).collect()
    }

    pub fn edges_of(&self, c: usize) -> Vec<usize> {
        (0..self.edge_component.len()).filter(|&e| self.edge_component[e] == c).collect()
    }
}

impl MetricGraph {
    /// Build from vertex names and `(id, u, v, len)` edges given by vertex name.
    pub fn new<S: Into<String>>(vertices: Vec<S>, edges: Vec<(S, S, S, Q)>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("at least one vertex required".into()));
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {v:?}")));
            }
        }
        let mut seen = HashMap::new();
        let mut out = Vec::with_capacity(edges.len());
        for (id, u, v, len) in edges {
            let (id, u, v) = (id.into(), u.into(), v.into());
            let ui = *index
                .get(&u)
                .ok_or_else(|| Error::InvalidGraph(format!("edge {id:?}: unknown endpoint {u:?}")))?;
            let vi = *index
                .get(&v)
                .ok_or_else(|| Error::InvalidGraph(format!("edge {id:?}: unknown endpoint {v:?}")))?;
            if !len.is_positive() {
                return Err(Error::InvalidGraph(format!("edge {id:?}: length {} not positive", fmt_q(&len))));
            }
            if seen.insert(id.clone(), ()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge {id:?}")));
            }
            out.push(Edge { id, u: ui, v: vi, len });
        }
        Ok(Self { vertices, edges: out })
    }

    /// The unit interval `I`: vertices `a`, `b` and one edge `e` of length 1.
    pub fn interval() -> Self {
        Self::new(vec!["a", "b"], vec![("e", "a", "b", qi(1))]).unwrap()
    }

    /// The circle: vertex `o` and a loop `e` of length 1.
    pub fn circle() -> Self {
        Self::new(vec!["o"], vec![("e", "o", "o", qi(1))]).unwrap()
    }

    /// A path `v0 - v1 - ... - vn` with edges `e1..en` of the given lengths.
    pub fn path(lengths: &[Q]) -> Result<Self> {
        let vertices: Vec<String> = (0..=lengths.len()).map(|i| format!("v{i}")).collect();
        let edges = lengths
            .iter()
            .enumerate()
            .map(|(i, l)| (format!("e{}", i + 1), format!("v{i}"), format!("v{}", i + 1), l.clone()))
            .collect();
        Self::new(vertices, edges)
    }

    /// `n` disjoint unit edges.
    pub fn disjoint_intervals(n: usize) -> Self {
        let vertices: Vec<String> = (0..n).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
        let edges = (0..n).map(|i| (format!("e{i}"), format!("a{i}"), format!("b{i}"), qi(1))).collect();
        Self::new(vertices, edges).unwrap()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Edges incident to `v`, as `(edge, at_start)`; a loop appears twice.
    pub fn incidences(&self, v: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u == v {
                out.push((i, true));
            }
            if e.v == v {
                out.push((i, false));
            }
        }
        out
    }

    pub fn components(&self) -> Components {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut label = HashMap::new();
        let mut vertex_component = Vec::with_capacity(self.vertices.len());
        for v in 0..self.vertices.len() {
            let root = uf.find(v);
            let next = label.len();
            vertex_component.push(*label.entry(root).or_insert(next));
        }
        let edge_component = self.edges.iter().map(|e| vertex_component[e.u]).collect();
        Components { count: label.len(), vertex_component, edge_component }
    }

    pub fn is_connected(&self) -> bool {
        self.components().count == 1
    }

    /// A path graph with at least one edge: connected, acyclic, degrees ≤ 2.
    pub fn is_arc(&self) -> bool {
        if self.edges.is_empty() || !self.is_connected() {
            return false;
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        (0..self.vertices.len()).all(|v| self.incidences(v).len() <= 2)
    }

    /// For an arc: edges in traversal order from one leaf, each with its
    /// orientation (`true` when traversed from `u` to `v`).
    pub fn arc_order(&self) -> Option<Vec<(usize, bool)>> {
        if !self.is_arc() {
            return None;
        }
        let start = (0..self.vertices.len()).find(|&v| self.incidences(v).len() == 1)?;
        let mut order = Vec::new();
        let mut used = vec![false; self.edges.len()];
        let mut at = start;
        loop {
            let next = self.incidences(at).into_iter().find(|&(e, _)| !used[e]);
            let Some((e, forward)) = next else { break };
            used[e] = true;
            order.push((e, forward));
            at = if forward { self.edges[e].v } else { self.edges[e].u };
        }
        Some(order)
    }
}

/// A point of a metric graph. Endpoints of edges are always stored as
/// vertices, so points at a shared vertex compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(usize),
    Edge { edge: usize, t: Q },
}

impl Point {
    pub fn on_edge(graph: &MetricGraph, edge: usize, t: Q) -> Result<Point> {
        let e = graph
            .edges
            .get(edge)
            .ok_or_else(|| Error::UnknownEdge(format!("#{edge}")))?;
        if t.is_negative() || t > e.len {
            return Err(Error::PointOutOfRange { value: fmt_q(&t), len: fmt_q(&e.len) });
        }
        if t == qi(0) {
            Ok(Point::Vertex(e.u))
        } else if t == e.len {
            Ok(Point::Vertex(e.v))
        } else {
            Ok(Point::Edge { edge, t })
        }
    }

    pub fn on_edge_id(graph: &MetricGraph, id: &str, t: Q) -> Result<Point> {
        let edge = graph.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?;
        Self::on_edge(graph, edge, t)
    }

    /// A representative `(edge, t)` location, if the point touches any edge.
    pub fn location(&self, graph: &MetricGraph) -> Option<(usize, Q)> {
        match self {
            Point::Edge { edge, t } => Some((*edge, t.clone())),
            Point::Vertex(v) => graph.incidences(*v).first().map(|&(e, start)| {
                (e, if start { qi(0) } else { graph.edge(e).len.clone() })
            }),
        }
    }

    pub fn describe(&self, graph: &MetricGraph) -> String {
        match self {
            Point::Vertex(v) => format!("vertex {}", graph.vertices[*v]),
            Point::Edge { edge, t } => format!("{}@{}", graph.edges[*edge].id, fmt_q(t)),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => write!(f, "v#{v}"),
            Point::Edge { edge, t } => write!(f, "e#{edge}@{}", fmt_q(t)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn component_counts() {
        assert_eq!(MetricGraph::interval().components().count, 1);
        assert_eq!(MetricGraph::circle().components().count, 1);
        assert_eq!(MetricGraph::disjoint_intervals(2).components().count, 2);
    }

    #[test]
    fn validation() {
        assert!(MetricGraph::new(Vec::<String>::new(), vec![]).is_err());
        assert!(MetricGraph::new(vec!["a"], vec![("e", "a", "b", qi(1))]).is_err());
        assert!(MetricGraph::new(vec!["a", "b"], vec![("e", "a", "b", qi(0))]).is_err());
        assert!(MetricGraph::new(vec!["a", "a"], vec![]).is_err());
    }

    #[test]
    fn endpoints_canonicalize() {
        let g = MetricGraph::path(&[qi(1), qi(2)]).unwrap();
        let p = Point::on_edge(&g, 0, qi(1)).unwrap();
        let r = Point::on_edge(&g, 1, qi(0)).unwrap();
        assert_eq!(p, r);
        assert!(Point::on_edge(&g, 1, qi(3)).is_err());
        assert!(Point::on_edge(&g, 7, q(1, 2)).is_err());
    }

    #[test]
    fn arcs() {
        assert!(MetricGraph::interval().is_arc());
        assert!(!MetricGraph::circle().is_arc());
        assert!(!MetricGraph::disjoint_intervals(2).is_arc());
        let p = MetricGraph::path(&[qi(1), qi(1), qi(1)]).unwrap();
        assert_eq!(p.arc_order().unwrap().len(), 3);
    }
}
