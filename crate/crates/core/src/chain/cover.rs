use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::pl::same_graph;
use crate::sets::{covers, meets, OpenSet};

/// An ordered finite open cover.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    graph: Arc<MetricGraph>,
    sets: Vec<OpenSet>,
}

impl Cover {
    pub fn new(graph: &Arc<MetricGraph>, sets: Vec<OpenSet>) -> Result<Self> {
        if sets.iter().any(|s| !same_graph(s.graph(), graph)) {
            return Err(Error::GraphMismatch);
        }
        if let Err(p) = covers(graph, &sets)? {
            return Err(Error::NotACover(p.describe(graph)));
        }
        Ok(Self { graph: graph.clone(), sets })
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn sets(&self) -> &[OpenSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Intersection graph of a cover, edges as `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Nerve {
    pub fn of(sets: &[OpenSet]) -> Result<Self> {
        let mut edges = BTreeSet::new();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if meets(&sets[i], &sets[j])? {
                    edges.insert((i, j));
                }
            }
        }
        Ok(Self { n: sets.len(), edges })
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    /// The first way the nerve differs from the path `0 – 1 – … – n−1`.
    pub fn chain_violation(&self) -> Option<ChainViolation> {
        for i in 0..self.n {
            if i + 1 < self.n && !self.has(i, i + 1) {
                return Some(ChainViolation::MissingLink { i });
            }
            if let Some(&(_, j)) = self.edges.range((i, i + 2)..(i + 1, 0)).next() {
                return Some(ChainViolation::LongRange { i, j });
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainViolation {
    /// Links `i` and `i + 1` are disjoint.
    MissingLink { i: usize },
    /// Links `i` and `j ≥ i + 2` intersect.
    LongRange { i: usize, j: usize },
    /// Link `i` is empty.
    EmptyLink { i: usize },
}

/// The nerve and the first chain violation, if any.
pub fn nerve_and_is_chain(sets: &[OpenSet]) -> Result<(Nerve, Option<ChainViolation>)> {
    let nerve = Nerve::of(sets)?;
    if let Some(i) = sets.iter().position(OpenSet::is_empty) {
        return Ok((nerve, Some(ChainViolation::EmptyLink { i })));
    }
    let v = nerve.chain_violation();
    Ok((nerve, v))
}

/// For each `V_j`, the least `i` with `V_j ⊆ U_i`; otherwise the first `j`
/// contained in no `U_i`.
pub fn refines(v: &[OpenSet], u: &[OpenSet]) -> Result<std::result::Result<Vec<usize>, usize>> {
    let mut out = Vec::with_capacity(v.len());
    for (j, vj) in v.iter().enumerate() {
        let mut found = None;
        for (i, ui) in u.iter().enumerate() {
            if vj.is_subset(ui)? {
                found = Some(i);
                break;
            }
        }
        match found {
            Some(i) => out.push(i),
            None => return Ok(Err(j)),
        }
    }
    Ok(Ok(out))
}

/// Repair missing consecutive intersections in a cover with no long-range
/// intersections by dropping the side of each gap that is not needed.
/// Returns the indices kept.
pub fn prune_chain(graph: &Arc<MetricGraph>, w: &[OpenSet]) -> Result<Vec<usize>> {
    if let Err(p) = covers(graph, w)? {
        return Err(Error::Precondition(format!("links do not cover X: {} is missed", p.describe(graph))));
    }
    let nerve = Nerve::of(w)?;
    if let Some((i, j)) = nerve.edges.iter().find(|(i, j)| j - i >= 2) {
        return Err(Error::Precondition(format!("links {} and {} intersect", i + 1, j + 1)));
    }
    let mut keep: Vec<usize> = (0..w.len()).collect();
    loop {
        let gap = (0..keep.len().saturating_sub(1)).find(|&p| !nerve.has(keep[p], keep[p + 1]));
        let Some(p) = gap else { return Ok(keep) };
        let prefix: Vec<OpenSet> = keep[..=p].iter().map(|&i| w[i].clone()).collect();
        let suffix: Vec<OpenSet> = keep[p + 1..].iter().map(|&i| w[i].clone()).collect();
        let (pre, suf) = (covers(graph, &prefix)?.is_ok(), covers(graph, &suffix)?.is_ok());
        keep = match (pre, suf) {
            (true, false) => keep[..=p].to_vec(),
            (false, true) => keep[p + 1..].to_vec(),
            (both, _) => {
                return Err(Error::Connectedness(format!(
                    "links {} and {} are disjoint and {} side of the gap covers X",
                    keep[p] + 1,
                    keep[p + 1] + 1,
                    if both { "each" } else { "neither" }
                )))
            }
        };
    }
}

/// An ordered chain cover refining a target cover.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCertificate {
    pub chain: Vec<OpenSet>,
    pub target: Vec<OpenSet>,
    /// `assignment[j]` is the least `i` with `chain[j] ⊆ target[i]`.
    pub assignment: Vec<usize>,
}

impl ChainCertificate {
    /// Re-check everything from scratch: nonempty links, path nerve,
    /// covering, and the minimal refinement assignment.
    pub fn verify(&self, graph: &Arc<MetricGraph>) -> Result<()> {
        if self.chain.is_empty() {
            return Err(Error::Verification("chain has no links".into()));
        }
        let (_, violation) = nerve_and_is_chain(&self.chain)?;
        if let Some(v) = violation {
            return Err(Error::Verification(format!("not a chain: {v:?}")));
        }
        if let Err(p) = covers(graph, &self.chain)? {
            return Err(Error::Verification(format!("chain misses {}", p.describe(graph))));
        }
        match refines(&self.chain, &self.target)? {
            Ok(a) if a == self.assignment => Ok(()),
            Ok(a) => Err(Error::Verification(format!("assignment {:?} is not the minimal one {a:?}", self.assignment))),
            Err(j) => Err(Error::Verification(format!("link {} lies in no target set", j + 1))),
        }
    }
}


#[cfg(test)]
mod tests {
    use num_traits::Signed;

    use super::*;
    use crate::rational::{q, qi};
    use crate::sets::interval_set;

    fn iv(g: &Arc<MetricGraph>, a: crate::Q, b: crate::Q) -> OpenSet {
        interval_set(g, &a, &b).unwrap()
    }

    #[test]
    fn interval_chain() {
        let g = Arc::new(MetricGraph::interval());
        let sets = vec![iv(&g, qi(0), q(2, 5)), iv(&g, q(3, 10), q(7, 10)), iv(&g, q(3, 5), qi(1))];
        let (nerve, v) = nerve_and_is_chain(&sets).unwrap();
        assert_eq!(v, None);
        assert_eq!(nerve.edges.len(), 2);
        let gap = vec![iv(&g, qi(0), q(2, 5)), iv(&g, q(3, 5), qi(1))];
        assert!(matches!(Cover::new(&g, gap), Err(Error::NotACover(_))));
    }

    #[test]
    fn circle_triangle() {
        let g = Arc::new(MetricGraph::circle());
        let arc = |c: crate::Q| {
            // tent of half-width 1/4 around c, wrapped
            let pts: Vec<(crate::Q, crate::Q)> = (0..=12)
                .map(|j| {
                    let x = q(j, 12);
                    let mut d = (&x - &c).abs();
                    if d > q(1, 2) {
                        d = qi(1) - d;
                    }
                    (x, q(1, 4) - d)
                })
                .collect();
            OpenSet::new(crate::PLFunction::new(g.clone(), vec![pts]).unwrap())
        };
        let sets = vec![arc(qi(0)), arc(q(1, 3)), arc(q(2, 3))];
        let (nerve, v) = nerve_and_is_chain(&sets).unwrap();
        assert_eq!(nerve.edges.len(), 3);
        assert_eq!(v, Some(ChainViolation::LongRange { i: 0, j: 2 }));
    }

    #[test]
    fn refinement_assignment() {
        let g = Arc::new(MetricGraph::interval());
        let u = vec![iv(&g, qi(0), q(3, 5)), iv(&g, q(2, 5), qi(1))];
        assert_eq!(refines(&u, &u).unwrap(), Ok(vec![0, 1]));
        let cells = vec![iv(&g, q(1, 10), q(1, 5)), iv(&g, q(1, 2), q(11, 20))];
        assert_eq!(refines(&cells, &u).unwrap(), Ok(vec![0, 0]));
        let straddle = vec![iv(&g, q(1, 10), q(9, 10))];
        assert_eq!(refines(&straddle, &u).unwrap(), Err(0));
    }

    #[test]
    fn pruning() {
        let g = Arc::new(MetricGraph::interval());
        let w = vec![iv(&g, qi(0), q(3, 5)), iv(&g, q(2, 5), qi(1)), iv(&g, q(9, 10), qi(1))];
        assert_eq!(prune_chain(&g, &w).unwrap(), vec![0, 1, 2]);
        let w = vec![iv(&g, qi(0), q(3, 5)), iv(&g, q(2, 5), qi(1)), OpenSet::empty(&g)];
        assert_eq!(prune_chain(&g, &w).unwrap(), vec![0, 1]);
        let w = vec![OpenSet::empty(&g), iv(&g, qi(0), q(3, 5)), iv(&g, q(2, 5), qi(1))];
        assert_eq!(prune_chain(&g, &w).unwrap(), vec![1, 2]);
        let two = Arc::new(MetricGraph::disjoint_intervals(2));
        let left = crate::PLFunction::from_vertex_values(
            &two,
            two.components().vertex_component.iter().map(|&c| if c == 0 { qi(1) } else { qi(-1) }).collect(),
            vec![vec![]; 2],
        )
        .unwrap();
        let split = vec![OpenSet::new(left.clone()), OpenSet::new(left.neg())];
        assert!(matches!(prune_chain(&two, &split), Err(Error::Connectedness(_))));
    }
}
