//! Search for chain refinements of a cover among unions of dyadic mesh
//! cells.
//!
//! Three tools are combined. A homology test on the nerve rules out covers
//! that no chain can refine at any resolution (the circle's three arcs). On
//! an arc, a greedy sweep builds a shortest chain of intervals. Otherwise
//! an exhaustive search over link labels decides each labelling exactly:
//! atoms receive positions `0..2m−1` (even `2j`: only in link `j`; odd
//! `2j+1`: in links `j` and `j+1`), the constraints are closed under
//! pointwise minimum, so arc consistency plus least values settles it.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::arc::ArcCoords;
use super::cover::{nerve_and_is_chain, refines, ChainCertificate, Cover};
use crate::atoms::{AtomSet, AtomSpace};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::PLFunction;
use crate::rational::{qi, Q};
use crate::sets::{meets, OpenSet};

#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// A mesh cell lies in no member of the cover.
    UncoveredCell(Point),
    /// A loop of X maps to a nonzero homology class of the cover's nerve;
    /// no chain refinement exists at any depth.
    NerveCycle,
    /// Every labelling of every admissible length was ruled out.
    NoChain,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(ChainCertificate),
    Exhausted { depth: u32, reason: Obstruction },
    Inconclusive { depth: u32, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of labellings examined.
    pub nodes: usize,
    /// Largest mesh (in atoms) handed to the exhaustive search.
    pub atoms: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { nodes: 200_000, atoms: 1024 }
    }
}

/// Search for a chain refining `u` built from mesh cells at `depth`.
pub fn find_chain_refinement(u: &Cover, depth: i64, budget: &SearchBudget) -> Result<SearchOutcome> {
    if depth <= 0 {
        return Err(Error::Precondition(format!("depth must be at least 1, got {depth}")));
    }
    let depth = depth as u32;
    let graph = u.graph();
    let (_, violation) = nerve_and_is_chain(u.sets())?;
    if violation.is_none() {
        return certify(graph, u.sets().to_vec(), u.sets()).map(SearchOutcome::Found);
    }
    let acyclic = graph.edge_count() + graph.components().count == graph.vertex_count();
    if !acyclic && nerve_cycle_obstruction(u)? {
        return Ok(SearchOutcome::Exhausted { depth, reason: Obstruction::NerveCycle });
    }
    if graph.is_arc() {
        if let Some(chain) = greedy_arc(u, depth)? {
            return certify(graph, chain, u.sets()).map(SearchOutcome::Found);
        }
    }
    let sp = AtomSpace::grid(graph, depth);
    let inside: Vec<AtomSet> = u.sets().iter().map(|s| sp.positive_atoms(s.generator())).collect();
    if let Some(a) = (0..sp.len()).find(|&a| inside.iter().all(|s| !s[a])) {
        return Ok(SearchOutcome::Exhausted { depth, reason: Obstruction::UncoveredCell(sp.sample(a)) });
    }
    if sp.len() > budget.atoms {
        return Ok(SearchOutcome::Inconclusive {
            depth,
            reason: format!("{} mesh atoms exceed the exhaustive-search limit of {}", sp.len(), budget.atoms),
        });
    }
    if !graph.is_connected() {
        return Ok(SearchOutcome::Inconclusive {
            depth,
            reason: "exhaustive search requires a connected graph".into(),
        });
    }
    exhaustive(u, &sp, &inside, depth, budget)
}

fn certify(graph: &Arc<MetricGraph>, chain: Vec<OpenSet>, target: &[OpenSet]) -> Result<ChainCertificate> {
    let assignment = refines(&chain, target)?
        .map_err(|j| Error::Verification(format!("link {} lies in no cover member", j + 1)))?;
    let cert = ChainCertificate { chain, target: target.to_vec(), assignment };
    cert.verify(graph)?;
    Ok(cert)
}

/// Whether some loop of X is carried to a 1-cycle of the nerve that bounds
/// no 2-chain of triple intersections. Any chain refinement would make that
/// cycle a boundary, so a positive answer rules chains out at every depth.
pub fn nerve_cycle_obstruction(u: &Cover) -> Result<bool> {
    let sets = u.sets();
    let k = sets.len();
    let gens: Vec<&PLFunction> = sets.iter().map(OpenSet::generator).collect();
    let sp = AtomSpace::subdivide(u.graph(), &gens);
    let inside: Vec<AtomSet> = gens.iter().map(|g| sp.positive_atoms(g)).collect();
    let rho: Vec<usize> = (0..sp.len())
        .map(|a| (0..k).find(|&i| inside[i][a]).expect("a cover contains every atom"))
        .collect();

    let mut edge_index = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            if meets(&sets[i], &sets[j])? {
                let n = edge_index.len();
                edge_index.insert((i, j), n);
            }
        }
    }
    let dim = edge_index.len();
    let mut boundaries: Vec<Vec<Q>> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let (Some(&ab), Some(&ac), Some(&bc)) =
                    (edge_index.get(&(a, b)), edge_index.get(&(a, c)), edge_index.get(&(b, c)))
                else {
                    continue;
                };
                let triple = sets[a].intersect(&sets[b])?.intersect(&sets[c])?;
                if !triple.is_empty() {
                    let mut v = vec![Q::zero(); dim];
                    v[bc] += qi(1);
                    v[ac] -= qi(1);
                    v[ab] += qi(1);
                    boundaries.push(v);
                }
            }
        }
    }
    let span = RowSpace::new(boundaries);

    // walk a spanning forest of the atom graph; each extra incidence closes a cycle
    let step = |from: usize, to: usize, v: &mut Vec<Q>| {
        let (a, b) = (rho[from], rho[to]);
        if a != b {
            let idx = edge_index[&(a.min(b), a.max(b))];
            v[idx] += if a < b { qi(1) } else { qi(-1) };
        }
    };
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sp.len()];
    for (n, (s, p)) in sp.incidences().into_iter().enumerate() {
        adj[s].push((p, n));
        adj[p].push((s, n));
    }
    let mut phi: Vec<Option<Vec<Q>>> = vec![None; sp.len()];
    let mut tree_edge = vec![false; sp.incidences().len()];
    for root in 0..sp.len() {
        if phi[root].is_some() {
            continue;
        }
        phi[root] = Some(vec![Q::zero(); dim]);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(y, n) in &adj[x] {
                if phi[y].is_none() {
                    let mut v = phi[x].clone().unwrap();
                    step(x, y, &mut v);
                    phi[y] = Some(v);
                    tree_edge[n] = true;
                    stack.push(y);
                }
            }
        }
    }
    for (n, (s, p)) in sp.incidences().into_iter().enumerate() {
        if tree_edge[n] {
            continue;
        }
        let mut z = phi[s].clone().unwrap();
        step(s, p, &mut z);
        for (zi, pi) in z.iter_mut().zip(phi[p].as_ref().unwrap()) {
            *zi -= pi;
        }
        if !span.contains(z) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Row-reduced basis of a subspace of `Q^n`.
struct RowSpace {
    rows: Vec<(usize, Vec<Q>)>,
}

impl RowSpace {
    fn new(vectors: Vec<Vec<Q>>) -> Self {
        let mut s = Self { rows: Vec::new() };
        for v in vectors {
            let r = s.reduce(v);
            if let Some(p) = r.iter().position(|x| !x.is_zero()) {
                s.rows.push((p, r));
            }
        }
        s
    }

    fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = &v[*p] / &row[*p];
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &c * y;
                }
            }
        }
        v
    }

    fn contains(&self, v: Vec<Q>) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Infimum of `{s > s0 : g(s) ≤ 0}` (with `s0` itself included when
/// `closed`), or `None` when `g` stays positive to the end of the arc.
fn first_nonpositive(vals: &[(Q, Q)], s0: &Q, closed: bool) -> Option<Q> {
    let v0 = crate::pl::interpolate(vals, s0);
    if v0.is_negative() || (closed && v0.is_zero()) {
        return Some(s0.clone());
    }
    let mut p = (s0.clone(), v0);
    for (s, v) in vals.iter().filter(|(s, _)| s > s0) {
        if !v.is_positive() {
            if p.1.is_zero() {
                return Some(p.0);
            }
            return Some(&p.0 + (s - &p.0) * &p.1 / (&p.1 - v));
        }
        p = (s.clone(), v.clone());
    }
    None
}

/// The greedy chain of [`greedy_arc`] as a verified certificate.
pub(crate) fn arc_chain(u: &Cover, depth: u32) -> Result<Option<ChainCertificate>> {
    match greedy_arc(u, depth)? {
        Some(chain) => certify(u.graph(), chain, u.sets()).map(Some),
        None => Ok(None),
    }
}

/// Shortest chain of grid intervals refining `u`, by always extending the
/// next link as far as any cover member allows.
fn greedy_arc(u: &Cover, depth: u32) -> Result<Option<Vec<OpenSet>>> {
    let arc = ArcCoords::new(u.graph())?;
    let grid = arc.grid(depth);
    let n = grid.len() - 1;
    let vals: Vec<Vec<(Q, Q)>> = u.sets().iter().map(|s| arc.values(s.generator())).collect();
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut a = 0;
    loop {
        let first = links.is_empty();
        let mut best: Option<usize> = None;
        for v in &vals {
            let b = match first_nonpositive(v, &grid[a], first) {
                None => n,
                Some(z) => {
                    let b = grid.partition_point(|x| x <= &z) - 1;
                    // a link stopping short of the far end cannot contain it
                    b.min(n - 1)
                }
            };
            if b > a && best.map_or(true, |x| b > x) {
                best = Some(b);
            }
        }
        let Some(b) = best else { return Ok(None) };
        if let Some(&(_, prev)) = links.last() {
            if b <= prev {
                return Ok(None);
            }
        }
        links.push((a, b));
        if b == n {
            break;
        }
        a = b - 1;
    }
    let total = arc.total().clone();
    let sets = links
        .iter()
        .enumerate()
        .map(|(j, &(a, b))| {
            let (lo, hi) = (&grid[a], &grid[b]);
            let pts = match (j == 0, b == n) {
                (true, true) => vec![(qi(0), qi(1)), (total.clone(), qi(1))],
                (true, false) => vec![(qi(0), hi.clone()), (total.clone(), hi - &total)],
                (false, true) => vec![(qi(0), -lo.clone()), (total.clone(), &total - lo)],
                (false, false) => {
                    let mid = (lo + hi) / qi(2);
                    let peak = (hi - lo) / qi(2);
                    vec![(qi(0), -lo.clone()), (mid, peak), (total.clone(), hi - &total)]
                }
            };
            OpenSet::new(arc.function(&pts))
        })
        .collect();
    Ok(Some(sets))
}

fn exhaustive(
    u: &Cover,
    sp: &AtomSpace,
    inside: &[AtomSet],
    depth: u32,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let k = u.len();
    let graph = u.graph();
    if let Some(i) = (0..k).find(|&i| inside[i].iter().all(|&b| b)) {
        return certify(graph, vec![u.sets()[i].clone()], u.sets()).map(SearchOutcome::Found);
    }
    let mut meet = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            meet[i][j] = i != j && meets(&u.sets()[i], &u.sets()[j])?;
        }
    }
    let incid = sp.incidences();
    let m_bound = (sp.len() + 3) / 2;
    let mut nodes = 0usize;
    for m in 2..=m_bound {
        if 2 * m - 1 > 128 {
            return Ok(SearchOutcome::Inconclusive { depth, reason: format!("chains longer than 64 links not searched (bound {m_bound})") });
        }
        let mut word = vec![0usize; m];
        let found = words(0, &mut word, k, &meet, &mut |w| {
            nodes += 1;
            if nodes > budget.nodes {
                return Err(());
            }
            Ok(solve(sp, inside, &incid, w))
        });
        match found {
            Ok(Some(p)) => {
                let chain = links_from_positions(sp, &p, m);
                return certify(graph, chain, u.sets()).map(SearchOutcome::Found);
            }
            Ok(None) => {}
            Err(()) => {
                return Ok(SearchOutcome::Inconclusive {
                    depth,
                    reason: format!("search budget of {} labellings exhausted at length {m}", budget.nodes),
                })
            }
        }
    }
    Ok(SearchOutcome::Exhausted { depth, reason: Obstruction::NoChain })
}

type Positions = Vec<u32>;

/// Enumerate labellings in lexicographic order; consecutive labels must be
/// distinct, intersecting cover members.
fn words(
    at: usize,
    word: &mut Vec<usize>,
    k: usize,
    meet: &[Vec<bool>],
    leaf: &mut impl FnMut(&[usize]) -> std::result::Result<Option<Positions>, ()>,
) -> std::result::Result<Option<Positions>, ()> {
    if at == word.len() {
        return leaf(word);
    }
    for c in 0..k {
        if at > 0 && !meet[word[at - 1]][c] {
            continue;
        }
        word[at] = c;
        if let Some(p) = words(at + 1, word, k, meet, leaf)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn parity_masks(n: u32) -> (u128, u128) {
    let mut even = 0u128;
    for p in (0..n).step_by(2) {
        even |= 1 << p;
    }
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    (even, all & !even)
}

fn arc_consistent(dom: &mut [u128], incid: &[(usize, usize)], even: u128, odd: u128) -> bool {
    loop {
        let mut changed = false;
        for &(s, p) in incid {
            let ds = dom[s];
            let dp = dom[p] & ((even & (ds | ds << 1 | ds >> 1)) | (odd & ds));
            let pe = dp & even;
            let ds2 = ds & (pe | pe << 1 | pe >> 1 | (dp & odd));
            if dp != dom[p] || ds2 != ds {
                dom[p] = dp;
                dom[s] = ds2;
                changed = true;
            }
            if dp == 0 || ds2 == 0 {
                return false;
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Positions for a labelling, if any placement exists.
fn solve(sp: &AtomSpace, inside: &[AtomSet], incid: &[(usize, usize)], word: &[usize]) -> Option<Positions> {
    let m = word.len();
    let n = (2 * m - 1) as u32;
    let (even, odd) = parity_masks(n);
    let mut dom = vec![0u128; sp.len()];
    for (a, d) in dom.iter_mut().enumerate() {
        for p in 0..n as usize {
            let j = p / 2;
            let ok = inside[word[j]][a] && (p % 2 == 0 || inside[word[j + 1]][a]);
            if ok {
                *d |= 1 << p;
            }
        }
    }
    if !arc_consistent(&mut dom, incid, even, odd) {
        return None;
    }
    let high: u128 = (1 << (n - 1)) | (1 << (n - 2));
    for anchor in 0..sp.len() {
        if dom[anchor] & high == 0 {
            continue;
        }
        let mut d = dom.clone();
        d[anchor] &= high;
        if !arc_consistent(&mut d, incid, even, odd) {
            continue;
        }
        let least: Positions = d.iter().map(|x| x.trailing_zeros()).collect();
        if least.iter().min().is_some_and(|&x| x <= 1) {
            return Some(least);
        }
    }
    None
}

fn links_from_positions(sp: &AtomSpace, pos: &Positions, m: usize) -> Vec<OpenSet> {
    (0..m)
        .map(|j| {
            let lo = (2 * j as i64 - 1).max(0) as u32;
            let hi = 2 * j as u32 + 1;
            let member: AtomSet = pos.iter().map(|&p| lo <= p && p <= hi).collect();
            OpenSet::new(sp.open_generator(&member))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::sets::interval_set;

    #[test]
    fn first_nonpositive_crossings() {
        let vals = vec![(qi(0), qi(1)), (qi(1), qi(-1))];
        assert_eq!(first_nonpositive(&vals, &qi(0), true), Some(q(1, 2)));
        assert_eq!(first_nonpositive(&vals, &q(3, 4), false), Some(q(3, 4)));
        let pos = vec![(qi(0), qi(0)), (qi(1), qi(1))];
        assert_eq!(first_nonpositive(&pos, &qi(0), false), None);
        assert_eq!(first_nonpositive(&pos, &qi(0), true), Some(qi(0)));
    }

    #[test]
    fn later_link_starting_at_zero_stays_open() {
        // [0, 3/8), (0, 1), (0, 7/8), (1/8, 1]: the second link starts at 0
        // but must exclude it, since only the first member contains 0.
        let g = Arc::new(MetricGraph::interval());
        let f = |pts: Vec<(Q, Q)>| OpenSet::new(PLFunction::on_single_edge(&g, pts).unwrap());
        let u = Cover::new(
            &g,
            vec![
                f(vec![(qi(0), qi(1)), (q(5, 16), qi(1)), (q(7, 16), qi(-1)), (qi(1), qi(-1))]),
                f(vec![(qi(0), qi(0)), (q(1, 16), qi(1)), (q(15, 16), qi(1)), (qi(1), qi(0))]),
                f(vec![(qi(0), qi(0)), (q(1, 16), qi(1)), (q(13, 16), qi(1)), (q(15, 16), qi(-1)), (qi(1), qi(-1))]),
                f(vec![(qi(0), qi(-1)), (q(1, 16), qi(-1)), (q(3, 16), qi(1)), (qi(1), qi(1))]),
            ],
        )
        .unwrap();
        let chain = greedy_arc(&u, 2).unwrap().unwrap();
        assert_eq!(refines(&chain, u.sets()).unwrap(), Ok(vec![0, 1, 3]));
    }

    #[test]
    fn triangle_cover_on_interval() {
        let g = Arc::new(MetricGraph::interval());
        let u = Cover::new(
            &g,
            vec![
                interval_set(&g, &qi(0), &q(1, 2)).unwrap(),
                interval_set(&g, &q(1, 4), &q(3, 4)).unwrap(),
                interval_set(&g, &q(2, 5), &qi(1)).unwrap(),
            ],
        )
        .unwrap();
        match find_chain_refinement(&u, 3, &SearchBudget::default()).unwrap() {
            SearchOutcome::Found(c) => {
                c.verify(&g).unwrap();
                assert_eq!(c.chain.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    fn triod() -> Arc<MetricGraph> {
        Arc::new(
            MetricGraph::new(
                vec!["c", "a", "b", "d"],
                vec![("ea", "c", "a", qi(1)), ("eb", "c", "b", qi(1)), ("ed", "c", "d", qi(1))],
            )
            .unwrap(),
        )
    }

    /// Leg `leg` plus the first `r` of every other leg.
    fn leg_cover(g: &Arc<MetricGraph>, r: Q) -> Cover {
        let sets = (0..3)
            .map(|leg| {
                let pieces = (0..3)
                    .map(|e| {
                        if e == leg {
                            vec![(qi(0), r.clone()), (qi(1), r.clone())]
                        } else {
                            vec![(qi(0), r.clone()), (qi(1), &r - qi(1))]
                        }
                    })
                    .collect();
                OpenSet::new(PLFunction::new(g.clone(), pieces).unwrap())
            })
            .collect();
        Cover::new(g, sets).unwrap()
    }

    #[test]
    fn triod_leg_cover_is_refined_by_a_chain() {
        let g = triod();
        let u = leg_cover(&g, q(1, 4));
        assert!(!nerve_cycle_obstruction(&u).unwrap());
        match find_chain_refinement(&u, 2, &SearchBudget::default()).unwrap() {
            SearchOutcome::Found(c) => {
                c.verify(&g).unwrap();
                assert_eq!(c.chain.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triod_with_small_centre_has_no_chain() {
        let g = triod();
        // a centre ball of radius 1/2 and each leg beyond 1/4
        let centre = OpenSet::new(PLFunction::new(g.clone(), vec![vec![(qi(0), q(1, 2)), (qi(1), q(-1, 2))]; 3]).unwrap());
        let mut sets = vec![centre];
        for leg in 0..3 {
            let pieces = (0..3)
                .map(|e| if e == leg { vec![(qi(0), q(-1, 4)), (qi(1), q(3, 4))] } else { vec![(qi(0), q(-1, 4)), (qi(1), q(-5, 4))] })
                .collect();
            sets.push(OpenSet::new(PLFunction::new(g.clone(), pieces).unwrap()));
        }
        let u = Cover::new(&g, sets).unwrap();
        let out = find_chain_refinement(&u, 2, &SearchBudget::default()).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted { depth: 2, reason: Obstruction::NoChain });
    }

    #[test]
    fn circle_half_arcs_exhaust_at_every_depth() {
        let g = Arc::new(MetricGraph::circle());
        let arc = |pts: Vec<(Q, Q)>| OpenSet::new(PLFunction::on_single_edge(&g, pts).unwrap());
        let sets = vec![
            arc(vec![(qi(0), q(1, 4)), (q(1, 2), q(-1, 4)), (qi(1), q(1, 4))]),
            arc(vec![(qi(0), q(-1, 12)), (q(1, 3), q(1, 4)), (q(5, 6), q(-1, 4)), (qi(1), q(-1, 12))]),
            arc(vec![(qi(0), q(-1, 12)), (q(1, 6), q(-1, 4)), (q(2, 3), q(1, 4)), (qi(1), q(-1, 12))]),
        ];
        let u = Cover::new(&g, sets).unwrap();
        assert!(nerve_cycle_obstruction(&u).unwrap());
        for depth in 1..=6 {
            let out = find_chain_refinement(&u, depth, &SearchBudget::default()).unwrap();
            assert!(matches!(out, SearchOutcome::Exhausted { reason: Obstruction::NerveCycle, .. } | SearchOutcome::Exhausted { reason: Obstruction::UncoveredCell(_), .. }), "{depth}: {out:?}");
        }
    }

    #[test]
    fn exhaustive_agrees_with_greedy_on_interval() {
        let g = Arc::new(MetricGraph::interval());
        let u = Cover::new(
            &g,
            vec![
                interval_set(&g, &qi(0), &q(1, 2)).unwrap(),
                interval_set(&g, &q(1, 4), &q(3, 4)).unwrap(),
                interval_set(&g, &q(2, 5), &qi(1)).unwrap(),
            ],
        )
        .unwrap();
        let sp = AtomSpace::grid(&g, 2);
        let inside: Vec<AtomSet> = u.sets().iter().map(|s| sp.positive_atoms(s.generator())).collect();
        match exhaustive(&u, &sp, &inside, 2, &SearchBudget::default()).unwrap() {
            SearchOutcome::Found(c) => assert_eq!(c.chain.len(), 3),
            other => panic!("{other:?}"),
        }
    }
}
