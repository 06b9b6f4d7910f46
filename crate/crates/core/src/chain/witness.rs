//! From a chain refinement to an explicit witness for σ_k on an arc.

use std::sync::Arc;

use num_traits::Signed;

use super::arc::ArcCoords;
use super::cover::{nerve_and_is_chain, refines, ChainCertificate, Cover};
use super::psi::{nonnegative, psi0, psi1_is_zero, psi2};
use super::search::{arc_chain, find_chain_refinement, SearchBudget, SearchOutcome};
use crate::atoms::{complement, intersect, is_empty, is_subset, union, AtomSet, AtomSpace};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::pl::PLFunction;
use crate::rational::{fmt_q, qi, Q};
use crate::sets::{covers, superlevel, OpenSet};

/// Functions `g_1..g_m` and the `m × k` matrix `h` (row `j` pairs with
/// `g_j`), with the parameters they were built for.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub m: usize,
    pub g: Vec<PLFunction>,
    pub h: Vec<Vec<PLFunction>>,
    pub eps: Q,
    pub eps_prime: Q,
    pub delta: Q,
}

/// Everything built on the way to a witness.
#[derive(Clone, Debug)]
pub struct Construction {
    pub depth: u32,
    /// `U_i = {f_i > ε}`.
    pub cover: Vec<OpenSet>,
    /// The chain `W_1..W_m` and `i(j)`.
    pub chain: Vec<OpenSet>,
    pub assignment: Vec<usize>,
    /// `g_j` before localisation.
    pub g_raw: Vec<PLFunction>,
    pub z: Vec<OpenSet>,
    pub radius: Q,
    /// `N_j` and `M_j` as atom sets of `atoms`.
    pub atoms: AtomSpace,
    pub n: Vec<AtomSet>,
    pub m: Vec<AtomSet>,
    pub g_prime: Vec<PLFunction>,
}

const MAX_DEPTH: i64 = 48;
const MAX_HALVINGS: usize = 64;

/// Build a witness with `sigma_inner(f, w) ≤ δ` for nonnegative `f` on an
/// arc, following the chain refinement of `{f_i > ε}`.
pub fn build_witness(fs: &[PLFunction], delta: &Q) -> Result<(Witness, Construction)> {
    let (first, _) = fs.split_first().ok_or_else(|| Error::Dimension("empty tuple".into()))?;
    let graph = first.graph().clone();
    let arc = ArcCoords::new(&graph)?;
    if !nonnegative(fs) {
        return Err(Error::Precondition("every f_i must be nonnegative".into()));
    }
    if !delta.is_positive() {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    let p0 = psi0(fs)?.exact_value().cloned().expect("ψ₀ is exact");
    if &p0 <= delta {
        return Err(Error::Precondition(format!("ψ₀(f) = {} must exceed δ = {}", fmt_q(&p0), fmt_q(delta))));
    }
    let k = qi(fs.len() as i64);
    let third = delta / (qi(3) * &k);
    let eps = (&p0 - delta) / &k + &third;
    let eps_prime = &eps + &third;
    let cap = (&eps + &eps_prime) / qi(2);

    let cover: Vec<OpenSet> = fs.iter().map(|f| superlevel(f, &eps)).collect();
    let u = Cover::new(&graph, cover.clone())?;
    let mut last_failure = String::from("no depth tried");
    for depth in 1..=MAX_DEPTH {
        // the z-point needs room at the start of the chain, which depends on
        // orientation and on how far the first link reaches
        let mut candidates = Vec::new();
        match find_chain_refinement(&u, depth, &SearchBudget::default())? {
            SearchOutcome::Found(c) => candidates.push(c),
            SearchOutcome::Exhausted { reason, .. } => last_failure = format!("depth {depth}: {reason:?}"),
            SearchOutcome::Inconclusive { reason, .. } => last_failure = format!("depth {depth}: {reason}"),
        }
        candidates.extend(arc_chain(&u, depth as u32)?);
        for found in candidates {
            let found = shortest(&graph, found)?;
            let back = reversed(&found)?;
            for cert in [found, back] {
                let g_raw: Vec<PLFunction> = cert.assignment.iter().map(|&i| fs[i].min_const(&cap)).collect();
                match localise(&graph, &arc, &cert.chain) {
                    Ok(loc) => {
                        let construction = Construction {
                            depth: depth as u32,
                            cover,
                            chain: cert.chain,
                            assignment: cert.assignment,
                            g_raw,
                            z: loc.z,
                            radius: loc.radius,
                            atoms: loc.atoms,
                            n: loc.n,
                            m: loc.m,
                            g_prime: loc.g_prime,
                        };
                        let w = finish(fs, &construction, &p0, eps.clone(), eps_prime.clone(), delta)?;
                        return Ok((w, construction));
                    }
                    Err(e) => last_failure = format!("depth {depth}: {e}"),
                }
            }
        }
    }
    Err(Error::Verification(format!("no usable chain refinement up to depth {MAX_DEPTH} ({last_failure})")))
}

/// Drop links while what remains is still a covering chain; the search can
/// return the cover itself with redundant members.
fn shortest(graph: &Arc<MetricGraph>, mut cert: ChainCertificate) -> Result<ChainCertificate> {
    let mut j = 0;
    while j < cert.chain.len() && cert.chain.len() > 1 {
        let mut rest = cert.chain.clone();
        rest.remove(j);
        if nerve_and_is_chain(&rest)?.1.is_none() && covers(graph, &rest)?.is_ok() {
            cert.chain = rest;
            j = 0;
        } else {
            j += 1;
        }
    }
    cert.assignment = refines(&cert.chain, &cert.target)?
        .map_err(|j| Error::Verification(format!("link {} lies in no cover member", j + 1)))?;
    Ok(cert)
}

fn reversed(cert: &ChainCertificate) -> Result<ChainCertificate> {
    let chain: Vec<OpenSet> = cert.chain.iter().rev().cloned().collect();
    let assignment = refines(&chain, &cert.target)?
        .map_err(|j| Error::Verification(format!("link {} lies in no cover member", j + 1)))?;
    Ok(ChainCertificate { chain, target: cert.target.clone(), assignment })
}

struct Localised {
    z: Vec<OpenSet>,
    radius: Q,
    atoms: AtomSpace,
    n: Vec<AtomSet>,
    m: Vec<AtomSet>,
    g_prime: Vec<PLFunction>,
}

/// Whether the closures of two open sets are disjoint.
fn closures_disjoint(a: &OpenSet, b: &OpenSet) -> Result<bool> {
    let sp = AtomSpace::subdivide(a.graph(), &[a.generator(), b.generator()]);
    let ca = sp.closure(&sp.positive_atoms(a.generator()));
    let cb = sp.closure(&sp.positive_atoms(b.generator()));
    Ok(is_empty(&intersect(&ca, &cb)))
}

/// Open set of points within `r` of any of the arc coordinates `centres`.
fn balls(graph: &Arc<MetricGraph>, arc: &ArcCoords, centres: &[Q], r: &Q) -> OpenSet {
    let total = arc.total();
    let mut gen: Option<PLFunction> = None;
    for c in centres {
        let mut pts = vec![(qi(0), r - c)];
        if c.is_positive() && c < total {
            pts.push((c.clone(), r.clone()));
        }
        pts.push((total.clone(), r - (total - c)));
        let tent = arc.function(&pts);
        gen = Some(match gen {
            Some(g) => g.max(&tent).expect("same graph"),
            None => tent,
        });
    }
    OpenSet::new(gen.unwrap_or_else(|| PLFunction::constant(graph, qi(-1))))
}

/// Points of `bd(W_j) ∩ W_{j−1}` in arc coordinates.
fn boundary_points(arc: &ArcCoords, wj: &OpenSet, prev: &OpenSet) -> Result<Vec<Q>> {
    let sp = AtomSpace::subdivide(wj.graph(), &[wj.generator()]);
    let pos = sp.positive_atoms(wj.generator());
    let closure = sp.closure(&pos);
    let mut out = Vec::new();
    for a in 0..sp.len() {
        if closure[a] && !pos[a] {
            let p = sp.sample(a);
            if prev.contains(&p)? {
                out.push(arc.coord(&p));
            }
        }
    }
    Ok(out)
}

fn localise(graph: &Arc<MetricGraph>, arc: &ArcCoords, w: &[OpenSet]) -> Result<Localised> {
    let m = w.len();
    let centres: Vec<Vec<Q>> = (0..m)
        .map(|j| if j == 0 { Ok(Vec::new()) } else { boundary_points(arc, &w[j], &w[j - 1]) })
        .collect::<Result<_>>()?;
    let mut r = arc.total() / qi(4);
    let mut z: Vec<OpenSet> = Vec::new();
    let mut ok = false;
    for _ in 0..MAX_HALVINGS {
        z = centres.iter().map(|c| balls(graph, arc, c, &r)).collect();
        if z_conditions(w, &z)? {
            ok = true;
            break;
        }
        r /= qi(2);
    }
    if !ok {
        return Err(Error::Verification("no radius makes the Z_j neighbourhoods admissible".into()));
    }
    let mut gens: Vec<&PLFunction> = w.iter().map(OpenSet::generator).collect();
    gens.extend(z.iter().map(OpenSet::generator));
    let sp = AtomSpace::subdivide(graph, &gens);
    let wa: Vec<AtomSet> = w.iter().map(|s| sp.positive_atoms(s.generator())).collect();
    let za: Vec<AtomSet> = z.iter().map(|s| sp.positive_atoms(s.generator())).collect();
    let none = vec![false; sp.len()];
    let mut later = none.clone();
    let mut n_sets = vec![none.clone(); m];
    let mut m_sets = vec![none.clone(); m];
    for j in (0..m).rev() {
        let next_z = if j + 1 < m { &za[j + 1] } else { &none };
        let own = intersect(&wa[j], &complement(&sp.closure(&later)));
        n_sets[j] = union(&union(&za[j], next_z), &own);
        m_sets[j] = intersect(&sp.closure(&wa[j]), &complement(&later));
        later = union(&later, &wa[j]);
    }
    for j in 0..m {
        if !is_subset(&m_sets[j], &n_sets[j]) {
            return Err(Error::Verification(format!("M_{} is not inside N_{}", j + 1, j + 1)));
        }
        for i in j + 2..m {
            if !is_empty(&intersect(&n_sets[i], &n_sets[j])) {
                return Err(Error::Verification(format!("N_{} meets N_{}", j + 1, i + 1)));
            }
        }
    }
    let covered = m_sets.iter().fold(none.clone(), |acc, s| union(&acc, s));
    if let Some(a) = covered.iter().position(|b| !b) {
        return Err(Error::Verification(format!("the M_j miss {}", sp.sample(a).describe(graph))));
    }
    // the point z ∈ W_1 \ (cl Z_2 ∪ W_2) that pins ψ₀(g″) below ε′
    if m >= 2 {
        let blocked = union(&sp.closure(&za[1]), &wa[1]);
        if is_empty(&intersect(&wa[0], &complement(&blocked))) {
            return Err(Error::Verification("W_1 \\ (cl Z_2 ∪ W_2) is empty; the chain is not minimal".into()));
        }
    }
    let g_prime = (0..m).map(|j| bump(&sp, &m_sets[j], &n_sets[j])).collect();
    Ok(Localised { z, radius: r, atoms: sp, n: n_sets, m: m_sets, g_prime })
}

/// The three conditions on the `Z_j`: `Z_j ⊆ W_{j−1} ∪ W_j`, and the closure
/// of `Z_j` misses the closures of `W_{j+1}` and `Z_{j+1}`.
fn z_conditions(w: &[OpenSet], z: &[OpenSet]) -> Result<bool> {
    for j in 1..w.len() {
        if !z[j].is_subset(&w[j - 1].union(&w[j])?)? {
            return Ok(false);
        }
        if j + 1 < w.len() && (!closures_disjoint(&z[j], &w[j + 1])? || !closures_disjoint(&z[j], &z[j + 1])?) {
            return Ok(false);
        }
    }
    // keep room for the point z ∈ W_1 \ (cl Z_2 ∪ W_2)
    if w.len() >= 2 {
        let sp = AtomSpace::subdivide(w[0].graph(), &[w[0].generator(), w[1].generator(), z[1].generator()]);
        let blocked = union(&sp.closure(&sp.positive_atoms(z[1].generator())), &sp.positive_atoms(w[1].generator()));
        if is_empty(&intersect(&sp.positive_atoms(w[0].generator()), &complement(&blocked))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// PL function equal to 1 on the closed set `m`, positive exactly on the
/// open set `n ⊇ m`, and 0 elsewhere: 1/2 on the rest of `n`.
fn bump(sp: &AtomSpace, m: &AtomSet, n: &AtomSet) -> PLFunction {
    let level = |i: usize| {
        if m[i] {
            qi(1)
        } else if n[i] {
            Q::new(1.into(), 2.into())
        } else {
            qi(0)
        }
    };
    let graph = sp.graph();
    let vertex = (0..graph.vertex_count()).map(level).collect();
    let interior = (0..graph.edge_count())
        .map(|e| {
            let cuts = sp.cuts(e);
            let mut pts = Vec::new();
            for k in 0..cuts.len() - 1 {
                if k > 0 {
                    pts.push((cuts[k].clone(), level(sp.cut_atom(e, k))));
                }
                let span = sp.index(crate::atoms::Atom::Span { edge: e, k });
                pts.push((crate::rational::midpoint(&cuts[k], &cuts[k + 1]), level(span)));
            }
            pts
        })
        .collect();
    PLFunction::from_vertex_values(graph, vertex, interior).expect("bump is continuous")
}

fn finish(fs: &[PLFunction], c: &Construction, p0: &Q, eps: Q, eps_prime: Q, delta: &Q) -> Result<Witness> {
    let m = c.chain.len();
    let graph = fs[0].graph();
    let mut g = Vec::with_capacity(m);
    for j in 0..m {
        if c.g_prime[j].sup_norm() != qi(1) {
            return Err(Error::Verification(format!("g′_{} does not have norm 1", j + 1)));
        }
        g.push(c.g_raw[j].min(&c.g_prime[j].scale(&eps_prime))?);
    }
    let zero = PLFunction::zero(graph);
    let h: Vec<Vec<PLFunction>> = (0..m)
        .map(|j| {
            (0..fs.len())
                .map(|i| {
                    if i == c.assignment[j] {
                        fs[i].abs().sub(&g[j].abs()).expect("same graph")
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();
    let w = Witness { m, g, h, eps: eps.clone(), eps_prime: eps_prime.clone(), delta: delta.clone() };

    for (j, gj) in w.g.iter().enumerate() {
        let i = c.assignment[j];
        if !fs[i].sub(gj)?.is_nonnegative() || gj.min_value().0.is_negative() {
            return Err(Error::Verification(format!("g″_{} is not between 0 and f_{}", j + 1, i + 1)));
        }
    }
    if !psi1_is_zero(&w.g)? {
        return Err(Error::Verification("(†) fails: ψ₁(g″) ≠ 0".into()));
    }
    let p2 = psi2(fs, &w.g, &w.h)?;
    if !p2.exact_value().is_some_and(num_traits::Zero::is_zero) {
        return Err(Error::Verification(format!("(†) fails: ψ₂ = {p2}")));
    }
    let pg = psi0(&w.g)?.exact_value().cloned().expect("ψ₀ is exact");
    if pg < eps || pg >= eps_prime {
        return Err(Error::Verification(format!(
            "ψ₀(g″) = {} lies outside [ε, ε′) = [{}, {})",
            fmt_q(&pg),
            fmt_q(&eps),
            fmt_q(&eps_prime)
        )));
    }
    let k = qi(fs.len() as i64);
    let deficit = p0 - &k * &pg;
    if &deficit >= delta {
        return Err(Error::Verification(format!("(†) fails: ψ₀(f) ∸ kψ₀(g″) = {} ≥ δ", fmt_q(&deficit))));
    }
    Ok(w)
}
