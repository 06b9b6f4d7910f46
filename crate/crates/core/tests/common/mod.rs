//! Dense-grid floating-point oracles. They only read breakpoints and
//! re-derive every quantity by sampling, independently of the exact code.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use continua::graph::MetricGraph;
use continua::logic::{Formula, Term};
use continua::rational::{q, qi, to_f64};
use rand::Rng;
use continua::{PLFunction, Q};

pub const MESH: f64 = 1e-4;
pub const TOL: f64 = 1e-3;

/// Sample positions `(edge, t)` with spacing at most `MESH` on every edge.
/// The step count is a multiple of the generators' denominator, so random
/// breakpoints fall on samples and nothing narrower than a step is missed.
pub fn grid(graph: &MetricGraph) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let d = continua::random::GRID as f64;
    for (e, edge) in graph.edges().iter().enumerate() {
        let len = to_f64(&edge.len);
        let n = ((len / (d * MESH)).ceil() * d) as usize;
        out.extend((0..=n).map(|k| (e, len * k as f64 / n as f64)));
    }
    out
}

/// Breakpoints as floats, per edge.
pub fn floats(f: &PLFunction) -> Vec<Vec<(f64, f64)>> {
    f.pieces()
        .iter()
        .map(|pts| pts.iter().map(|(t, v)| (to_f64(t), to_f64(v))).collect())
        .collect()
}

pub fn interp(pts: &[(f64, f64)], t: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 <= t);
    if i == 0 {
        return pts[0].1;
    }
    if i >= pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (t0, v0) = pts[i - 1];
    let (t1, v1) = pts[i];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Values of `f` on `grid`.
pub fn sample(f: &PLFunction, grid: &[(usize, f64)]) -> Vec<f64> {
    let fl = floats(f);
    grid.iter().map(|&(e, t)| interp(&fl[e], t)).collect()
}

pub fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

pub fn psi0(fs: &[PLFunction]) -> f64 {
    let g = grid(fs[0].graph());
    let cols: Vec<Vec<f64>> = fs.iter().map(|f| sample(f, &g)).collect();
    let sums: Vec<f64> = (0..g.len()).map(|p| cols.iter().map(|c| c[p].abs()).sum()).collect();
    let outer = sup_abs(&sums);
    let inner = sums.iter().fold(0.0f64, |m, s| m.max((outer - s).abs()));
    outer - inner
}

pub fn psi1(gs: &[PLFunction]) -> f64 {
    let g = grid(gs[0].graph());
    let cols: Vec<Vec<f64>> = gs.iter().map(|f| sample(f, &g)).collect();
    let mut best = 0.0f64;
    for i in 0..gs.len() {
        for j in i + 2..gs.len() {
            let n = (0..g.len()).fold(0.0f64, |m, p| m.max((cols[i][p] * cols[j][p]).abs()));
            best = best.max(n.sqrt());
        }
    }
    best
}

pub fn psi2(fs: &[PLFunction], gs: &[PLFunction], hs: &[Vec<PLFunction>]) -> f64 {
    let g = grid(fs[0].graph());
    let fc: Vec<Vec<f64>> = fs.iter().map(|f| sample(f, &g)).collect();
    let mut best = f64::NEG_INFINITY;
    for (j, gj) in gs.iter().enumerate() {
        let gv = sample(gj, &g);
        let mut inner = f64::INFINITY;
        for (i, fi) in fc.iter().enumerate() {
            let hv = sample(&hs[j][i], &g);
            let d = (0..g.len()).fold(0.0f64, |m, p| m.max((fi[p].abs() - gv[p].abs() - hv[p].abs()).abs()));
            inner = inner.min(d);
        }
        best = best.max(inner);
    }
    best
}

fn term(t: &Term, vals: &BTreeMap<usize, Vec<f64>>, n: usize) -> Vec<f64> {
    let bin = |a: &Term, b: &Term, op: fn(f64, f64) -> f64| {
        let (x, y) = (term(a, vals, n), term(b, vals, n));
        x.iter().zip(&y).map(|(p, q)| op(*p, *q)).collect()
    };
    match t {
        Term::Var(i) => vals[i].clone(),
        Term::One => vec![1.0; n],
        Term::Zero => vec![0.0; n],
        Term::Scale(c, a) => term(a, vals, n).iter().map(|x| to_f64(c) * x).collect(),
        Term::Add(a, b) => bin(a, b, |p, q| p + q),
        Term::Sub(a, b) => bin(a, b, |p, q| p - q),
        Term::Mul(a, b) => bin(a, b, |p, q| p * q),
        Term::Abs(a) => term(a, vals, n).iter().map(|x| x.abs()).collect(),
    }
}

fn formula(f: &Formula, vals: &BTreeMap<usize, Vec<f64>>, n: usize) -> f64 {
    match f {
        Formula::Norm(t) => sup_abs(&term(t, vals, n)),
        Formula::Const(c) => to_f64(c),
        Formula::Add(a, b) => formula(a, vals, n) + formula(b, vals, n),
        Formula::DotMinus(a, b) => (formula(a, vals, n) - formula(b, vals, n)).max(0.0),
        Formula::Max(fs) => fs.iter().map(|x| formula(x, vals, n)).fold(f64::NEG_INFINITY, f64::max),
        Formula::Min(fs) => fs.iter().map(|x| formula(x, vals, n)).fold(f64::INFINITY, f64::min),
        Formula::Scale(c, a) => to_f64(c) * formula(a, vals, n),
        Formula::Sqrt(a) => formula(a, vals, n).max(0.0).sqrt(),
        Formula::Dist(a, b) => {
            let (x, y) = (term(a, vals, n), term(b, vals, n));
            x.iter().zip(&y).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()))
        }
    }
}

/// Value of a quantifier-free formula by sampling every variable on the grid.
pub fn eval(f: &Formula, a: &BTreeMap<usize, PLFunction>, graph: &Arc<MetricGraph>) -> f64 {
    let g = grid(graph);
    let vals = a.iter().map(|(i, f)| (*i, sample(f, &g))).collect();
    formula(f, &vals, g.len())
}

/// Connected components of `{f > 0}` by flood fill over grid samples: runs
/// of positive samples along each edge, glued through positive vertices.
pub fn positive_components(f: &PLFunction) -> usize {
    let graph = f.graph();
    let g = grid(graph);
    let vals = sample(f, &g);
    let mut parent: Vec<usize> = Vec::new();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let nv = graph.vertex_count();
    parent.extend(0..nv);
    let vertex_pos: Vec<bool> = f.vertex_values().iter().map(|v| to_f64(v) > 0.0).collect();
    let mut idx = 0;
    for (e, edge) in graph.edges().iter().enumerate() {
        let mut run: Option<usize> = None;
        let mut first = true;
        while idx < g.len() && g[idx].0 == e {
            let pos = vals[idx] > 0.0;
            let at_end = idx + 1 == g.len() || g[idx + 1].0 != e;
            let node = if first {
                first = false;
                pos.then_some(edge.u)
            } else if at_end {
                pos.then_some(edge.v)
            } else if pos {
                Some(match run {
                    Some(r) => r,
                    None => {
                        parent.push(parent.len());
                        parent.len() - 1
                    }
                })
            } else {
                None
            };
            if let (Some(a), Some(b)) = (run, node) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
            run = node;
            idx += 1;
        }
    }
    let mut roots = std::collections::BTreeSet::new();
    for v in 0..parent.len() {
        let live = if v < nv { vertex_pos[v] } else { true };
        if live {
            roots.insert(find(&mut parent, v));
        }
    }
    roots.len()
}

pub fn q_f64(x: &Q) -> f64 {
    to_f64(x)
}

/// Random PL function with breakpoints on the `len/8` grid and values in
/// `[lo, hi]`, so slopes stay small enough for the mesh to resolve kinks
/// to within `TOL`.
pub fn tame(rng: &mut impl Rng, graph: &Arc<MetricGraph>, lo: &Q, hi: &Q) -> PLFunction {
    let vertex: Vec<Q> = (0..graph.vertex_count()).map(|_| continua::random::rational(rng, lo, hi)).collect();
    let interior = graph
        .edges()
        .iter()
        .map(|e| {
            let mut pts = Vec::new();
            for k in 1..8i64 {
                if rng.gen_bool(0.4) {
                    pts.push((Q::new(k.into(), 8.into()) * &e.len, continua::random::rational(rng, lo, hi)));
                }
            }
            pts
        })
        .collect();
    PLFunction::from_vertex_values(graph, vertex, interior).unwrap()
}

/// Random formula over x1..x3 within the degree rule.
pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::RngCore| -> Term {
        match rng.gen_range(0..4) {
            0 => Term::One,
            _ => Term::Var(rng.gen_range(1..=3)),
        }
    };
    let linear = |rng: &mut dyn rand::RngCore| -> Term {
        let a = leaf(rng);
        let b = leaf(rng);
        match rng.gen_range(0..4) {
            0 => Term::Add(Box::new(a), Box::new(b)),
            1 => Term::Sub(Box::new(a), Box::new(b)),
            2 => Term::Scale(q(rng.gen_range(-4..=4), 3), Box::new(a)),
            _ => Term::Abs(Box::new(Term::Sub(Box::new(a), Box::new(b)))),
        }
    };
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Formula::Norm(linear(rng)),
            1 => Formula::Norm(Term::Mul(Box::new(linear(rng)), Box::new(linear(rng)))),
            2 => Formula::Dist(linear(rng), linear(rng)),
            _ => Formula::Const(q(rng.gen_range(0..8), 4)),
        };
    }
    let a = Box::new(random_formula(rng, depth - 1));
    let b = Box::new(random_formula(rng, depth - 1));
    match rng.gen_range(0..6) {
        0 => Formula::Add(a, b),
        1 => Formula::DotMinus(a, b),
        2 => Formula::Max(vec![*a, *b]),
        3 => Formula::Min(vec![*a, *b]),
        4 => Formula::Scale(q(rng.gen_range(1..6), 2), a),
        _ => Formula::Sqrt(a),
    }
}

pub fn assignment(rng: &mut impl Rng, g: &Arc<MetricGraph>) -> BTreeMap<usize, PLFunction> {
    (1..=3).map(|i| (i, tame(rng, g, &qi(-1), &qi(1)))).collect()
}
