//! Univariate rational polynomials, real-root isolation by Sturm sequences,
//! and piecewise polynomials (degree ≤ 4) on metric graphs.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::{same_graph, PLFunction};
use crate::rational::{midpoint, qi, qmax, qmin, zero, Q};

pub const MAX_DEGREE: usize = 4;

/// Coefficients in ascending order, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn linear(c0: Q, c1: Q) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Naive interval Horner enclosure over `[lo, hi]`.
    pub fn eval_interval(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let (mut a, mut b) = (zero(), zero());
        for c in self.0.iter().rev() {
            let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).cloned().unwrap_or_else(zero) + o.0.get(i).cloned().unwrap_or_else(zero))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * qi(i as i64)).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = d.0[dl - 1].clone();
        if r.len() < dl {
            return (Self::zero(), self.clone());
        }
        let mut qt = vec![zero(); r.len() - dl + 1];
        for k in (0..qt.len()).rev() {
            let coef = &r[k + dl - 1] / &lead;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &coef * dc;
            }
            qt[k] = coef;
        }
        (Self::new(qt), Self::new(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.0.last().cloned() {
            Some(l) => a.scale(&(qi(1) / l)),
            None => a,
        }
    }

    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.scale(&qi(-1)));
        }
        seq.pop();
        seq
    }

    fn sign_changes(seq: &[Poly], x: &Q) -> usize {
        let signs: Vec<bool> = seq
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// A real root: known exactly, or isolated in an open interval across
/// which the polynomial changes sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Q),
    Isolated(Q, Q),
}

/// Real roots of `p` in the open interval `(a, b)`, isolating intervals no
/// wider than `width`.
pub fn real_roots(p: &Poly, a: &Q, b: &Q, width: &Q) -> Vec<Root> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let mut sf = p.squarefree();
    for end in [a, b] {
        if sf.eval(end).is_zero() {
            sf = sf.div_rem(&Poly::linear(-end, qi(1))).0;
        }
    }
    let mut out = Vec::new();
    isolate(&sf, a.clone(), b.clone(), width, &mut out);
    out.sort_by(|x, y| root_key(x).cmp(root_key(y)));
    out
}

fn root_key(r: &Root) -> &Q {
    match r {
        Root::Exact(x) | Root::Isolated(x, _) => x,
    }
}

fn isolate(p: &Poly, l: Q, r: Q, width: &Q, out: &mut Vec<Root>) {
    if p.degree() == 0 {
        return;
    }
    let seq = p.sturm_sequence();
    let n = Poly::sign_changes(&seq, &l) as i64 - Poly::sign_changes(&seq, &r) as i64;
    if n <= 0 {
        return;
    }
    let (pl, pr) = (p.eval(&l), p.eval(&r));
    if n == 1 && (pl.is_positive() != pr.is_positive()) {
        out.push(refine_root(p, l, r, width));
        return;
    }
    let m = midpoint(&l, &r);
    if p.eval(&m).is_zero() {
        out.push(Root::Exact(m.clone()));
        let deflated = p.div_rem(&Poly::linear(-&m, qi(1))).0;
        isolate(&deflated, l, r, width, out);
        return;
    }
    isolate(p, l, m.clone(), width, out);
    isolate(p, m, r, width, out);
}

fn refine_root(p: &Poly, mut l: Q, mut r: Q, width: &Q) -> Root {
    let left_positive = p.eval(&l).is_positive();
    while &(&r - &l) > width {
        let m = midpoint(&l, &r);
        let v = p.eval(&m);
        if v.is_zero() {
            return Root::Exact(m);
        }
        if v.is_positive() == left_positive {
            l = m;
        } else {
            r = m;
        }
    }
    Root::Isolated(l, r)
}

/// Enclosure of `p(c)` for the critical point `c` isolated in `(l, r)`,
/// narrowed until it is no wider than `tol`.
fn critical_value(p: &Poly, dp: &Poly, l: &Q, r: &Q, tol: &Q) -> (Q, Q, Q) {
    let (mut l, mut r) = (l.clone(), r.clone());
    loop {
        let m = midpoint(&l, &r);
        let pm = p.eval(&m);
        let (dlo, dhi) = dp.eval_interval(&l, &r);
        let half = (&r - &l) / qi(2);
        let bound = qmax(&dlo.abs(), &dhi.abs()) * &half;
        let (lo, hi) = (&pm - &bound, &pm + &bound);
        if &(&hi - &lo) <= tol {
            return (lo, hi, m);
        }
        let v = dp.eval(&m);
        if v.is_zero() {
            let e = p.eval(&m);
            return (e.clone(), e, m);
        }
        let left_positive = dp.eval(&l).is_positive();
        if v.is_positive() == left_positive {
            l = m;
        } else {
            r = m;
        }
    }
}

/// Certified extrema of `p` on `[a, b]` with enclosure width ≤ `tol`.
/// Returns `(min, argmin, max, argmax)`; the arguments are exact for
/// quadratic and lower degrees and interval midpoints otherwise.
pub fn poly_extrema(p: &Poly, a: &Q, b: &Q, tol: &Q) -> (CertifiedValue, Q, CertifiedValue, Q) {
    // candidates: (lower, upper, location)
    let mut cands: Vec<(Q, Q, Q)> = Vec::new();
    for x in [a, b] {
        let v = p.eval(x);
        cands.push((v.clone(), v, x.clone()));
    }
    let dp = p.derivative();
    if p.degree() == 2 {
        let c = p.coeffs();
        let t = -&c[1] / (qi(2) * &c[2]);
        if a < &t && &t < b {
            let v = p.eval(&t);
            cands.push((v.clone(), v, t));
        }
    } else if p.degree() > 2 {
        for root in real_roots(&dp, a, b, tol) {
            match root {
                Root::Exact(t) => {
                    let v = p.eval(&t);
                    cands.push((v.clone(), v, t));
                }
                Root::Isolated(l, r) => cands.push(critical_value(p, &dp, &l, &r, tol)),
            }
        }
    }
    let hi_lower = cands.iter().map(|c| &c.0).max().unwrap().clone();
    let (_, hi_upper, hi_at) = cands.iter().max_by(|x, y| x.1.cmp(&y.1)).unwrap().clone();
    let (lo_lower, _, lo_at) = cands.iter().min_by(|x, y| x.0.cmp(&y.0)).unwrap().clone();
    let lo_upper = cands.iter().map(|c| &c.1).min().unwrap().clone();
    (
        CertifiedValue::new(lo_lower, qmax(&lo_upper, &cands.iter().map(|c| &c.0).min().unwrap().clone())),
        lo_at,
        CertifiedValue::new(qmin(&hi_lower, &hi_upper), hi_upper),
        hi_at,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyPiece {
    pub lo: Q,
    pub hi: Q,
    pub poly: Poly,
}

/// A continuous function that is polynomial (degree ≤ 4, absolute edge
/// parameter) on each piece of each edge.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    graph: Arc<MetricGraph>,
    vertex: Vec<Q>,
    pieces: Vec<Vec<PolyPiece>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extrema {
    pub min: CertifiedValue,
    pub argmin: Point,
    pub max: CertifiedValue,
    pub argmax: Point,
}

fn piece_at<'a>(pieces: &'a [PolyPiece], t: &Q) -> &'a PolyPiece {
    let i = pieces.partition_point(|p| &p.hi < t);
    &pieces[i.min(pieces.len() - 1)]
}

impl PiecewisePoly {
    pub fn from_pl(f: &PLFunction) -> Self {
        let pieces = f
            .pieces()
            .iter()
            .map(|pts| {
                pts.windows(2)
                    .map(|w| {
                        let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
                        let slope = (v1 - v0) / (t1 - t0);
                        let icpt = v0 - &slope * t0;
                        PolyPiece { lo: t0.clone(), hi: t1.clone(), poly: Poly::linear(icpt, slope) }
                    })
                    .collect()
            })
            .collect();
        Self { graph: f.graph().clone(), vertex: f.vertex_values().to_vec(), pieces }
    }

    pub fn constant(graph: &Arc<MetricGraph>, c: Q) -> Self {
        Self::from_pl(&PLFunction::constant(graph, c))
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn pieces(&self, edge: usize) -> &[PolyPiece] {
        &self.pieces[edge]
    }

    pub fn degree(&self) -> usize {
        self.pieces.iter().flatten().map(|p| p.poly.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.vertex.iter().all(Zero::is_zero) && self.pieces.iter().flatten().all(|p| p.poly.is_zero())
    }

    pub fn eval(&self, p: &Point) -> Result<Q> {
        match p {
            Point::Vertex(v) => self.vertex.get(*v).cloned().ok_or_else(|| Error::UnknownEdge(format!("vertex #{v}"))),
            Point::Edge { edge, t } => {
                let pieces = self.pieces.get(*edge).ok_or_else(|| Error::UnknownEdge(format!("#{edge}")))?;
                Ok(piece_at(pieces, t).poly.eval(t))
            }
        }
    }

    fn zip_with(&self, o: &Self, op: impl Fn(&Poly, &Poly) -> Poly, vop: impl Fn(&Q, &Q) -> Q) -> Result<Self> {
        if !same_graph(&self.graph, &o.graph) {
            return Err(Error::GraphMismatch);
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (a, b) in self.pieces.iter().zip(&o.pieces) {
            let mut cuts: Vec<Q> = a.iter().chain(b.iter()).flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
            cuts.sort();
            cuts.dedup();
            let edge: Vec<PolyPiece> = cuts
                .windows(2)
                .map(|w| {
                    let mid = midpoint(&w[0], &w[1]);
                    PolyPiece {
                        lo: w[0].clone(),
                        hi: w[1].clone(),
                        poly: op(&piece_at(a, &mid).poly, &piece_at(b, &mid).poly),
                    }
                })
                .collect();
            pieces.push(edge);
        }
        let vertex = self.vertex.iter().zip(&o.vertex).map(|(x, y)| vop(x, y)).collect();
        Ok(Self { graph: self.graph.clone(), vertex, pieces })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, Poly::add, |x, y| x + y)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, Poly::sub, |x, y| x - y)
    }

    /// Product; fails when any piece would exceed degree 4.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let out = self.zip_with(o, Poly::mul, |x, y| x * y)?;
        if out.degree() > MAX_DEGREE {
            return Err(Error::DegreeCap(format!("product of degree {} exceeds {MAX_DEGREE}", out.degree())));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            graph: self.graph.clone(),
            vertex: self.vertex.iter().map(|v| v * c).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|e| e.iter().map(|p| PolyPiece { poly: p.poly.scale(c), ..p.clone() }).collect())
                .collect(),
        }
    }

    /// The same function as a [`PLFunction`] when every piece is affine.
    pub fn to_pl(&self) -> Option<PLFunction> {
        if self.degree() > 1 {
            return None;
        }
        let pieces = self
            .pieces
            .iter()
            .map(|e| {
                let mut pts: Vec<(Q, Q)> = e.iter().map(|p| (p.lo.clone(), p.poly.eval(&p.lo))).collect();
                let last = e.last().unwrap();
                pts.push((last.hi.clone(), last.poly.eval(&last.hi)));
                pts
            })
            .collect();
        PLFunction::with_vertex_values(self.graph.clone(), self.vertex.clone(), pieces).ok()
    }

    /// Certified minimum and maximum, each enclosure no wider than `tol`.
    pub fn extrema(&self, tol: &Q) -> Extrema {
        let mut best_max: Option<(CertifiedValue, Point)> = None;
        let mut best_min: Option<(CertifiedValue, Point)> = None;
        let mut offer = |lo: CertifiedValue, lo_at: Point, hi: CertifiedValue, hi_at: Point| {
            match &mut best_max {
                Some((b, at)) => {
                    if hi.upper() > b.upper() {
                        *at = hi_at;
                    }
                    *b = b.max(&hi);
                }
                None => best_max = Some((hi, hi_at)),
            }
            match &mut best_min {
                Some((b, at)) => {
                    if lo.lower() < b.lower() {
                        *at = lo_at;
                    }
                    *b = b.min(&lo);
                }
                None => best_min = Some((lo, lo_at)),
            }
        };
        for (v, x) in self.vertex.iter().enumerate() {
            let c = CertifiedValue::exact(x.clone());
            offer(c.clone(), Point::Vertex(v), c, Point::Vertex(v));
        }
        for (e, pieces) in self.pieces.iter().enumerate() {
            for p in pieces {
                let (lo, lo_t, hi, hi_t) = poly_extrema(&p.poly, &p.lo, &p.hi, tol);
                let at = |t: Q| Point::on_edge(&self.graph, e, t).expect("piece inside edge");
                offer(lo, at(lo_t), hi, at(hi_t));
            }
        }
        let (min, argmin) = best_min.unwrap();
        let (max, argmax) = best_max.unwrap();
        Extrema { min, argmin, max, argmax }
    }

    /// Certified sup-norm.
    pub fn sup_norm(&self, tol: &Q) -> CertifiedValue {
        let ex = self.extrema(tol);
        ex.max.max(&ex.min.neg())
    }
}

impl PLFunction {
    /// Exact piecewise-quadratic product.
    pub fn mul(&self, other: &PLFunction) -> Result<PiecewisePoly> {
        PiecewisePoly::from_pl(self).mul(&PiecewisePoly::from_pl(other))
    }
}
