mod common;

use std::sync::Arc;

use continua::amalgam::{
    compose_check, compose_unit, dichotomy_sets, fiber_product_circle, hoehn_check, ArcMap, CircleMap, Comparison,
    Verdict,
};
use continua::random;
use continua::rational::{one, q, qi, zero};
use continua::{Error, MetricGraph, PLFunction, Q};
use rand::Rng;

fn interval() -> Arc<MetricGraph> {
    Arc::new(MetricGraph::interval())
}

fn interp(pts: &[(Q, Q)], t: &Q) -> Q {
    let i = pts.partition_point(|p| &p.0 <= t).clamp(1, pts.len() - 1);
    let ((t0, v0), (t1, v1)) = (&pts[i - 1], &pts[i]);
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Increasing PL self-map of `[0, len]` fixing both ends.
fn homeo(rng: &mut impl Rng, len: &Q) -> Vec<(Q, Q)> {
    let n = rng.gen_range(1..=3);
    let mut ts: Vec<Q> = (0..n).map(|_| Q::new(rng.gen_range(1..16).into(), 16.into()) * len).collect();
    let mut us: Vec<Q> = (0..n).map(|_| Q::new(rng.gen_range(1..16).into(), 16.into()) * len).collect();
    ts.sort();
    ts.dedup();
    us.sort();
    us.dedup();
    let n = ts.len().min(us.len());
    let mut pts = vec![(zero(), zero())];
    pts.extend(ts.into_iter().zip(us).take(n));
    pts.push((len.clone(), len.clone()));
    pts
}

/// `f ∘ ψ` where `psi[e]` reparametrizes edge `e`.
fn reparam(f: &PLFunction, psi: &[Vec<(Q, Q)>]) -> PLFunction {
    let pieces = f
        .pieces()
        .iter()
        .zip(psi)
        .map(|(fe, pe)| {
            let mut ts: Vec<Q> = pe.iter().map(|p| p.0.clone()).collect();
            for w in pe.windows(2) {
                let ((t0, u0), (t1, u1)) = (&w[0], &w[1]);
                for (x, _) in fe.iter().filter(|(x, _)| u0 < x && x < u1) {
                    ts.push(t0 + (x - u0) * (t1 - t0) / (u1 - u0));
                }
            }
            ts.sort();
            ts.into_iter().map(|t| (t.clone(), interp(fe, &interp(pe, &t)))).collect()
        })
        .collect();
    PLFunction::new(f.graph().clone(), pieces).unwrap()
}

fn lift(rng: &mut impl Rng) -> PLFunction {
    common::tame(rng, &interval(), &qi(-1), &qi(2))
}

fn surjective(f: &PLFunction) -> bool {
    f.max_value().0 - f.min_value().0 >= one()
}

#[test]
fn fiber_products_commute_and_stay_surjective() {
    let mut rng = random::rng(41);
    let mut done = 0;
    while done < 20 {
        let (fl, gl) = (lift(&mut rng), lift(&mut rng));
        let (f, g) = (CircleMap::new(fl.clone()), CircleMap::new(gl.clone()));
        let fp = match fiber_product_circle(&f, &g) {
            Ok(fp) => fp,
            // flat pieces at an integer offset give a 2-cell
            Err(Error::Precondition(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        done += 1;
        assert_eq!(compose_check(&f, &fp.r, &g, &fp.s).unwrap(), Comparison::Equal);
        if surjective(&fl) && surjective(&gl) {
            assert!(fp.r.is_surjective() && fp.s.is_surjective());
        }
        // every vertex lies on the fiber, checked with the lifts themselves
        for (x, y) in &fp.coords {
            assert!((interp(&fl.pieces()[0], x) - interp(&gl.pieces()[0], y)).is_integer());
        }
    }
}

#[test]
fn reparametrized_family_members_split_exactly() {
    let mut rng = random::rng(42);
    for n in 0..20 {
        let a = q(rng.gen_range(-512..512), 256);
        let c = if n < 10 { q(1, 2) } else { q(rng.gen_range(1..256), 256) };
        let (f, g) = (CircleMap::shifted(&a), CircleMap::shifted(&(&a + &c + qi(rng.gen_range(-2..=2)))));
        let fp = fiber_product_circle(&f, &g).unwrap();
        let psi: Vec<Vec<(Q, Q)>> = fp.graph.edges().iter().map(|e| homeo(&mut rng, &e.len)).collect();
        let r = ArcMap::new(reparam(fp.r.values(), &psi)).unwrap();
        let s = ArcMap::new(reparam(fp.s.values(), &psi)).unwrap();
        let verdict = hoehn_check(&fp.graph, &r, &s, &f, &g).unwrap();
        assert!(matches!(verdict, Verdict::DisconnectionCertified { components: 2, .. }), "{verdict}");
        let (sa, sb) = dichotomy_sets(&r, &s, &c).unwrap();
        assert!(sa.intersect(&sb).unwrap().is_empty());
        assert!(sa.union(&sb).unwrap().is_whole().is_ok());
    }
}

#[test]
fn connected_candidates_are_never_certified() {
    let mut rng = random::rng(43);
    let graphs = [
        interval(),
        Arc::new(MetricGraph::circle()),
        Arc::new(MetricGraph::new(vec!["c", "x", "y", "z"], vec![("a", "c", "x", qi(1)), ("b", "c", "y", qi(1)), ("d", "c", "z", q(1, 2))]).unwrap()),
    ];
    let (mut mismatch, mut onto) = (0, 0);
    for n in 0..50 {
        let w = &graphs[n % 3];
        let unit = |f: PLFunction| {
            let (lo, hi) = (f.min_value().0, f.max_value().0);
            if lo == hi {
                f.map(|_| zero())
            } else {
                f.map(|v| (v - &lo) / (&hi - &lo))
            }
        };
        let mut r = unit(common::tame(&mut rng, w, &qi(-1), &qi(1)));
        let s = unit(common::tame(&mut rng, w, &qi(-1), &qi(1)));
        if n % 5 == 0 {
            // half range: stage one fires
            r = r.scale(&q(1, 2));
        }
        let (r, s) = (ArcMap::new(r).unwrap(), ArcMap::new(s).unwrap());
        let c = q(rng.gen_range(1..8), 8);
        let (f, g) = (CircleMap::standard(), CircleMap::shifted(&c));
        match hoehn_check(w, &r, &s, &f, &g).unwrap() {
            Verdict::CompositionMismatch(_) => mismatch += 1,
            Verdict::NotSurjective { .. } => onto += 1,
            v => panic!("connected candidate {n} reached {v}"),
        }
    }
    assert!(mismatch > 0 && onto > 0);
}

#[test]
fn reparametrizing_the_domain_keeps_the_verdict() {
    let mut rng = random::rng(44);
    let g1 = interval();
    for n in 0..30 {
        let fl = lift(&mut rng);
        let f = CircleMap::new(fl.clone());
        let g = CircleMap::new(lift(&mut rng));
        let (r, s) = match fiber_product_circle(&f, &g) {
            Ok(fp) if n % 2 == 0 => (fp.r, fp.s),
            _ => (
                ArcMap::new(common::tame(&mut rng, &g1, &qi(0), &qi(1))).unwrap(),
                ArcMap::new(common::tame(&mut rng, &g1, &qi(0), &qi(1))).unwrap(),
            ),
        };
        let phi = homeo(&mut rng, &one());
        let inverse: Vec<(Q, Q)> = phi.iter().map(|(t, u)| (u.clone(), t.clone())).collect();
        let phi_fn = PLFunction::on_single_edge(&g1, phi.clone()).unwrap();
        let f2 = CircleMap::new(compose_unit(fl.pieces()[0].as_slice(), &phi_fn).unwrap());
        let r2 = ArcMap::new(compose_unit(&inverse, r.values()).unwrap()).unwrap();
        let before = compose_check(&f, &r, &g, &s).unwrap() == Comparison::Equal;
        let after = compose_check(&f2, &r2, &g, &s).unwrap() == Comparison::Equal;
        assert_eq!(before, after, "case {n}");
    }
}
