//! From a witness back to a chain cover refining `{f_i > 0}`.

use num_traits::Zero;

use super::cover::{nerve_and_is_chain, prune_chain, refines, ChainCertificate, ChainViolation};
use super::psi::{psi0, psi1, psi2};
use super::witness::Witness;
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::rational::{fmt_q, qi, Q};
use crate::sets::{covers, superlevel, OpenSet};

/// Result of [`extract_chain`]: the links before pruning, the indices kept,
/// and the verified certificate.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub links: Vec<OpenSet>,
    pub kept: Vec<usize>,
    pub certificate: ChainCertificate,
}

fn hypothesis(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("hypothesis fails: {}", what())))
    }
}

/// Build `W_j = {g_j > ε/2m}`, check that they cover X, refine
/// `U_i = {f_i > 0}` and have no long-range intersections, then prune gaps.
pub fn extract_chain(fs: &[PLFunction], w: &Witness, width: &Q) -> Result<Extraction> {
    if fs.is_empty() || w.g.is_empty() || w.g.len() != w.m {
        return Err(Error::Dimension("need k ≥ 1 functions and a witness with m ≥ 1".into()));
    }
    let graph = fs[0].graph().clone();
    let k = qi(fs.len() as i64);
    let m = qi(w.m as i64);
    let eps = &w.eps;
    let half = eps / qi(2);

    let p0f = psi0(fs)?;
    hypothesis(p0f.lower() > &(&k * eps), || format!("ψ₀ᵏ(f) = {p0f} is not above kε = {}", fmt_q(&(&k * eps))))?;
    let p0g = psi0(&w.g)?;
    hypothesis(p0g.lower() > &half, || format!("ψ₀ᵐ(g) = {p0g} is not above ε/2 = {}", fmt_q(&half)))?;
    let p1 = psi1(&w.g, width)?.scale(&m);
    hypothesis(p1.upper() < &half, || format!("mψ₁ = {p1} is not below ε/2 = {}", fmt_q(&half)))?;
    let p2 = psi2(fs, &w.g, &w.h)?.scale(&m);
    hypothesis(p2.upper() < &half, || format!("mψ₂ = {p2} is not below ε/2 = {}", fmt_q(&half)))?;

    let level = eps / (qi(2) * &m);
    let links: Vec<OpenSet> = w.g.iter().map(|g| superlevel(g, &level)).collect();
    if let Err(p) = covers(&graph, &links)? {
        return Err(Error::Verification(format!("the W_j miss {}", p.describe(&graph))));
    }
    let target: Vec<OpenSet> = fs.iter().map(|f| superlevel(f, &Q::zero())).collect();
    if let Err(j) = refines(&links, &target)? {
        return Err(Error::Verification(format!("W_{} lies in no U_i", j + 1)));
    }
    let (_, violation) = nerve_and_is_chain(&links)?;
    if let Some(ChainViolation::LongRange { i, j }) = violation {
        return Err(Error::Verification(format!("W_{} meets W_{}", i + 1, j + 1)));
    }
    let kept = prune_chain(&graph, &links)?;
    let chain: Vec<OpenSet> = kept.iter().map(|&j| links[j].clone()).collect();
    let assignment = refines(&chain, &target)?.expect("sub-list of a refinement");
    let certificate = ChainCertificate { chain, target, assignment };
    certificate.verify(&graph)?;
    Ok(Extraction { links, kept, certificate })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chain::witness::build_witness;
    use crate::graph::MetricGraph;
    use crate::rational::{default_width, q};

    #[test]
    fn round_trip_two_ramps() {
        let g = Arc::new(MetricGraph::interval());
        let t = PLFunction::identity(&g).unwrap();
        let fs = [t.clone(), t.neg().add_const(&qi(1))];
        let (w, _) = build_witness(&fs, &q(1, 4)).unwrap();
        let out = extract_chain(&fs, &w, &default_width()).unwrap();
        assert_eq!(out.certificate.chain.len(), 2);
        assert_eq!(out.certificate.assignment, vec![0, 1]);
    }

    #[test]
    fn trivial_chain() {
        let g = Arc::new(MetricGraph::interval());
        let one = PLFunction::constant(&g, qi(1));
        let w = Witness {
            m: 1,
            g: vec![one.clone()],
            h: vec![vec![PLFunction::zero(&g)]],
            eps: q(1, 2),
            eps_prime: q(3, 4),
            delta: q(1, 2),
        };
        let out = extract_chain(&[one], &w, &default_width()).unwrap();
        assert_eq!(out.certificate.chain.len(), 1);
    }

    #[test]
    fn violated_hypothesis() {
        let g = Arc::new(MetricGraph::interval());
        let one = PLFunction::constant(&g, qi(1));
        let zero = PLFunction::zero(&g);
        let w = Witness { m: 1, g: vec![zero.clone()], h: vec![vec![zero]], eps: q(1, 2), eps_prime: q(3, 4), delta: q(1, 2) };
        assert!(matches!(extract_chain(&[one], &w, &default_width()), Err(Error::Precondition(_))));
    }
}
