//! The formulas ψ₀, ψ₁, ψ₂ and the inner body of σ_k.

use num_traits::Signed;

use super::Witness;
use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::pl::PLFunction;
use crate::rational::{qi, zero, Q};

fn abs_sum(fs: &[PLFunction]) -> Result<PLFunction> {
    let (first, rest) = fs.split_first().ok_or_else(|| Error::Dimension("empty tuple".into()))?;
    rest.iter().try_fold(first.abs(), |acc, f| acc.add(&f.abs()))
}

/// `‖Σ|x_i|‖ − ‖ ‖Σ|x_i|‖ − Σ|x_i| ‖`, evaluated literally; always exact.
pub fn psi0(fs: &[PLFunction]) -> Result<CertifiedValue> {
    let s = abs_sum(fs)?;
    let outer = s.sup_norm();
    let inner = s.neg().add_const(&outer).sup_norm();
    Ok(CertifiedValue::exact(outer - inner))
}

/// `max_{|i−j|≥2} √‖y_i y_j‖`, zero when no such pair exists.
pub fn psi1(gs: &[PLFunction], width: &Q) -> Result<CertifiedValue> {
    let mut best = CertifiedValue::exact(zero());
    for i in 0..gs.len() {
        for j in i + 2..gs.len() {
            let norm = gs[i].mul(&gs[j])?.sup_norm(width);
            best = best.max(&norm.sqrt(width)?);
        }
    }
    Ok(best)
}

/// Whether every long-range product `g_i g_j` (`|i − j| ≥ 2`) vanishes
/// identically, decided exactly.
pub fn psi1_is_zero(gs: &[PLFunction]) -> Result<bool> {
    for i in 0..gs.len() {
        for j in i + 2..gs.len() {
            if !gs[i].mul(&gs[j])?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `max_j min_i d(|x_i| − |y_j|, |z_ij|)` with `hs[j][i] = z_ij`.
pub fn psi2(fs: &[PLFunction], gs: &[PLFunction], hs: &[Vec<PLFunction>]) -> Result<CertifiedValue> {
    if hs.len() != gs.len() || hs.iter().any(|row| row.len() != fs.len()) {
        return Err(Error::Dimension(format!(
            "h must be {}×{} (one row per g, one column per f)",
            gs.len(),
            fs.len()
        )));
    }
    if fs.is_empty() || gs.is_empty() {
        return Err(Error::Dimension("empty tuple".into()));
    }
    let mut best: Option<Q> = None;
    for (g, row) in gs.iter().zip(hs) {
        let mut inner: Option<Q> = None;
        for (f, h) in fs.iter().zip(row) {
            let d = f.abs().sub(&g.abs())?.sub(&h.abs())?.sup_norm();
            inner = Some(match inner {
                Some(x) if x <= d => x,
                _ => d,
            });
        }
        let inner = inner.expect("k ≥ 1");
        best = Some(match best {
            Some(x) if x >= inner => x,
            _ => inner,
        });
    }
    Ok(CertifiedValue::exact(best.expect("m ≥ 1")))
}

/// The three conjuncts of the σ_k body for a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaParts {
    pub psi0_f: CertifiedValue,
    pub psi0_g: CertifiedValue,
    pub psi1: CertifiedValue,
    pub psi2: CertifiedValue,
    /// `ψ₀ᵏ(f) ∸ k·ψ₀ᵐ(g)`.
    pub deficit: CertifiedValue,
    pub value: CertifiedValue,
}

pub fn sigma_parts(fs: &[PLFunction], w: &Witness, width: &Q) -> Result<SigmaParts> {
    let k = qi(fs.len() as i64);
    let m = qi(w.g.len() as i64);
    let psi0_f = psi0(fs)?;
    let psi0_g = psi0(&w.g)?;
    let p1 = psi1(&w.g, width)?;
    let p2 = psi2(fs, &w.g, &w.h)?;
    let deficit = psi0_f.dotminus(&psi0_g.scale(&k));
    let value = psi0_f.min(&deficit.max(&p1.scale(&m)).max(&p2.scale(&m)));
    Ok(SigmaParts { psi0_f, psi0_g, psi1: p1, psi2: p2, deficit, value })
}

/// `min(ψ₀ᵏ(f), max(ψ₀ᵏ(f) ∸ kψ₀ᵐ(g), mψ₁ᵐ(g), mψ₂(f, g, h)))`: an upper
/// bound on σ_k(f).
pub fn sigma_inner(fs: &[PLFunction], w: &Witness, width: &Q) -> Result<CertifiedValue> {
    if w.g.len() != w.m || w.g.is_empty() {
        return Err(Error::Dimension(format!("witness has m = {} but {} functions", w.m, w.g.len())));
    }
    Ok(sigma_parts(fs, w, width)?.value)
}

pub(crate) fn nonnegative(fs: &[PLFunction]) -> bool {
    fs.iter().all(|f| !f.min_value().0.is_negative())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::MetricGraph;
    use crate::rational::{default_width, q};

    fn setup() -> (Arc<MetricGraph>, PLFunction) {
        let g = Arc::new(MetricGraph::interval());
        let t = PLFunction::identity(&g).unwrap();
        (g, t)
    }

    #[test]
    fn psi0_examples() {
        let (g, t) = setup();
        assert_eq!(psi0(&[PLFunction::constant(&g, qi(1))]).unwrap(), CertifiedValue::exact(qi(1)));
        assert_eq!(psi0(&[t.clone()]).unwrap(), CertifiedValue::exact(qi(0)));
        let s = t.neg().add_const(&qi(1));
        assert_eq!(psi0(&[t, s]).unwrap(), CertifiedValue::exact(qi(1)));
        assert!(psi0(&[]).is_err());
    }

    #[test]
    fn psi1_examples() {
        let (g, t) = setup();
        let w = default_width();
        let one = PLFunction::constant(&g, qi(1));
        assert_eq!(psi1(&[one.clone(), t.clone()], &w).unwrap(), CertifiedValue::exact(qi(0)));
        assert_eq!(psi1(&[one.clone(), t.clone(), one], &w).unwrap(), CertifiedValue::exact(qi(1)));
        let left = t.neg().add_const(&q(2, 5)).max_const(&qi(0));
        let right = t.add_const(&q(-3, 5)).max_const(&qi(0));
        let gs = [left, t, right];
        assert_eq!(psi1(&gs, &w).unwrap(), CertifiedValue::exact(qi(0)));
        assert!(psi1_is_zero(&gs).unwrap());
    }

    #[test]
    fn psi2_examples() {
        let (g, t) = setup();
        let zero = PLFunction::zero(&g);
        let s = t.neg().add_const(&qi(1));
        let fs = [t.clone(), s];
        let hs = vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]];
        assert_eq!(psi2(&fs, &fs, &hs).unwrap(), CertifiedValue::exact(qi(0)));
        let one = PLFunction::constant(&g, qi(1));
        assert_eq!(psi2(&[one], &[zero.clone()], &[vec![zero.clone()]]).unwrap(), CertifiedValue::exact(qi(1)));
        let half = t.scale(&q(1, 2));
        assert_eq!(psi2(&[t], &[half.clone()], &[vec![half]]).unwrap(), CertifiedValue::exact(qi(0)));
        assert!(psi2(&fs, &fs, &[vec![zero]]).is_err());
    }
}
