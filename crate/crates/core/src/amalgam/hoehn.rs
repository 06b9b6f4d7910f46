//! The closed-set dichotomy behind the failure of amalgamation over the
//! circle.
//!
//! Take `f(x) = exp(2πi·x)` and `g(y) = exp(2πi·(y + c))` on `[0, 1]` with
//! `c` not an integer, and write `c′` for its fractional part. If
//! `f ∘ r = g ∘ s` then `r − s ∈ {c′, c′ − 1}` everywhere, so `W` splits into
//! the disjoint closed sets
//!
//! ```text
//! A = r⁻¹[0, c′] ∩ s⁻¹[1 − c′, 1]      (r − s = c′ − 1)
//! B = r⁻¹[c′, 1] ∩ s⁻¹[0, 1 − c′]      (r − s = c′)
//! ```
//!
//! and surjectivity of `r` makes both nonempty.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::maps::{closed_preimage, compose_check, turn, ArcMap, CircleMap, Comparison, Mismatch};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Point};
use crate::pl::same_graph;
use crate::rational::{fmt_q, one, zero, Q};
use crate::sets::ClosedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    R,
    S,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::R => "r",
            Side::S => "s",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DichotomyFailure {
    /// A point in neither `A` nor `B`.
    NotCovered,
    /// A point in both.
    Overlap,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    DisconnectionCertified {
        shift: Q,
        components: usize,
        a_point: Point,
        b_point: Point,
        a_components: usize,
        b_components: usize,
    },
    CompositionMismatch(Mismatch),
    NotSurjective {
        side: Side,
        min: Q,
        max: Q,
    },
    DichotomyViolation {
        failure: DichotomyFailure,
        point: Point,
    },
}

impl Verdict {
    pub fn outcome(&self) -> &'static str {
        match self {
            Verdict::DisconnectionCertified { .. } => "disconnection-certified",
            Verdict::CompositionMismatch(_) => "composition-mismatch",
            Verdict::NotSurjective { .. } => "not-surjective",
            Verdict::DichotomyViolation { .. } => "dichotomy-violation",
        }
    }
}

/// The normalized shift `c′ ∈ (0, 1)` when `f`, `g` have lifts `x + a` and
/// `y + b` with `b − a` not an integer.
pub fn family_shift(f: &CircleMap, g: &CircleMap) -> Result<Q> {
    let offset = |m: &CircleMap, name: &str| -> Result<Q> {
        let pts = m.unit_lift()?;
        let a = &pts[0].1;
        if pts.iter().all(|(t, v)| v - t == *a) {
            Ok(a.clone())
        } else {
            Err(Error::Precondition(format!("{name} is not of the form x ↦ exp(2πi(x + c))")))
        }
    };
    let c = turn(&(offset(g, "g")? - offset(f, "f")?));
    if c.is_zero() {
        return Err(Error::Precondition("shift between f and g is an integer".into()));
    }
    Ok(c)
}

/// The sets `A` and `B` for shift `c′`.
pub fn dichotomy_sets(r: &ArcMap, s: &ArcMap, c: &Q) -> Result<(ClosedSet, ClosedSet)> {
    let d = one() - c;
    let a = closed_preimage(r, &zero(), c)?.intersect(&closed_preimage(s, &d, &one())?)?;
    let b = closed_preimage(r, c, &one())?.intersect(&closed_preimage(s, &zero(), &d)?)?;
    Ok((a, b))
}

/// Run the four stages: surjectivity, composition, dichotomy, disconnection.
pub fn hoehn_check(w: &Arc<MetricGraph>, r: &ArcMap, s: &ArcMap, f: &CircleMap, g: &CircleMap) -> Result<Verdict> {
    let c = family_shift(f, g)?;
    if !same_graph(w, r.graph()) || !same_graph(w, s.graph()) {
        return Err(Error::GraphMismatch);
    }
    for (side, m) in [(Side::R, r), (Side::S, s)] {
        if !m.is_surjective() {
            let (min, max) = m.range();
            return Ok(Verdict::NotSurjective { side, min, max });
        }
    }
    if let Comparison::Mismatch(m) = compose_check(f, r, g, s)? {
        return Ok(Verdict::CompositionMismatch(m));
    }
    let (a, b) = dichotomy_sets(r, s, &c)?;
    if let Err(point) = a.union(&b)?.is_whole() {
        return Ok(Verdict::DichotomyViolation { failure: DichotomyFailure::NotCovered, point });
    }
    if let Some(point) = a.intersect(&b)?.some_point() {
        return Ok(Verdict::DichotomyViolation { failure: DichotomyFailure::Overlap, point });
    }
    let (Some(a_point), Some(b_point)) = (a.some_point(), b.some_point()) else {
        return Err(Error::Verification("surjective r left A or B empty".into()));
    };
    let components = w.components().count;
    if components < 2 {
        return Err(Error::Verification("connected W reached the disconnection stage".into()));
    }
    Ok(Verdict::DisconnectionCertified {
        shift: c,
        components,
        a_point,
        b_point,
        a_components: a.component_count(),
        b_components: b.component_count(),
    })
}

/// Re-check the evidence carried by a verdict by direct evaluation.
pub fn check_verdict(
    verdict: &Verdict,
    w: &Arc<MetricGraph>,
    r: &ArcMap,
    s: &ArcMap,
    f: &CircleMap,
    g: &CircleMap,
) -> Result<bool> {
    let c = family_shift(f, g)?;
    let at = |p: &Point| -> Result<(Q, Q)> { Ok((r.values().eval(p)?, s.values().eval(p)?)) };
    let in_a = |x: &Q, y: &Q| !x.is_negative() && x <= &c && y >= &(one() - &c) && y <= &one();
    let in_b = |x: &Q, y: &Q| x >= &c && x <= &one() && !y.is_negative() && y <= &(one() - &c);
    Ok(match verdict {
        Verdict::NotSurjective { side, min, max } => {
            let m = if *side == Side::R { r } else { s };
            m.range() == (min.clone(), max.clone()) && !(min.is_zero() && *max == one())
        }
        Verdict::CompositionMismatch(m) => {
            let (x, y) = at(&m.point)?;
            let fl = turn(&super::maps::lift_of_unit(f, &x)?);
            let gl = turn(&super::maps::lift_of_unit(g, &y)?);
            fl == m.left && gl == m.right && fl != gl
        }
        Verdict::DichotomyViolation { failure, point } => {
            let (x, y) = at(point)?;
            match failure {
                DichotomyFailure::NotCovered => !in_a(&x, &y) && !in_b(&x, &y),
                DichotomyFailure::Overlap => in_a(&x, &y) && in_b(&x, &y),
            }
        }
        Verdict::DisconnectionCertified { shift, components, a_point, b_point, .. } => {
            let (xa, ya) = at(a_point)?;
            let (xb, yb) = at(b_point)?;
            *shift == c
                && in_a(&xa, &ya)
                && in_b(&xb, &yb)
                && *components == w.components().count
                && *components >= 2
                && compose_check(f, r, g, s)? == Comparison::Equal
        }
    })
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::DisconnectionCertified { shift, components, .. } => {
                write!(f, "disconnection-certified (shift {}, {components} components)", fmt_q(shift))
            }
            Verdict::CompositionMismatch(m) => write!(
                f,
                "composition-mismatch at {} (angles {} vs {})",
                m.point,
                fmt_q(&m.left),
                fmt_q(&m.right)
            ),
            Verdict::NotSurjective { side, min, max } => {
                write!(f, "not-surjective ({} has range [{}, {}])", side.name(), fmt_q(min), fmt_q(max))
            }
            Verdict::DichotomyViolation { failure, point } => write!(f, "dichotomy-violation ({failure:?} at {point})"),
        }
    }
}
