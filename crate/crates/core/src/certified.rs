//! Rational enclosures `[lower, upper]` of real values.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, log2_floor, qmax, qmin, to_f64, zero, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedValue {
    lower: Q,
    upper: Q,
}

impl CertifiedValue {
    pub fn exact(x: Q) -> Self {
        Self { lower: x.clone(), upper: x }
    }

    pub fn new(lower: Q, upper: Q) -> Self {
        assert!(lower <= upper, "empty enclosure [{lower}, {upper}]");
        Self { lower, upper }
    }

    pub fn lower(&self) -> &Q {
        &self.lower
    }

    pub fn upper(&self) -> &Q {
        &self.upper
    }

    pub fn width(&self) -> Q {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn exact_value(&self) -> Option<&Q> {
        self.is_exact().then_some(&self.lower)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lower) + to_f64(&self.upper)) / 2.0
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lower + &o.lower, &self.upper + &o.upper)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lower - &o.upper, &self.upper - &o.lower)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.upper, -&self.lower)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_negative() {
            Self::new(&self.upper * c, &self.lower * c)
        } else {
            Self::new(&self.lower * c, &self.upper * c)
        }
    }

    pub fn max(&self, o: &Self) -> Self {
        Self::new(qmax(&self.lower, &o.lower), qmax(&self.upper, &o.upper))
    }

    pub fn min(&self, o: &Self) -> Self {
        Self::new(qmin(&self.lower, &o.lower), qmin(&self.upper, &o.upper))
    }

    /// Truncated subtraction `max(self - o, 0)`.
    pub fn dotminus(&self, o: &Self) -> Self {
        Self::new(qmax(&(&self.lower - &o.upper), &zero()), qmax(&(&self.upper - &o.lower), &zero()))
    }

    /// Outward-rounded square root with each endpoint within `width`.
    /// Values below zero by more than `width` are an error.
    pub fn sqrt(&self, width: &Q) -> Result<Self> {
        if self.upper.is_negative() || self.lower < -width {
            return Err(Error::NegativeSqrt(self.to_string()));
        }
        let lo = qmax(&self.lower, &zero());
        Ok(Self::new(sqrt_bound(&lo, width, false), sqrt_bound(&self.upper, width, true)))
    }
}

fn exact_sqrt(x: &Q) -> Option<Q> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// Dyadic bound on `sqrt(x)` from below (`upper = false`) or above.
fn sqrt_bound(x: &Q, width: &Q, upper: bool) -> Q {
    if let Some(s) = exact_sqrt(x) {
        return s;
    }
    let k = (-log2_floor(width)).max(0) as u32 + 1;
    let scale = BigInt::from(1u8) << (2 * k);
    let n = (x * Q::from_integer(scale)).floor().to_integer();
    let s = n.sqrt();
    let den = BigInt::from(1u8) << k;
    if upper {
        Q::new(s + 1, den)
    } else {
        Q::new(s, den)
    }
}

impl fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", fmt_q(&self.lower))
        } else {
            write!(f, "[{}, {}]", fmt_q(&self.lower), fmt_q(&self.upper))
        }
    }
}
