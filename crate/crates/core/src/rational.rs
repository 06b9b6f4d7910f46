//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Default certification width, 10^-9.
pub fn default_width() -> Q {
    Q::new(BigInt::one(), BigInt::from(10u64).pow(9))
}

/// Parse `"p/q"` or `"p"`. Floats are rejected.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse {
        position: 0,
        message: format!("not a rational literal: {s:?}"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Always `"p/q"`, including integers (`"1/1"`).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // huge operands: go through the quotient of truncated decimal strings
        let n: f64 = x.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = x.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    })
}

/// Closest rational with denominator `den` below or at `x`.
pub fn floor_to(x: &Q, den: i64) -> Q {
    let d = BigInt::from(den);
    let scaled = (x * Q::from_integer(d.clone())).floor();
    Q::new(scaled.to_integer(), d)
}

pub fn midpoint(a: &Q, b: &Q) -> Q {
    (a + b) / qi(2)
}

pub fn qmax(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn qmin(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn qabs(a: &Q) -> Q {
    a.abs()
}

/// Floor of log2 of a positive rational; used to size dyadic refinements.
pub fn log2_floor(x: &Q) -> i64 {
    assert!(x.is_positive());
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    let mut e = n - d;
    let two = qi(2);
    let pow = |e: i64| -> Q {
        if e >= 0 {
            num_traits::pow(two.clone(), e as usize)
        } else {
            one() / num_traits::pow(two.clone(), (-e) as usize)
        }
    };
    while pow(e) > *x {
        e -= 1;
    }
    while pow(e + 1) <= *x {
        e += 1;
    }
    e
}

pub fn pow2(e: u32) -> Q {
    Q::from_integer(BigInt::one() << e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q(" -4 ").unwrap(), qi(-4));
        assert_eq!(fmt_q(&qi(1)), "1/1");
        assert_eq!(fmt_q(&q(-2, 4)), "-1/2");
        assert!(parse_q("0.5").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn log2_floor_brackets() {
        for (x, e) in [(q(1, 1), 0), (q(3, 1), 1), (q(1, 3), -2), (q(1, 4), -2), (q(1, 1000), -10)] {
            assert_eq!(log2_floor(&x), e, "{x}");
        }
    }
}
