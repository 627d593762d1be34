//! Exact rational helpers. All distances in the crate are `Rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or a bare integer.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lowest-terms `p/q`, integers bare.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest power of two (as `1/2^k`, `k >= 0`) not exceeding `x`; `None` when `x <= 0`.
pub(crate) fn pow2_floor(x: &Rational, max_halvings: usize) -> Option<Rational> {
    if !x.is_positive() {
        return None;
    }
    let mut s = Rational::one();
    for _ in 0..=max_halvings {
        if &s <= x {
            return Some(s);
        }
        s /= int(2);
    }
    None
}

pub(crate) fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}
