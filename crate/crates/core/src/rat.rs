//! Exact rational scalars and parsing helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub fn is_pos(x: &Q) -> bool {
    x.is_positive()
}

pub fn is_neg(x: &Q) -> bool {
    x.is_negative()
}

/// Parses "p/q" or "p" with optional sign; denominators must be nonzero.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Input(format!("bad rational numerator: {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Input(format!("bad rational denominator: {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Input(format!("zero denominator: {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Renders a rational as "p/q" (or "p" when integral).
pub fn show_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
