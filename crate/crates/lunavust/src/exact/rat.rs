use num::bigint::BigInt;
use num::{One, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number. Always stored reduced with a
/// positive denominator.
pub type Rat = num::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d` is zero.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` with optional leading sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("invalid fraction {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(numer, denom))
}

/// Canonical textual form: `"p"` when the denominator is one, `"p/q"`
/// otherwise. Inverse of [`parse_rat`] on its own output.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True iff `r` is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// True iff `r` is an even integer.
pub fn is_even_integer(r: &Rat) -> bool {
    is_integer(r) && (r.numer() % BigInt::from(2)).is_zero()
}
