//! Exact rational helpers.
//!
//! Everything geometric or numeric in this crate is a [`Rational`]. Floats only
//! show up when talking to the oracle or writing logs.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` with small integers.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-2.375"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::invalid("empty rational"));
    }
    if t.contains('/') {
        let r = Rational::from_str(t).map_err(|_| Error::invalid(format!("bad rational `{s}`")))?;
        return Ok(r);
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (ip, fp) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if (ip.is_empty() && fp.is_empty())
        || !ip.bytes().all(|b| b.is_ascii_digit())
        || !fp.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::invalid(format!("bad rational `{s}`")));
    }
    let digits = format!("{ip}{fp}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|_| Error::invalid(format!("bad rational `{s}`")))?;
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Canonical `"p/q"` (or `"p"` when integral).
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators: fall back on a scaled division
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Greatest rational `g` such that each input is an integer multiple of `g`.
pub fn rational_gcd<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let items: Vec<&Rational> = it.into_iter().collect();
    let d = common_denominator(items.iter().copied());
    let mut g = BigInt::zero();
    for r in items {
        let n = r.numer() * (&d / r.denom());
        g = g.gcd(&n);
    }
    if g.is_zero() {
        Rational::zero()
    } else {
        Rational::new(g, d)
    }
}

/// Exact square-root comparison helper: sign of `a - sqrt(b)` for `b >= 0`.
pub fn cmp_sqrt(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    assert!(!b.is_negative());
    if a.is_negative() {
        return Less;
    }
    (a * a).cmp(b)
}
