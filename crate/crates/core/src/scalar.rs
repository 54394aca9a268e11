//! Rational scalars and a few exact integer helpers.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Scalar = BigRational;

pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Scalar {
    BigRational::from_integer(n.clone())
}

/// Parses `p/q` or `p`. Decimal and exponent forms are rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::param("empty rational"));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::param(format!("`{t}` is not a rational of the form p/q")));
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::param(format!("bad numerator in `{t}`")))?;
    let d: BigInt = d.parse().map_err(|_| Error::param(format!("bad denominator in `{t}`")))?;
    if d.is_zero() {
        return Err(Error::param(format!("zero denominator in `{t}`")));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

pub fn sq(s: &Scalar) -> Scalar {
    s * s
}

pub fn floor_int(s: &Scalar) -> BigInt {
    s.numer().div_floor(s.denom())
}

pub fn ceil_int(s: &Scalar) -> BigInt {
    let (q, r) = s.numer().div_mod_floor(s.denom());
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

pub fn floor_i64(s: &Scalar) -> i64 {
    floor_int(s).to_i64().expect("floor fits in i64")
}

pub fn ceil_i64(s: &Scalar) -> i64 {
    ceil_int(s).to_i64().expect("ceil fits in i64")
}

/// Returns `n` when `delta == 1/n` for a positive integer `n`.
pub fn inverse_integer(delta: &Scalar) -> Result<u64> {
    if !delta.is_positive() || !delta.numer().is_one() {
        return Err(Error::param(format!(
            "delta must be 1/n for a positive integer n, got {}",
            format_scalar(delta)
        )));
    }
    delta
        .denom()
        .to_u64()
        .ok_or_else(|| Error::param("delta denominator too large"))
}

pub fn as_u64(s: &Scalar, what: &str) -> Result<u64> {
    if !s.denom().is_one() || s.is_negative() {
        return Err(Error::param(format!("{what} must be a non-negative integer, got {}", format_scalar(s))));
    }
    s.numer().to_u64().ok_or_else(|| Error::param(format!("{what} too large")))
}

fn split_exponent(e: &Scalar) -> Result<(u32, u32)> {
    if e.is_negative() {
        return Err(Error::param("negative exponent"));
    }
    let p = e.numer().to_u32().ok_or_else(|| Error::param("exponent numerator too large"))?;
    let q = e.denom().to_u32().ok_or_else(|| Error::param("exponent denominator too large"))?;
    Ok((p, q))
}

/// Exact `floor(base^e)` for a rational exponent `e >= 0`.
pub fn pow_floor(base: u64, e: &Scalar) -> Result<BigInt> {
    let (p, q) = split_exponent(e)?;
    let b = num_traits::pow(BigInt::from(base), p as usize);
    Ok(b.nth_root(q))
}

/// Exact `ceil(base^e)` for a rational exponent `e >= 0`.
pub fn pow_ceil(base: u64, e: &Scalar) -> Result<BigInt> {
    let (p, q) = split_exponent(e)?;
    let b = num_traits::pow(BigInt::from(base), p as usize);
    let m = b.nth_root(q);
    if num_traits::pow(m.clone(), q as usize) == b {
        Ok(m)
    } else {
        Ok(m + 1)
    }
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn min_scalar<'a>(a: &'a Scalar, b: &'a Scalar) -> &'a Scalar {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_scalar<'a>(a: &'a Scalar, b: &'a Scalar) -> &'a Scalar {
    if a >= b {
        a
    } else {
        b
    }
}
