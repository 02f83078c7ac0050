//! Helpers for exact rationals: parsing `p/q` text and serializing as strings.

use std::str::FromStr;

use num::{BigInt, BigRational, One, Zero};
use serde::Serializer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p"`, `"p/q"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Invalid(t.to_string());
    match t.split_once('/') {
        None => BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(t.to_string()));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Parses a comma separated list of rationals, e.g. `1,-5/4,1`.
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, ParseRationalError> {
    text.split(',').map(parse_rational).collect()
}

/// Canonical text form: `p` for integers, `p/q` otherwise (lowest terms, q > 0).
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

pub(crate) fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

pub(crate) fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}
