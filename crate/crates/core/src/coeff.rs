//! Exact rational scalars.
//!
//! Every structure constant in this crate is a rational number stored in
//! lowest terms with a positive denominator. `num_rational::BigRational`
//! already maintains that invariant; this module adds the textual
//! `num/den` form used by the table emitters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in lowest terms; zero is `0/1`.
pub type Coefficient = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoefficientParseError {
    #[error("empty coefficient")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

pub fn from_int<T: Into<BigInt>>(n: T) -> Coefficient {
    BigRational::from_integer(n.into())
}

pub fn ratio<A: Into<BigInt>, B: Into<BigInt>>(num: A, den: B) -> Coefficient {
    BigRational::new(num.into(), den.into())
}

/// Renders as `num/den`, always with an explicit denominator.
pub fn format_coefficient(c: &Coefficient) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Accepts `n` or `n/d` with optional sign on the numerator; the result is
/// reduced, so `4/6` parses to the same value as `2/3`.
pub fn parse_coefficient(s: &str) -> Result<Coefficient, CoefficientParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CoefficientParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = parse_int(num)?;
    let den = parse_int(den)?;
    if den.is_zero() {
        return Err(CoefficientParseError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

fn parse_int(s: &str) -> Result<BigInt, CoefficientParseError> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CoefficientParseError::BadInteger(s.to_string()));
    }
    s.parse::<BigInt>()
        .map_err(|_| CoefficientParseError::BadInteger(s.to_string()))
}

pub fn is_nonnegative_integer(c: &Coefficient) -> bool {
    c.denom().is_one() && !c.numer().sign().eq(&num_bigint::Sign::Minus)
}
