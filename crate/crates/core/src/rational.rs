//! Exact rational helpers.
//!
//! Grid parameters (biases, tolerances, distribution tables) arrive as
//! decimal literals. They are converted through their shortest decimal
//! rendering so that `0.3` becomes `3/10` rather than the binary expansion
//! of the nearest double.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Converts a finite `f64` to the rational denoted by its shortest decimal form.
pub fn from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InputDomain(format!("non-finite value {x}")));
    }
    parse_decimal(&format!("{x}"))
}

/// Parses a plain decimal literal such as `-0.125` or `3`.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::InputDomain(format!("not a decimal literal: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_conversion_is_exact() {
        assert_eq!(from_f64(0.3).unwrap(), ratio(3, 10));
        assert_eq!(from_f64(0.05).unwrap(), ratio(1, 20));
        assert_eq!(from_f64(-1.25).unwrap(), ratio(-5, 4));
        assert_eq!(from_f64(1.0).unwrap(), int(1));
        assert_eq!(from_f64(0.0).unwrap(), int(0));
        assert_eq!(from_f64(1e-20).unwrap(), Rational::new(1.into(), num_traits::pow(BigInt::from(10), 20)));
    }

    #[test]
    fn rejects_non_finite_and_garbage() {
        assert!(from_f64(f64::NAN).is_err());
        assert!(from_f64(f64::INFINITY).is_err());
        assert!(parse_decimal("1e5").is_err());
        assert!(parse_decimal(".").is_err());
        assert!(parse_decimal("").is_err());
        assert_eq!(parse_decimal(".5").unwrap(), ratio(1, 2));
    }
}
