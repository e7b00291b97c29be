use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, Ring};
use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

/// Shorthand for a small rational `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, always with an explicit denominator (`7/1`, `-3/20`, `0/1`).
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rational) -> Self {
        self * r
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

impl Field for Rational {
    fn inverse(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(rational_to_string(&rat(-3, 20)), "-3/20");
        assert_eq!(rational_to_string(&rat(14, 2)), "7/1");
        assert_eq!(rational_to_string(&rat(0, 5)), "0/1");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse_rational("-3/20").unwrap(), rat(-3, 20));
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("42").unwrap(), rat(42, 1));
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn canonical_form() {
        let r = rat(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
