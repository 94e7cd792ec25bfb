//! Exact rational scalars.
//!
//! Every discrete identity in this crate is checked with zero tolerance, so
//! the scalar type has to be closed under +, -, *, / with no rounding.
//! [`Scalar`] wraps `num::BigRational` (arbitrary-precision numerator and
//! denominator, always stored as a reduced fraction with positive
//! denominator), adding integer powers with the `0^0 = 1` convention and a
//! `p/q` string form used throughout the CLI.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::from_integer(BigInt::from(0)))
    }

    pub fn one() -> Self {
        Scalar(BigRational::from_integer(BigInt::from(1)))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// Reduced fraction `numer/denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        Scalar(BigRational::new(numer, denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        num::Zero::is_zero(&self.0)
    }

    pub fn is_one(&self) -> bool {
        num::One::is_one(&self.0)
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// Exact integer power. `0^0 = 1`; a negative power of zero is an error.
    pub fn pow(&self, exponent: i64) -> Result<Self> {
        if exponent == 0 {
            return Ok(Scalar::one());
        }
        if self.is_zero() {
            if exponent < 0 {
                return Err(Error::ZeroToNegativePower(exponent));
            }
            return Ok(Scalar::zero());
        }
        let base = if exponent < 0 { self.0.recip() } else { self.0.clone() };
        let mut result = BigRational::from_integer(BigInt::from(1));
        let mut square = base;
        let mut k = exponent.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result *= &square;
            }
            square = &square * &square;
            k >>= 1;
        }
        Ok(Scalar(result))
    }

    /// Nearest-double approximation; used only for reporting and the
    /// floating-point operator paths.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `p`, `-p`, or `p/q` (arbitrary precision).
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        match trimmed.parse::<BigRational>() {
            Ok(r) => Ok(Scalar(r)),
            Err(_) => Err(Error::OrderOutOfRange(format!("unparsable rational `{trimmed}`"))),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl num_traits::Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl num_traits::One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let x = Scalar::new(4, -6);
        assert_eq!(x, Scalar::new(-2, 3));
        assert_eq!(x.to_string(), "-2/3");
        assert_eq!(Scalar::new(10, 5).to_string(), "2");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3/4", "-7/2", "5", "-12", "1000000000000000000000/7"] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn pow_conventions() {
        assert_eq!(Scalar::zero().pow(0).unwrap(), Scalar::one());
        assert_eq!(Scalar::zero().pow(3).unwrap(), Scalar::zero());
        assert!(Scalar::zero().pow(-1).is_err());
        assert_eq!(Scalar::new(1, 2).pow(-1).unwrap(), Scalar::from_int(2));
        assert_eq!(Scalar::new(-1, 2).pow(2).unwrap(), Scalar::new(1, 4));
        assert_eq!(Scalar::new(2, 3).pow(3).unwrap(), Scalar::new(8, 27));
    }

    #[test]
    fn to_f64_small() {
        assert_eq!(Scalar::new(1, 2).to_f64(), 0.5);
        assert_eq!(Scalar::from_int(-3).to_f64(), -3.0);
    }

    proptest! {
        // Addition recomputed by brute-force integer arithmetic: p/q + r/s
        // equals (p*s + r*q) / (q*s) after reduction.
        #[test]
        fn addition_matches_integer_arithmetic(
            p in -1000i64..=1000, q in 1i64..=1000,
            r in -1000i64..=1000, s in 1i64..=1000,
        ) {
            let lhs = Scalar::new(p, q) + Scalar::new(r, s);
            let brute = Scalar::from_big(
                BigInt::from(p) * BigInt::from(s) + BigInt::from(r) * BigInt::from(q),
                BigInt::from(q) * BigInt::from(s),
            );
            prop_assert_eq!(lhs, brute);
        }

        #[test]
        fn multiplication_matches_integer_arithmetic(
            p in -1000i64..=1000, q in 1i64..=1000,
            r in -1000i64..=1000, s in 1i64..=1000,
        ) {
            let lhs = Scalar::new(p, q) * Scalar::new(r, s);
            let brute = Scalar::from_big(
                BigInt::from(p) * BigInt::from(r),
                BigInt::from(q) * BigInt::from(s),
            );
            prop_assert_eq!(lhs, brute);
        }

        #[test]
        fn division_is_inverse_of_multiplication(
            p in -1000i64..=1000, q in 1i64..=1000,
            r in 1i64..=1000, s in 1i64..=1000,
        ) {
            let x = Scalar::new(p, q);
            let y = Scalar::new(r, s);
            prop_assert_eq!((&x / &y) * &y, x);
        }

        #[test]
        fn pow_addition_law(p in -20i64..=20, q in 1i64..=20, k in -6i64..=6, m in -6i64..=6) {
            prop_assume!(p != 0);
            let x = Scalar::new(p, q);
            let lhs = x.pow(k).unwrap() * x.pow(m).unwrap();
            prop_assert_eq!(lhs, x.pow(k + m).unwrap());
        }
    }
}
