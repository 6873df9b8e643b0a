//! Arbitrary-precision rationals.
//!
//! `Rat` is backed by `num_rational::BigRational`, which keeps every value
//! reduced to lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::mat::Ring;

pub type Rat = num_rational::BigRational;

/// Rational from a numerator/denominator pair of machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The field Q as a ring context for generic linear algebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RatField;

impl Ring for RatField {
    type E = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            Err(Error::SingularMatrix)
        } else {
            Ok(a.recip())
        }
    }
}

/// Floor of a rational as a big integer.
pub fn rat_floor(a: &Rat) -> BigInt {
    a.floor().to_integer()
}

/// Nearest integer (ties toward +infinity).
pub fn rat_round(a: &Rat) -> BigInt {
    (a + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// |a| as a rational.
pub fn rat_abs(a: &Rat) -> Rat {
    a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_positive_denominator() {
        let x = rat(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }

    #[test]
    fn rounding() {
        assert_eq!(rat_round(&rat(5, 2)), BigInt::from(3));
        assert_eq!(rat_round(&rat(-5, 2)), BigInt::from(-2));
        assert_eq!(rat_floor(&rat(-1, 2)), BigInt::from(-1));
    }
}
