//! The compositum K(√D) for K = Q[x]/(g): coefficients of eigenvectors
//! live in K while the ambient spaces are defined over Q(√D). Ratios of
//! critical values are formed here and are then checked to be free of √D.

use std::rc::Rc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::extfield::ExtElt;
use crate::exact::poly::Poly;
use crate::exact::quad::QuadElt;
use crate::exact::rat::Rat;

/// a + b·√D with a, b ∈ K.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadExt {
    pub a: ExtElt,
    pub b: ExtElt,
    pub d: i64,
}

impl QuadExt {
    pub fn zero(modulus: &Rc<Poly>, d: i64) -> Self {
        QuadExt {
            a: ExtElt::from_rat(modulus, Rat::zero()),
            b: ExtElt::from_rat(modulus, Rat::zero()),
            d,
        }
    }

    pub fn from_ext(e: &ExtElt, d: i64) -> Self {
        QuadExt { a: e.clone(), b: ExtElt::from_rat(&e.modulus, Rat::zero()), d }
    }

    pub fn from_quad(modulus: &Rc<Poly>, q: &QuadElt) -> Self {
        let (p, s) = q.sqrt_basis();
        QuadExt {
            a: ExtElt::from_rat(modulus, p),
            b: ExtElt::from_rat(modulus, s),
            d: q.field.d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadExt { a: self.a.add(&o.a), b: self.b.add(&o.b), d: self.d }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadExt { a: self.a.sub(&o.a), b: self.b.sub(&o.b), d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = ExtElt::from_rat(&self.a.modulus, Rat::from_integer(self.d.into()));
        QuadExt {
            a: self.a.mul(&o.a).add(&d.mul(&self.b.mul(&o.b))),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
            d: self.d,
        }
    }

    pub fn mul_ext(&self, c: &ExtElt) -> Self {
        QuadExt { a: self.a.mul(c), b: self.b.mul(c), d: self.d }
    }

    pub fn inv(&self) -> Result<Self> {
        // (a + b√D)^{-1} = (a − b√D)/(a² − D b²)
        let d = ExtElt::from_rat(&self.a.modulus, Rat::from_integer(self.d.into()));
        let n = self.a.mul(&self.a).sub(&d.mul(&self.b.mul(&self.b)));
        let ni = n.inv()?;
        Ok(QuadExt { a: self.a.mul(&ni), b: self.b.neg().mul(&ni), d: self.d })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// The K-part, failing when a √D component survives.
    pub fn expect_rational_part(&self) -> Result<ExtElt> {
        if self.b.is_zero() {
            Ok(self.a.clone())
        } else {
            Err(Error::AssertionFailed("value has a residual √D component".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quad::quad_field;
    use crate::exact::rat::rat_int;

    #[test]
    fn compositum_arithmetic() {
        let g = Rc::new(Poly::from_ints(&[-3, 0, 1])); // K = Q(√3)
        let f = quad_field(5).unwrap();
        let eps = QuadElt::eps(&f);
        let x = QuadExt::from_quad(&g, &eps);
        let y = x.mul(&x);
        // ε² = ε + 1 = (3 + √5)/2
        let expect = QuadExt::from_quad(&g, &eps.mul(&eps));
        assert_eq!(y, expect);
        let inv = x.inv().unwrap();
        let one = x.mul(&inv);
        assert!(one.b.is_zero());
        assert_eq!(one.a.coords()[0], rat_int(1));
    }
}
