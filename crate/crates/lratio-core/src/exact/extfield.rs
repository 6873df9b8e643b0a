//! The quotient ring Q[x]/(g) for a monic g, used as the coefficient
//! field of Hecke eigenvectors.
//!
//! Inversion runs the extended Euclidean algorithm against g; when g is
//! reducible and a zero divisor is hit, the offending factor is reported
//! so the caller can refine the factorization.

use std::rc::Rc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::mat::{kernel, Mat, Ring};
use crate::exact::poly::Poly;
use crate::exact::rat::{Rat, RatField};

/// Element of Q[x]/(g): representative of degree < deg g.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtElt {
    pub rep: Poly,
    pub modulus: Rc<Poly>,
}

impl ExtElt {
    pub fn new(modulus: &Rc<Poly>, p: Poly) -> Self {
        let (_, rem) = p.divmod(modulus);
        ExtElt { rep: rem, modulus: modulus.clone() }
    }

    pub fn from_rat(modulus: &Rc<Poly>, c: Rat) -> Self {
        Self::new(modulus, Poly::constant(c))
    }

    pub fn gen(modulus: &Rc<Poly>) -> Self {
        Self::new(modulus, Poly::x())
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Coordinate vector of length deg g.
    pub fn coords(&self) -> Vec<Rat> {
        let d = self.modulus.deg();
        (0..d)
            .map(|i| self.rep.coeffs.get(i).cloned().unwrap_or_else(Rat::zero))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.modulus, self.rep.add(&o.rep))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.modulus, self.rep.sub(&o.rep))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.modulus, self.rep.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.modulus, self.rep.mul(&o.rep))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::SingularMatrix);
        }
        // extended euclid: s·rep + t·g = gcd
        let mut r0 = self.modulus.as_ref().clone();
        let mut r1 = self.rep.clone();
        let mut s0 = Poly::zero();
        let mut s1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return Err(Error::ZeroDivisorPivot { factor: format!("{:?}", r0.monic().coeffs) });
        }
        let c = r0.coeffs[0].clone().recip();
        Ok(Self::new(&self.modulus, s0.scale(&c)))
    }
}

/// Ring context for Q[x]/(g).
#[derive(Clone)]
pub struct QuotRing(pub Rc<Poly>);

impl Ring for QuotRing {
    type E = ExtElt;

    fn zero(&self) -> ExtElt {
        ExtElt::from_rat(&self.0, Rat::zero())
    }
    fn one(&self) -> ExtElt {
        ExtElt::from_rat(&self.0, Rat::one())
    }
    fn add(&self, a: &ExtElt, b: &ExtElt) -> ExtElt {
        a.add(b)
    }
    fn sub(&self, a: &ExtElt, b: &ExtElt) -> ExtElt {
        a.sub(b)
    }
    fn neg(&self, a: &ExtElt) -> ExtElt {
        a.neg()
    }
    fn mul(&self, a: &ExtElt, b: &ExtElt) -> ExtElt {
        a.mul(b)
    }
    fn is_zero(&self, a: &ExtElt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &ExtElt) -> Result<ExtElt> {
        a.inv()
    }
}

/// Monic minimal polynomial of e over Q; its degree divides deg g.
pub fn minpoly(e: &ExtElt) -> Result<Poly> {
    let d = e.modulus.deg();
    let ring = RatField;
    // powers e^0, ..., e^k until linearly dependent
    let mut powers: Vec<Vec<Rat>> = vec![ExtElt::from_rat(&e.modulus, Rat::one()).coords()];
    let mut cur = ExtElt::from_rat(&e.modulus, Rat::one());
    for k in 1..=d {
        cur = cur.mul(e);
        powers.push(cur.coords());
        // dependency among e^0..e^k?
        let m = Mat::from_fn(d, k + 1, |i, j| powers[j][i].clone());
        let ker = kernel(&ring, &m)?;
        if ker.dim() > 0 {
            // the dependency with nonzero top coefficient of least degree
            for v in &ker.basis {
                if !v[k].is_zero() {
                    let lead = v[k].clone().recip();
                    let coeffs: Vec<Rat> = v.iter().map(|c| c * &lead).collect();
                    return Ok(Poly::new(coeffs));
                }
            }
        }
    }
    Err(Error::AssertionFailed("no minimal polynomial found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat_int;

    #[test]
    fn minpoly_examples() {
        let g = Rc::new(Poly::from_ints(&[-2, 0, 1])); // x² − 2
        // rational constant c → x − c
        let c = ExtElt::from_rat(&g, rat_int(7));
        assert_eq!(minpoly(&c).unwrap(), Poly::from_ints(&[-7, 1]));
        // x itself → g
        let x = ExtElt::gen(&g);
        assert_eq!(minpoly(&x).unwrap(), Poly::from_ints(&[-2, 0, 1]));
        // (1+x)² = 3 + 2√2 has minimal polynomial x² − 6x + 1,
        // verified by brute expansion: (3+2√2)(3−2√2) = 1, sum = 6.
        let e = ExtElt::new(&g, Poly::from_ints(&[1, 1]));
        let sq = e.mul(&e);
        assert_eq!(minpoly(&sq).unwrap(), Poly::from_ints(&[1, -6, 1]));
    }

    #[test]
    fn zero_divisor_detected() {
        let g = Rc::new(Poly::from_ints(&[-1, 0, 1])); // x² − 1, reducible
        let e = ExtElt::new(&g, Poly::from_ints(&[-1, 1])); // x − 1
        assert!(matches!(e.inv(), Err(Error::ZeroDivisorPivot { .. })));
    }

    #[test]
    fn field_inverse() {
        let g = Rc::new(Poly::from_ints(&[-2, 0, 1]));
        let e = ExtElt::new(&g, Poly::from_ints(&[3, 5])); // 3 + 5√2
        let i = e.inv().unwrap();
        let one = e.mul(&i);
        assert_eq!(one.coords(), vec![rat_int(1), rat_int(0)]);
    }
}
