//! Real quadratic fields Q(√D) for D ∈ {5, 13}.
//!
//! Elements are stored as a + b·ω on the integral basis {1, ω} where
//! ω = ε is the fundamental unit: (1+√5)/2 resp. (3+√13)/2. Both fields
//! have N(ε) = −1 and O_F = Z + Zω, and both are norm-Euclidean.

use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::mat::Ring;
use crate::exact::rat::{rat_int, rat_round, Rat};

/// Field constants for Q(√D) with ω = ε.
#[derive(Debug)]
pub struct FieldData {
    pub d: i64,
    /// trace of ω (also of ε).
    pub trace_omega: i64,
    /// norm of ω; −1 for both supported fields.
    pub norm_omega: i64,
    /// ε² = rel_a + rel_b·ω.
    pub rel_a: i64,
    pub rel_b: i64,
    /// ε²ω = rel_c + rel_d·ω.
    pub rel_c: i64,
    pub rel_d: i64,
    /// −ε^{−1} = inv_a + inv_b·ω.
    pub inv_a: i64,
    pub inv_b: i64,
}

pub type FieldRef = Rc<FieldData>;

/// Constructs the field data for D ∈ {5, 13}.
pub fn quad_field(d: i64) -> Result<FieldRef> {
    // ω = ε = (s + √D)/2 where s is the trace; ω² = sω − N(ω).
    let (s,) = match d {
        5 => (1,),
        13 => (3,),
        _ => return Err(Error::UnsupportedField(d)),
    };
    let n = (s * s - d) / 4;
    debug_assert_eq!(n, -1);
    // ε² = ε·ε: with ω² = sω − n: ε² = −n + sω.
    let (rel_a, rel_b) = (-n, s);
    // ε²ω = −nω + sω² = sω·s − sn − nω = −sn + (s² − n)ω.
    let (rel_c, rel_d) = (-s * n, s * s - n);
    // ε·ε' = n = −1 so ε^{−1} = −ε' = −(s − ω) = ω − s; −ε^{−1} = s − ω.
    let (inv_a, inv_b) = (s, -1);
    Ok(Rc::new(FieldData {
        d,
        trace_omega: s,
        norm_omega: n,
        rel_a,
        rel_b,
        rel_c,
        rel_d,
        inv_a,
        inv_b,
    }))
}

/// An element a + b·ω of Q(√D).
#[derive(Clone)]
pub struct QuadElt {
    pub a: Rat,
    pub b: Rat,
    pub field: FieldRef,
}

impl fmt::Debug for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}w)", self.a, self.b)
    }
}

impl fmt::Display for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}w", self.b)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

impl PartialEq for QuadElt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.field.d == other.field.d
    }
}
impl Eq for QuadElt {}

impl std::hash::Hash for QuadElt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl QuadElt {
    pub fn new(field: &FieldRef, a: Rat, b: Rat) -> Self {
        QuadElt { a, b, field: field.clone() }
    }

    pub fn from_ints(field: &FieldRef, a: i64, b: i64) -> Self {
        Self::new(field, rat_int(a), rat_int(b))
    }

    pub fn zero(field: &FieldRef) -> Self {
        Self::from_ints(field, 0, 0)
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_ints(field, 1, 0)
    }

    pub fn omega(field: &FieldRef) -> Self {
        Self::from_ints(field, 0, 1)
    }

    /// The fundamental unit ε (equal to ω for the supported fields).
    pub fn eps(field: &FieldRef) -> Self {
        Self::omega(field)
    }

    pub fn from_rat(field: &FieldRef, a: Rat) -> Self {
        Self::new(field, a, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True when both coordinates are rational integers, i.e. the element
    /// lies in O_F.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.field, &self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.field, &self.a - &o.a, &self.b - &o.b)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, -&self.a, -&self.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        // ω² = sω − n
        let s = rat_int(self.field.trace_omega);
        let n = rat_int(self.field.norm_omega);
        let bb = &self.b * &o.b;
        let a = &self.a * &o.a - &n * &bb;
        let b = &self.a * &o.b + &self.b * &o.a + &s * &bb;
        Self::new(&self.field, a, b)
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        Self::new(&self.field, &self.a * r, &self.b * r)
    }

    /// Galois conjugate: ω ↦ s − ω.
    pub fn conj(&self) -> Self {
        let s = rat_int(self.field.trace_omega);
        Self::new(&self.field, &self.a + &s * &self.b, -&self.b)
    }

    /// Field norm x·conj(x), a rational.
    pub fn norm(&self) -> Rat {
        let s = rat_int(self.field.trace_omega);
        let n = rat_int(self.field.norm_omega);
        &self.a * &self.a + &s * &self.a * &self.b + &n * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        let s = rat_int(self.field.trace_omega);
        &self.a + &self.a + &s * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.conj().mul_rat(&n.recip()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Coordinates (p, q) with self = p + q·√D.
    pub fn sqrt_basis(&self) -> (Rat, Rat) {
        let s = rat_int(self.field.trace_omega);
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        (&self.a + &s * &self.b * &half, &self.b * &half)
    }

    /// Exact sign of the image under the embedding sending √D to the
    /// positive real root (emb = 1) or the negative one (emb = 2).
    pub fn sign_at(&self, emb: u8) -> Ordering {
        let (p, mut q) = self.sqrt_basis();
        if emb == 2 {
            q = -q;
        }
        let d = rat_int(self.field.d);
        // sign of p + q√D
        match (p.cmp(&Rat::zero()), q.cmp(&Rat::zero())) {
            (Ordering::Equal, qs) => qs,
            (ps, Ordering::Equal) => ps,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => (&p * &p).cmp(&(&q * &q * &d)),
            (Ordering::Less, Ordering::Greater) => (&q * &q * &d).cmp(&(&p * &p)),
        }
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign_at(1) == Ordering::Greater && self.sign_at(2) == Ordering::Greater
    }

    /// Decides b | a in O_F (both must be integral).
    pub fn divides(&self, a: &Self) -> bool {
        if self.is_zero() {
            return a.is_zero();
        }
        a.div(self).map(|q| q.is_integral()).unwrap_or(false)
    }

    /// Writes a unit as ±ε^k. Returns (negative, k) or None when the
    /// element is not a unit of O_F.
    pub fn decompose_unit(&self) -> Option<(bool, i64)> {
        if !self.is_integral() {
            return None;
        }
        let n = self.norm();
        if n.abs() != Rat::one() {
            return None;
        }
        let mut u = self.clone();
        let negative = u.sign_at(1) == Ordering::Less;
        if negative {
            u = u.neg();
        }
        let eps = Self::eps(&self.field);
        let inv_eps = eps.inv().unwrap();
        let mut k: i64 = 0;
        for _ in 0..4096 {
            if u.is_one() {
                return Some((negative, k));
            }
            // u > 1 at the first embedding means a positive power remains.
            if u.sub(&Self::one(&self.field)).sign_at(1) == Ordering::Greater {
                u = u.mul(&inv_eps);
                k += 1;
            } else {
                u = u.mul(&eps);
                k -= 1;
            }
        }
        None
    }

    pub fn is_unit(&self) -> bool {
        self.decompose_unit().is_some()
    }

    /// ε^k for any integer k.
    pub fn eps_pow(field: &FieldRef, k: i64) -> Self {
        let base = if k >= 0 {
            Self::eps(field)
        } else {
            Self::eps(field).inv().unwrap()
        };
        let mut acc = Self::one(field);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Euclidean division y = q·x + r with |N(r)| < |N(x)|.
    ///
    /// Rounds the coordinates of y/x and, if needed, searches a small box
    /// of correction terms; this always succeeds for D = 5, 13.
    pub fn euclid_div(y: &Self, x: &Self) -> Result<(Self, Self)> {
        if x.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let t = y.div(x)?;
        let q0 = Self::new(
            &x.field,
            Rat::from_integer(rat_round(&t.a)),
            Rat::from_integer(rat_round(&t.b)),
        );
        let nx = x.norm().abs();
        for radius in 0..4 {
            for da in -radius..=radius {
                for db in -radius..=radius {
                    let q = q0.add(&Self::from_ints(&x.field, da, db));
                    let r = y.sub(&q.mul(x));
                    if r.norm().abs() < nx {
                        return Ok((q, r));
                    }
                }
            }
        }
        Err(Error::AssertionFailed("euclidean division failed".into()))
    }

    /// gcd in the Euclidean ring O_F, up to units.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = Self::euclid_div(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// Canonical associate: the unique λz, λ ∈ {±ε^k}, whose embedding
    /// magnitudes satisfy |z₂| ∈ [|z₁|, ε²|z₁|) and whose leading
    /// coordinate is positive lexicographically on (a, b).
    pub fn canonical_associate(&self) -> (Self, Self) {
        assert!(!self.is_zero());
        let field = &self.field;
        let eps = Self::eps(field);
        let inv_eps = eps.inv().unwrap();
        let mut z = self.clone();
        let mut lambda = Self::one(field);
        // Window |z₂/z₁| ∈ [1, ε²): multiplying z by ε scales the ratio
        // by ε^{-2} exactly, so the window width equals the step and the
        // normalization is unique. Comparisons are made on squares:
        // |z₂|² = emb1(conj(z²)) and |z₁|² = emb1(z²).
        let eps4 = eps.mul(&eps).mul(&eps).mul(&eps);
        loop {
            let sq = z.mul(&z);
            let diff = sq.conj().sub(&sq);
            if diff.sign_at(1) == Ordering::Less {
                // |z₂| < |z₁|: grow the second embedding.
                z = z.mul(&inv_eps);
                lambda = lambda.mul(&inv_eps);
                continue;
            }
            let upper = eps4.mul(&sq).sub(&sq.conj());
            if upper.sign_at(1) != Ordering::Greater {
                // |z₂| ≥ ε²|z₁|: shrink.
                z = z.mul(&eps);
                lambda = lambda.mul(&eps);
                continue;
            }
            break;
        }
        let positive = z.a > Rat::zero() || (z.a.is_zero() && z.b > Rat::zero());
        if !positive {
            z = z.neg();
            lambda = lambda.neg();
        }
        (z, lambda)
    }

    /// Common denominator of the two coordinates.
    pub fn denom_lcm(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }
}

/// Ring context for generic linear algebra over Q(√D).
#[derive(Clone)]
pub struct QuadField(pub FieldRef);

impl Ring for QuadField {
    type E = QuadElt;

    fn zero(&self) -> QuadElt {
        QuadElt::zero(&self.0)
    }
    fn one(&self) -> QuadElt {
        QuadElt::one(&self.0)
    }
    fn add(&self, a: &QuadElt, b: &QuadElt) -> QuadElt {
        a.add(b)
    }
    fn sub(&self, a: &QuadElt, b: &QuadElt) -> QuadElt {
        a.sub(b)
    }
    fn neg(&self, a: &QuadElt) -> QuadElt {
        a.neg()
    }
    fn mul(&self, a: &QuadElt, b: &QuadElt) -> QuadElt {
        a.mul(b)
    }
    fn is_zero(&self, a: &QuadElt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &QuadElt) -> Result<QuadElt> {
        a.inv()
    }
}

/// Residue representatives of O_F modulo a prime element.
pub fn residues_mod(pi: &QuadElt) -> Result<Vec<QuadElt>> {
    let field = &pi.field;
    let n = pi.norm().abs();
    let n_int = n.to_integer();
    if let Some(p) = small_prime(&n_int) {
        // degree-one prime: residues are 0..p-1
        Ok((0..p).map(|k| QuadElt::from_ints(field, k, 0)).collect())
    } else {
        // inert prime: N = p², residues a + bω with 0 ≤ a, b < p
        let p_int = n_int.sqrt();
        if &p_int * &p_int != n_int || small_prime(&p_int).is_none() {
            return Err(Error::NotPrime);
        }
        let p = i64::try_from(&p_int).map_err(|_| Error::NotPrime)?;
        let mut out = Vec::new();
        for a in 0..p {
            for b in 0..p {
                out.push(QuadElt::from_ints(field, a, b));
            }
        }
        Ok(out)
    }
}

/// Checks that pi generates a prime ideal of O_F.
pub fn is_prime_element(pi: &QuadElt) -> bool {
    if !pi.is_integral() {
        return false;
    }
    let n = pi.norm().abs().to_integer();
    if let Some(_p) = small_prime(&n) {
        return true;
    }
    let p_int = n.sqrt();
    if &p_int * &p_int != n {
        return false;
    }
    let p = match i64::try_from(&p_int) {
        Ok(p) => p,
        Err(_) => return false,
    };
    if small_prime(&p_int).is_none() {
        return false;
    }
    // N = p²: prime iff pi is a unit multiple of an inert rational prime.
    let quot = pi.div(&QuadElt::from_ints(&pi.field, p, 0)).unwrap();
    if !quot.is_unit() {
        return false;
    }
    let d = pi.field.d;
    if p == 2 {
        d.rem_euclid(8) == 5
    } else if d % p == 0 {
        false
    } else {
        (0..p).all(|x| (x * x - d).rem_euclid(p) != 0)
    }
}

fn small_prime(n: &BigInt) -> Option<i64> {
    let v = i64::try_from(n).ok()?;
    if v < 2 {
        return None;
    }
    let mut k = 2;
    while k * k <= v {
        if v % k == 0 {
            return None;
        }
        k += 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> FieldRef {
        quad_field(5).unwrap()
    }
    fn f13() -> FieldRef {
        quad_field(13).unwrap()
    }

    #[test]
    fn field_constants() {
        let f = f5();
        assert_eq!((f.rel_a, f.rel_b, f.rel_c, f.rel_d), (1, 1, 1, 2));
        assert_eq!((f.inv_a, f.inv_b), (1, -1));
        let g = f13();
        assert_eq!((g.rel_a, g.rel_b, g.rel_c, g.rel_d), (1, 3, 3, 10));
        assert_eq!((g.inv_a, g.inv_b), (3, -1));
        assert!(quad_field(7).is_err());
    }

    #[test]
    fn unit_norms() {
        // N(ε) = −1 checked by direct expansion (1+√5)/2 · (1−√5)/2.
        for f in [f5(), f13()] {
            let eps = QuadElt::eps(&f);
            assert_eq!(eps.norm(), rat_int(-1));
            // ε² = rel_a + rel_b ω
            let e2 = eps.mul(&eps);
            assert_eq!(e2, QuadElt::from_ints(&f, f.rel_a, f.rel_b));
        }
    }

    #[test]
    fn conj_and_inverse() {
        let f = f13();
        let x = QuadElt::from_ints(&f, 4, -7);
        assert_eq!(x.conj().conj(), x);
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert!(x.norm() == x.mul(&x.conj()).a);
    }

    #[test]
    fn euclid_examples() {
        let f = f5();
        let x = QuadElt::from_ints(&f, 3, 2);
        let (q, r) = QuadElt::euclid_div(&x, &x).unwrap();
        assert!(q.is_one() && r.is_zero());
        let (q, r) = QuadElt::euclid_div(&QuadElt::zero(&f), &x).unwrap();
        assert!(q.is_zero() && r.is_zero());
        // ε² divided by 2: remainder with |N(r)| < 4, cross-checked by an
        // exhaustive search over quotient candidates |α|,|β| ≤ 3.
        let e2 = QuadElt::eps(&f).mul(&QuadElt::eps(&f));
        let two = QuadElt::from_ints(&f, 2, 0);
        let (q, r) = QuadElt::euclid_div(&e2, &two).unwrap();
        assert_eq!(e2, q.mul(&two).add(&r));
        assert!(r.norm().abs() < rat_int(4));
        let mut found = false;
        for a in -3..=3 {
            for b in -3..=3 {
                let qq = QuadElt::from_ints(&f, a, b);
                let rr = e2.sub(&qq.mul(&two));
                if rr.norm().abs() < rat_int(4) {
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn unit_decomposition() {
        for f in [f5(), f13()] {
            for k in -6..=6i64 {
                for neg in [false, true] {
                    let mut u = QuadElt::eps_pow(&f, k);
                    if neg {
                        u = u.neg();
                    }
                    assert_eq!(u.decompose_unit(), Some((neg, k)));
                }
            }
            assert_eq!(QuadElt::from_ints(&f, 2, 0).decompose_unit(), None);
        }
    }

    #[test]
    fn canonical_associate_is_associate_invariant() {
        let f = f5();
        let z = QuadElt::from_ints(&f, 3, -1);
        let (c0, _) = z.canonical_associate();
        for k in -3..=3i64 {
            for neg in [false, true] {
                let mut u = QuadElt::eps_pow(&f, k);
                if neg {
                    u = u.neg();
                }
                let (c, lam) = z.mul(&u).canonical_associate();
                assert_eq!(c, c0);
                assert_eq!(lam.mul(&u).mul(&z), c);
            }
        }
    }

    #[test]
    fn prime_elements() {
        let f5 = f5();
        assert!(is_prime_element(&QuadElt::from_ints(&f5, 2, 0)));
        assert_eq!(residues_mod(&QuadElt::from_ints(&f5, 2, 0)).unwrap().len(), 4);
        let f13 = f13();
        // 4 − √13 = 7 − 2ε has norm 3
        let pi = QuadElt::from_ints(&f13, 7, -2);
        assert!(is_prime_element(&pi));
        assert_eq!(residues_mod(&pi).unwrap().len(), 3);
        assert!(!is_prime_element(&QuadElt::from_ints(&f13, 4, 0)));
    }

    proptest! {
        #[test]
        fn field_axioms(a1 in -9i64..9, b1 in -9i64..9, a2 in -9i64..9, b2 in -9i64..9, a3 in -9i64..9, b3 in -9i64..9) {
            let f = f13();
            let x = QuadElt::from_ints(&f, a1, b1);
            let y = QuadElt::from_ints(&f, a2, b2);
            let z = QuadElt::from_ints(&f, a3, b3);
            prop_assert_eq!(x.mul(&y.mul(&z)), x.mul(&y).mul(&z));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
        }

        #[test]
        fn conj_is_automorphism(a1 in -9i64..9, b1 in -9i64..9, a2 in -9i64..9, b2 in -9i64..9) {
            let f = f5();
            let x = QuadElt::from_ints(&f, a1, b1);
            let y = QuadElt::from_ints(&f, a2, b2);
            prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
            prop_assert_eq!(x.add(&y).conj(), x.conj().add(&y.conj()));
        }

        #[test]
        fn norm_is_rational_and_multiplicative(a1 in -9i64..9, b1 in -9i64..9, a2 in -9i64..9, b2 in -9i64..9) {
            let f = f13();
            let x = QuadElt::from_ints(&f, a1, b1);
            let y = QuadElt::from_ints(&f, a2, b2);
            prop_assert_eq!(x.norm() * y.norm(), x.mul(&y).norm());
        }
    }
}
