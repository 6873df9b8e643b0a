//! Dense univariate polynomials over Q, plus the real-root machinery
//! (Sturm sequences and interval refinement) used by the factorizer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::rat::{rat_int, Rat};

/// Coefficients in ascending degree order; empty means the zero
/// polynomial, otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rat::one()] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Poly::new(v.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial returns None.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn leading(&self) -> &Rat {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading().is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
                    let b = o.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        self.scale(&self.leading().clone().recip())
    }

    /// Euclidean division (quotient, remainder).
    pub fn divmod(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let mut rem = self.clone();
        let mut quo = vec![Rat::zero(); self.coeffs.len().saturating_sub(d.coeffs.len() - 1)];
        while !rem.is_zero() && rem.deg() >= d.deg() {
            let shift = rem.deg() - d.deg();
            let c = rem.leading() / d.leading();
            quo[shift] = c.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(d.coeffs.iter().map(|a| a * &c));
            rem = rem.sub(&Poly::new(sub));
        }
        (Poly::new(quo), rem)
    }

    /// Exact division; None when the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divmod(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Squarefree part p / gcd(p, p').
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.monic()
        } else {
            self.div_exact(&g).expect("gcd divides").monic()
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// p(c·x) — substitution by a rational multiple of x.
    pub fn compose_scale(&self, c: &Rat) -> Self {
        let mut pow = Rat::one();
        Poly::new(
            self.coeffs
                .iter()
                .map(|a| {
                    let out = a * &pow;
                    pow = &pow * c;
                    out
                })
                .collect(),
        )
    }

    /// Integer-content-normalized integer coefficients, assuming the
    /// polynomial is monic with integer coefficients after clearing.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect()
    }

    /// Lagrange interpolation through rational points with distinct x.
    pub fn interpolate(points: &[(Rat, Rat)]) -> Self {
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut num = Poly::one();
            let mut den = Rat::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(&Poly::new(vec![-xj.clone(), Rat::one()]));
                den *= xi - xj;
            }
            acc = acc.add(&num.scale(&(yi / den)));
        }
        acc
    }

    /// Cauchy bound: all real roots lie in (−B, B).
    pub fn root_bound(&self) -> Rat {
        let lead = self.leading();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = (c / lead).abs();
            if r > m {
                m = r;
            }
        }
        m + Rat::one()
    }

    /// Sturm sequence.
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].divmod(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        chain
    }

    fn sign_variations(chain: &[Poly], x: &Rat) -> usize {
        let mut vars = 0;
        let mut last = 0i8;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    vars += 1;
                }
                last = s;
            }
        }
        vars
    }

    /// Number of real roots in (a, b] for a squarefree polynomial.
    pub fn count_roots(chain: &[Poly], a: &Rat, b: &Rat) -> usize {
        Self::sign_variations(chain, a) - Self::sign_variations(chain, b)
    }

    /// Isolating intervals (a, b] for all real roots of a squarefree
    /// polynomial, refined until each has width ≤ `width`.
    pub fn isolate_real_roots(&self, width: &Rat) -> Vec<(Rat, Rat)> {
        assert!(!self.is_zero());
        let chain = self.sturm_chain();
        let bound = self.root_bound();
        let mut stack = vec![(-bound.clone(), bound.clone())];
        let mut isolated = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let n = Self::count_roots(&chain, &a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                isolated.push((a, b));
                continue;
            }
            let mid = (&a + &b) / rat_int(2);
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        // refine each isolating interval by bisection
        let refined = isolated
            .into_iter()
            .map(|(mut a, mut b)| {
                while &b - &a > *width {
                    let mid = (&a + &b) / rat_int(2);
                    if Self::count_roots(&chain, &a, &mid) == 1 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                (a, b)
            })
            .collect::<Vec<_>>();
        let mut sorted = refined;
        sorted.sort_by(|x, y| x.0.cmp(&y.0));
        sorted
    }
}

/// Scale a monic rational polynomial to a primitive integer polynomial
/// q(x) = d^deg · p(x/d); returns (q, d) with q monic over Z.
pub fn clear_to_monic_integer(p: &Poly) -> (Poly, BigInt) {
    assert!(p.is_monic());
    let mut d = BigInt::one();
    for c in &p.coeffs {
        d = d.lcm(c.denom());
    }
    let dr = Rat::from_integer(d.clone());
    // substitute x → x/d and multiply by d^n: coefficient of x^i gets d^{n-i}
    let n = p.deg();
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut f = Rat::one();
            for _ in 0..(n - i) {
                f *= &dr;
            }
            c * f
        })
        .collect();
    (Poly::new(coeffs), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn division_roundtrip() {
        let p = Poly::from_ints(&[-2, 0, 0, 1]); // x³ − 2
        let d = Poly::from_ints(&[1, 1]); // x + 1
        let (q, r) = p.divmod(&d);
        assert_eq!(q.mul(&d).add(&r), p);
    }

    #[test]
    fn sturm_counts() {
        // (x−1)(x+2)x = x³ + x² − 2x
        let p = Poly::from_ints(&[0, -2, 1, 1]);
        let roots = p.isolate_real_roots(&rat(1, 16));
        assert_eq!(roots.len(), 3);
        // x² + 1 has no real roots
        let q = Poly::from_ints(&[1, 0, 1]);
        assert!(q.isolate_real_roots(&rat(1, 4)).is_empty());
    }

    #[test]
    fn interpolation() {
        let pts = vec![
            (rat_int(0), rat_int(1)),
            (rat_int(1), rat_int(2)),
            (rat_int(2), rat_int(5)),
        ];
        let p = Poly::interpolate(&pts); // x² + 1
        assert_eq!(p.coeffs, vec![rat_int(1), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn squarefree() {
        let p = Poly::from_ints(&[1, 1]); // x+1
        let sq = p.mul(&p).mul(&Poly::from_ints(&[-1, 1]));
        let sf = sq.squarefree_part();
        assert_eq!(sf, Poly::from_ints(&[-1, 0, 1])); // x² − 1
    }
}
