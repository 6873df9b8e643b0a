//! Factorization of monic integer polynomials over Q.
//!
//! Real roots are isolated exactly with Sturm sequences and refined by
//! bisection; factors are recovered by rounding elementary symmetric
//! products of root subsets to integers. Every candidate is verified by
//! exact polynomial division, so the output is certified even though the
//! search is numeric. Precision doubles until the roots separate. When a
//! squarefree piece keeps complex roots out of reach of the
//! recombination, the unfactored remainder is reported.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::rat::{rat, Rat};

/// Interval [lo, hi] with rational endpoints.
#[derive(Clone, Debug)]
struct Iv {
    lo: Rat,
    hi: Rat,
}

enum Rounded {
    /// Exactly one integer in the interval.
    Exactly(BigInt),
    /// No integer in the interval: decisively not an integer vector.
    None,
    /// More than one integer: the interval is too wide to decide.
    Unsure,
}

impl Iv {
    fn point(x: Rat) -> Self {
        Iv { lo: x.clone(), hi: x }
    }
    fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
    fn mul(&self, o: &Iv) -> Iv {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Iv { lo, hi }
    }
    fn round(&self) -> Rounded {
        let lo = self.lo.ceil().to_integer();
        let hi = self.hi.floor().to_integer();
        if lo > hi {
            Rounded::None
        } else if lo == hi {
            Rounded::Exactly(lo)
        } else {
            Rounded::Unsure
        }
    }
}

/// Interval coefficients of Π (x − r) over the chosen root intervals.
fn subset_poly(roots: &[&Iv]) -> Vec<Iv> {
    let mut coeffs = vec![Iv::point(Rat::one())];
    for r in roots {
        let neg_r = Iv { lo: -r.hi.clone(), hi: -r.lo.clone() };
        let mut next = vec![Iv::point(Rat::zero()); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].add(&c.mul(&neg_r));
        }
        coeffs = next;
    }
    coeffs
}

/// Lexicographic k-subsets of 0..n.
struct Combos {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combos {
    fn new(n: usize, k: usize) -> Self {
        Combos { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combos {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        if k == 0 {
            self.done = true;
            return Some(out);
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in (i + 1)..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

enum Step {
    Found(Poly, Vec<usize>),
    /// exhausted all subsets without finding a divisor
    Nothing,
    /// some interval product was too wide to round
    NeedPrecision,
}

fn search_subsets(remaining: &Poly, live: &[Iv]) -> Step {
    let deg_rem = remaining.deg();
    let mut imprecise = false;
    for size in 1..=live.len().min(deg_rem) {
        for subset in Combos::new(live.len(), size) {
            let roots: Vec<&Iv> = subset.iter().map(|&k| &live[k]).collect();
            let coeffs = subset_poly(&roots);
            let mut ints = Vec::with_capacity(coeffs.len());
            let mut reject = false;
            for c in &coeffs {
                match c.round() {
                    Rounded::Exactly(k) => ints.push(k),
                    Rounded::None => {
                        reject = true;
                        break;
                    }
                    Rounded::Unsure => {
                        imprecise = true;
                        reject = true;
                        break;
                    }
                }
            }
            if reject {
                continue;
            }
            let cand = Poly::new(ints.into_iter().map(Rat::from_integer).collect());
            if cand.degree() == Some(size) && remaining.div_exact(&cand).is_some() {
                return Step::Found(cand, subset);
            }
        }
    }
    if imprecise {
        Step::NeedPrecision
    } else {
        Step::Nothing
    }
}

/// Factors a monic squarefree integer polynomial.
/// Returns (irreducible factors, unfactored remainder if any).
fn factor_squarefree(p: &Poly) -> Result<(Vec<Poly>, Option<Poly>)> {
    let n = p.deg();
    if n == 0 {
        return Ok((vec![], None));
    }
    if n == 1 {
        return Ok((vec![p.clone()], None));
    }
    let mut width = rat(1, 1i64 << 24);
    for _round in 0..24 {
        let roots = p.isolate_real_roots(&width);
        let mut live: Vec<Iv> =
            roots.iter().map(|(a, b)| Iv { lo: a.clone(), hi: b.clone() }).collect();
        let mut remaining = p.clone();
        let mut factors: Vec<Poly> = Vec::new();
        loop {
            if remaining.deg() == 0 {
                return Ok((factors, None));
            }
            match search_subsets(&remaining, &live) {
                Step::Found(f, used) => {
                    // smallest subsets first, so f is irreducible
                    remaining = remaining.div_exact(&f).expect("checked");
                    factors.push(f);
                    let mut keep = Vec::new();
                    for (i, iv) in live.into_iter().enumerate() {
                        if !used.contains(&i) {
                            keep.push(iv);
                        }
                    }
                    live = keep;
                }
                Step::Nothing => {
                    // No real-root subset yields a rational factor, so in
                    // any splitting every factor must contain a complex
                    // conjugate pair. With at most one pair present the
                    // remainder is therefore irreducible.
                    if remaining.deg() - live.len() <= 2 {
                        factors.push(remaining);
                        return Ok((factors, None));
                    }
                    return Ok((factors, Some(remaining)));
                }
                Step::NeedPrecision => break,
            }
        }
        width = &width * &width;
    }
    Err(Error::FactorizationIncomplete { degree: p.deg() })
}

/// Factors a monic integer-coefficient polynomial into monic integer
/// factors whose exact product reconstructs the input (with
/// multiplicity). The squarefree part is taken first via gcd with the
/// derivative.
pub fn factor_over_q(p: &Poly) -> Result<Vec<Poly>> {
    if p.is_zero() {
        return Err(Error::AssertionFailed("cannot factor zero".into()));
    }
    let p = p.monic();
    if p.integer_coeffs().is_none() {
        return Err(Error::AssertionFailed("input must have integer coefficients".into()));
    }
    if p.deg() == 0 {
        return Ok(vec![]);
    }
    let sf = p.squarefree_part();
    let (irreducibles, _leftover) = factor_squarefree(&sf)?;
    let mut out: Vec<Poly> = Vec::new();
    let mut rest = p.clone();
    for f in &irreducibles {
        while rest.deg() > 0 {
            match rest.div_exact(f) {
                Some(q) => {
                    out.push(f.clone());
                    rest = q;
                }
                None => break,
            }
        }
    }
    if rest.deg() > 0 {
        return Err(Error::FactorizationIncomplete { degree: rest.deg() });
    }
    // exact product reconstruction, bit for bit
    let mut prod = Poly::one();
    for f in &out {
        prod = prod.mul(f);
    }
    if prod != p {
        return Err(Error::AssertionFailed("factor product mismatch".into()));
    }
    out.sort_by_key(|f| (f.deg(), format!("{:?}", f.coeffs)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_split() {
        let p = Poly::from_ints(&[-1, 0, 1]); // x² − 1
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f, vec![Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 1])]);
    }

    #[test]
    fn printed_product_splits() {
        // (X² − 40X − 3957)(X³ + 28X² − 2601X − 71748)
        let a = Poly::from_ints(&[-3957, -40, 1]);
        let b = Poly::from_ints(&[-71748, -2601, 28, 1]);
        let p = a.mul(&b);
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f, vec![a, b]);
    }

    #[test]
    fn quadratic_irreducible_with_real_roots() {
        // roots −2560 ± 960√106: irreducible over Q
        let p = Poly::from_ints(&[-91033600, 5120, 1]);
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f, vec![p]);
    }

    #[test]
    fn repeated_and_cubic() {
        let a = Poly::from_ints(&[-97280, 1]);
        let p = a.mul(&a).mul(&Poly::from_ints(&[840640, 1]));
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f.iter().filter(|&g| *g == a).count(), 2);
        assert_eq!(f.len(), 3);
        // x³ − 2 is irreducible (one real root)
        let c = Poly::from_ints(&[-2, 0, 0, 1]);
        assert_eq!(factor_over_q(&c).unwrap(), vec![c]);
    }

    #[test]
    fn product_reconstructs_exactly() {
        let a = Poly::from_ints(&[3, 1]);
        let b = Poly::from_ints(&[-7, 0, 1]);
        let c = Poly::from_ints(&[1, 1, 1]); // irreducible, complex roots
        let p = a.mul(&b).mul(&c);
        let f = factor_over_q(&p).unwrap();
        let mut prod = Poly::one();
        for g in &f {
            prod = prod.mul(g);
        }
        assert_eq!(prod, p.monic());
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn degree_six_printed_factor() {
        // a degree-6 irreducible with large coefficients from a printed
        // characteristic polynomial
        let p = Poly::new(
            [
                "-255121008509808",
                "14522233287672",
                "109163403621",
                "-129598956",
                "-665334",
                "244",
                "1",
            ]
            .iter()
            .map(|s| Rat::from_integer(s.parse::<BigInt>().unwrap()))
            .collect(),
        );
        let f = factor_over_q(&p).unwrap();
        assert_eq!(f, vec![p]);
    }
}
