//! Symmetric tensor representations ρ_l of GL(2), the determinant twist
//! ρ′_l, and the two-embedding tensor action on V = V_{l1} ⊗ V_{l2}.
//!
//! The matrix of ρ_l(g) on the monomial column basis (u^l, u^{l-1}v, …,
//! v^l) is built by exact polynomial substitution, so arbitrary matrices
//! are supported; the closed form for lower-unipotent matrices is a test,
//! not the implementation.

use crate::error::{Error, Result};
use crate::exact::mat::{Mat, Ring};
use crate::exact::quad::{FieldRef, QuadElt, QuadField};

/// Even weights (l1, l2) with l2 ≤ l1; k_i = l_i + 2; dim V = (l1+1)(l2+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightPair {
    pub l1: u32,
    pub l2: u32,
}

impl WeightPair {
    pub fn new(l1: u32, l2: u32) -> Result<Self> {
        if l1 % 2 != 0 || l2 % 2 != 0 {
            return Err(Error::UnsupportedConfiguration(format!(
                "weights must be even, got ({l1}, {l2})"
            )));
        }
        if l2 > l1 {
            return Err(Error::UnsupportedConfiguration(format!(
                "weights must satisfy l2 <= l1, got ({l1}, {l2})"
            )));
        }
        Ok(WeightPair { l1, l2 })
    }

    /// From modular weights (k1, k2) = (l1+2, l2+2).
    pub fn from_k(k1: u32, k2: u32) -> Result<Self> {
        if k1 < 2 || k2 < 2 {
            return Err(Error::UnsupportedConfiguration("weights must be >= 2".into()));
        }
        Self::new(k1 - 2, k2 - 2)
    }

    pub fn k1(&self) -> u32 {
        self.l1 + 2
    }
    pub fn k2(&self) -> u32 {
        self.l2 + 2
    }
    pub fn dim(&self) -> usize {
        ((self.l1 + 1) * (self.l2 + 1)) as usize
    }

    /// Flat index of e_i ⊗ e'_j, 1-based (i, j); i outer, j inner.
    pub fn flat(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i <= (self.l1 + 1) as usize);
        debug_assert!(1 <= j && j <= (self.l2 + 1) as usize);
        (i - 1) * (self.l2 + 1) as usize + (j - 1)
    }

    /// Inverse of `flat`: the 1-based pair (i, j).
    pub fn unflat(&self, f: usize) -> (usize, usize) {
        let w = (self.l2 + 1) as usize;
        (f / w + 1, f % w + 1)
    }
}

/// Matrix of ρ_l(g) on the monomial basis, over any coefficient ring.
///
/// Row i of the result expands (au+bv)^{l+1−i}(cu+dv)^{i−1} in the
/// monomials u^{l+1−j}v^{j−1}.
pub fn rho_sym<R: Ring>(ring: &R, l: u32, g: &[R::E; 4]) -> Mat<R::E> {
    let l = l as usize;
    let n = l + 1;
    let [a, b, c, d] = g;

    // coeffs[t] = coefficient of u^{m−t} v^t in (x·u + y·v)^m
    let expand = |x: &R::E, y: &R::E, m: usize| -> Vec<R::E> {
        let mut cur = vec![ring.one()];
        for _ in 0..m {
            let mut next = vec![ring.zero(); cur.len() + 1];
            for (t, coeff) in cur.iter().enumerate() {
                next[t] = ring.add(&next[t], &ring.mul(coeff, x));
                next[t + 1] = ring.add(&next[t + 1], &ring.mul(coeff, y));
            }
            cur = next;
        }
        cur
    };

    let mut rows: Vec<Vec<R::E>> = Vec::with_capacity(n);
    for i in 1..=n {
        let f1 = expand(a, b, l + 1 - i);
        let f2 = expand(c, d, i - 1);
        let mut row = vec![ring.zero(); n];
        for (t1, c1) in f1.iter().enumerate() {
            if ring.is_zero(c1) {
                continue;
            }
            for (t2, c2) in f2.iter().enumerate() {
                let t = t1 + t2;
                row[t] = ring.add(&row[t], &ring.mul(c1, c2));
            }
        }
        rows.push(row);
    }
    Mat::from_fn(n, n, |i, j| rows[i][j].clone())
}

/// ρ_{l1}(γ) ⊗ ρ_{l2}(γ′) over Q(√D), where γ′ is the entrywise Galois
/// conjugate; when `twist` is set the result is multiplied by
/// det(γ)^{−l1/2}·conj(det γ)^{−l2/2}, which kills the center.
pub fn rho_pair(
    w: &WeightPair,
    field: &FieldRef,
    g: &[QuadElt; 4],
    twist: bool,
) -> Result<Mat<QuadElt>> {
    let ring = QuadField(field.clone());
    let det = g[0].mul(&g[3]).sub(&g[1].mul(&g[2]));
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let m1 = rho_sym(&ring, w.l1, g);
    let gc = [g[0].conj(), g[1].conj(), g[2].conj(), g[3].conj()];
    let m2 = rho_sym(&ring, w.l2, &gc);
    let scale = if twist {
        let di = det.inv()?;
        let dci = det.conj().inv()?;
        let mut s = QuadElt::one(field);
        for _ in 0..w.l1 / 2 {
            s = s.mul(&di);
        }
        for _ in 0..w.l2 / 2 {
            s = s.mul(&dci);
        }
        Some(s)
    } else {
        None
    };
    let n2 = (w.l2 + 1) as usize;
    Ok(Mat::from_fn(w.dim(), w.dim(), |r, c| {
        let (i1, j1) = (r / n2, r % n2);
        let (i2, j2) = (c / n2, c % n2);
        let v = m1.at(i1, i2).mul(m2.at(j1, j2));
        match &scale {
            Some(s) => v.mul(s),
            None => v,
        }
    }))
}

/// The signed index involution realizing ρ′(σ):
/// (i, j) ↦ ((−1)^{i+j}, l1+2−i, l2+2−j) on 1-based pairs.
pub fn sigma_sign_map(w: &WeightPair, i: usize, j: usize) -> (i64, usize, usize) {
    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
    (sign, (w.l1 + 2) as usize - i, (w.l2 + 2) as usize - j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quad::quad_field;
    use crate::exact::rat::{rat_int, Rat, RatField};
    use proptest::prelude::*;

    fn qmat(vals: [i64; 4]) -> [Rat; 4] {
        vals.map(rat_int)
    }

    #[test]
    fn degree_one_is_the_matrix_itself() {
        let r = RatField;
        let m = rho_sym(&r, 1, &qmat([3, 1, 4, 1]));
        assert_eq!(
            (m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1)),
            (&rat_int(3), &rat_int(1), &rat_int(4), &rat_int(1))
        );
    }

    #[test]
    fn degree_two_unipotent_rows() {
        // rows of ρ₂([[1,1],[0,1]]): expand (u+v)², (u+v)v, v² by hand
        let r = RatField;
        let m = rho_sym(&r, 2, &qmat([1, 1, 0, 1]));
        let expect = [[1, 2, 1], [0, 1, 1], [0, 0, 1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.at(i, j), &rat_int(expect[i][j]));
            }
        }
    }

    #[test]
    fn lower_unipotent_columns_binomial() {
        // column i of ρ_l([[1,0],[c,1]]) has entries C(k−1, i−1)·c^{k−i}
        let r = RatField;
        let l = 5u32;
        let c = rat_int(3);
        let m = rho_sym(&r, l, &[rat_int(1), rat_int(0), c.clone(), rat_int(1)]);
        let binom = |n: i64, k: i64| -> i64 {
            if k < 0 || k > n {
                return 0;
            }
            let mut r = 1i64;
            for t in 0..k {
                r = r * (n - t) / (t + 1);
            }
            r
        };
        for i in 1..=(l + 1) as usize {
            for k in 1..=(l + 1) as usize {
                if k < i {
                    assert_eq!(m.at(k - 1, i - 1), &rat_int(0));
                    continue;
                }
                let mut expect = rat_int(binom(k as i64 - 1, i as i64 - 1));
                for _ in 0..(k - i) {
                    expect *= c.clone();
                }
                assert_eq!(m.at(k - 1, i - 1), &expect);
            }
        }
    }

    #[test]
    fn pair_identity_and_center() {
        let f = quad_field(5).unwrap();
        let w = WeightPair::new(4, 2).unwrap();
        let ring = QuadField(f.clone());
        let id = [
            QuadElt::one(&f),
            QuadElt::zero(&f),
            QuadElt::zero(&f),
            QuadElt::one(&f),
        ];
        assert_eq!(rho_pair(&w, &f, &id, true).unwrap(), Mat::identity(&ring, w.dim()));
        for u in [
            QuadElt::one(&f),
            QuadElt::one(&f).neg(),
            QuadElt::eps(&f),
            QuadElt::eps(&f).neg(),
        ] {
            let z = [u.clone(), QuadElt::zero(&f), QuadElt::zero(&f), u.clone()];
            let m = rho_pair(&w, &f, &z, true).unwrap();
            assert_eq!(m, Mat::identity(&ring, w.dim()));
        }
        // untwisted equals twisted on determinant one
        let g = [
            QuadElt::from_ints(&f, 1, 1),
            QuadElt::from_ints(&f, 0, 1),
            QuadElt::from_ints(&f, 1, 0),
            QuadElt::from_ints(&f, 1, 1),
        ];
        let det = g[0].mul(&g[3]).sub(&g[1].mul(&g[2]));
        if det.is_one() {
            assert_eq!(
                rho_pair(&w, &f, &g, true).unwrap(),
                rho_pair(&w, &f, &g, false).unwrap()
            );
        }
    }

    #[test]
    fn pair_diagonal_eigenbasis() {
        // diag(a,1): e_i ⊗ e'_j ↦ a^{l1+1−i}(a')^{l2+1−j}·e_i ⊗ e'_j
        let f = quad_field(13).unwrap();
        let w = WeightPair::new(4, 2).unwrap();
        let a = QuadElt::eps(&f);
        let g = [a.clone(), QuadElt::zero(&f), QuadElt::zero(&f), QuadElt::one(&f)];
        let m = rho_pair(&w, &f, &g, false).unwrap();
        for i in 1..=5usize {
            for j in 1..=3usize {
                let r = w.flat(i, j);
                let mut expect = QuadElt::one(&f);
                for _ in 0..(5 - i) {
                    expect = expect.mul(&a);
                }
                for _ in 0..(3 - j) {
                    expect = expect.mul(&a.conj());
                }
                assert_eq!(m.at(r, r), &expect);
                for c in 0..w.dim() {
                    if c != r {
                        assert!(m.at(r, c).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_involution() {
        let w = WeightPair::new(6, 4).unwrap();
        assert_eq!(sigma_sign_map(&w, 1, 1), (1, 7, 5));
        for i in 1..=7 {
            for j in 1..=5 {
                let (s1, i1, j1) = sigma_sign_map(&w, i, j);
                let (s2, i2, j2) = sigma_sign_map(&w, i1, j1);
                assert_eq!((s1 * s2, i2, j2), (1, i, j));
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative(ga in proptest::array::uniform4(-4i64..5), gb in proptest::array::uniform4(-4i64..5)) {
            let f = quad_field(5).unwrap();
            let ring = QuadField(f.clone());
            let qa = ga.map(|v| QuadElt::from_ints(&f, v, 1));
            let qb = gb.map(|v| QuadElt::from_ints(&f, v, 0));
            let l = 3u32;
            let ma = rho_sym(&ring, l, &qa);
            let mb = rho_sym(&ring, l, &qb);
            let prod = [
                qa[0].mul(&qb[0]).add(&qa[1].mul(&qb[2])),
                qa[0].mul(&qb[1]).add(&qa[1].mul(&qb[3])),
                qa[2].mul(&qb[0]).add(&qa[3].mul(&qb[2])),
                qa[2].mul(&qb[1]).add(&qa[3].mul(&qb[3])),
            ];
            let mab = rho_sym(&ring, l, &prod);
            prop_assert_eq!(ma.mul(&ring, &mb), mab);
        }
    }
}
