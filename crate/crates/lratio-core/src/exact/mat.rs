//! Dense exact matrices over a ring context, with fraction-free
//! elimination for kernels, rank, solving, determinants and
//! characteristic polynomials.

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::rat::{rat_int, Rat, RatField};


/// Ring context: elements are plain data, operations go through the
/// context. `inv` may fail (singular element, or a zero divisor when the
/// context is a quotient ring modulo a reducible polynomial).
pub trait Ring: Clone {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Result<Self::E>;

    fn div(&self, a: &Self::E, b: &Self::E) -> Result<Self::E> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut E {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn zeros<R: Ring<E = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity<R: Ring<E = E>>(ring: &R, n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn add<R: Ring<E = E>>(&self, ring: &R, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn sub<R: Ring<E = E>>(&self, ring: &R, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| ring.sub(a, b)).collect(),
        }
    }

    pub fn neg<R: Ring<E = E>>(&self, ring: &R) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.neg(a)).collect() }
    }

    pub fn scale<R: Ring<E = E>>(&self, ring: &R, c: &E) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.mul(a, c)).collect() }
    }

    pub fn mul<R: Ring<E = E>>(&self, ring: &R, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Mat::zeros(ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if ring.is_zero(aik) {
                    continue;
                }
                for j in 0..o.cols {
                    let t = ring.mul(aik, o.at(k, j));
                    let cur = ring.add(out.at(i, j), &t);
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec<R: Ring<E = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for j in 0..self.cols {
                    if !ring.is_zero(self.at(i, j)) && !ring.is_zero(&v[j]) {
                        acc = ring.add(&acc, &ring.mul(self.at(i, j), &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn stack_rows(parts: &[&Self]) -> Self {
        let cols = parts[0].cols;
        assert!(parts.iter().all(|p| p.cols == cols));
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        Mat { rows, cols, data }
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts[0].rows;
        assert!(parts.iter().all(|p| p.rows == rows));
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for p in parts {
                data.extend_from_slice(p.row(i));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn is_zero_mat<R: Ring<E = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|a| ring.is_zero(a))
    }
}

/// An ordered basis of column vectors spanning a subspace of E^n.
#[derive(Clone, Debug)]
pub struct Subspace<E> {
    pub ambient: usize,
    pub basis: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subspace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Membership test; returns the coordinates when the vector lies in
    /// the span.
    pub fn coordinates<R: Ring<E = E>>(&self, ring: &R, v: &[E]) -> Option<Vec<E>> {
        let m = Mat::from_fn(self.ambient, self.dim(), |i, j| self.basis[j][i].clone());
        solve(ring, &m, v).ok().flatten()
    }

    pub fn contains<R: Ring<E = E>>(&self, ring: &R, v: &[E]) -> bool {
        self.coordinates(ring, v).is_some()
    }
}

/// Row echelon form by fraction-free (Bareiss) elimination, in place.
///
/// Returns the pivot positions (row, col). Entries below pivots are
/// zeroed; entry growth stays bounded by minors of the input.
fn bareiss_echelon<R: Ring>(ring: &R, m: &mut Mat<R::E>) -> Result<Vec<(usize, usize)>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = ring.one();
    let mut r = 0;
    for c in 0..m.cols {
        if r >= m.rows {
            break;
        }
        // pick a pivot in column c at or below row r
        let mut piv = None;
        for i in r..m.rows {
            if !ring.is_zero(m.at(i, c)) {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
        }
        let pivot = m.at(r, c).clone();
        for i in (r + 1)..m.rows {
            let head = m.at(i, c).clone();
            for j in 0..m.cols {
                if j <= c {
                    if j == c {
                        *m.at_mut(i, j) = ring.zero();
                    }
                    continue;
                }
                let t1 = ring.mul(&pivot, m.at(i, j));
                let t2 = ring.mul(&head, m.at(r, j));
                let num = ring.sub(&t1, &t2);
                *m.at_mut(i, j) = ring.div(&num, &prev)?;
            }
        }
        prev = pivot;
        pivots.push((r, c));
        r += 1;
    }
    Ok(pivots)
}

pub fn rank<R: Ring>(ring: &R, m: &Mat<R::E>) -> Result<usize> {
    let mut w = m.clone();
    Ok(bareiss_echelon(ring, &mut w)?.len())
}

/// Determinant of a square matrix (Bareiss).
pub fn det<R: Ring>(ring: &R, m: &Mat<R::E>) -> Result<R::E> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return Ok(ring.one());
    }
    let mut w = m.clone();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n {
        let mut piv = None;
        for i in k..n {
            if !ring.is_zero(w.at(i, k)) {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { return Ok(ring.zero()) };
        if p != k {
            for j in 0..n {
                w.data.swap(k * n + j, p * n + j);
            }
            sign = !sign;
        }
        let pivot = w.at(k, k).clone();
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t1 = ring.mul(&pivot, w.at(i, j));
                let t2 = ring.mul(w.at(i, k), w.at(k, j));
                let num = ring.sub(&t1, &t2);
                *w.at_mut(i, j) = ring.div(&num, &prev)?;
            }
        }
        prev = pivot;
    }
    let d = w.at(n - 1, n - 1).clone();
    Ok(if sign { ring.neg(&d) } else { d })
}

/// Kernel basis of M (null space of the column action M·v = 0).
///
/// Rows containing at most two nonzero entries are first turned into
/// direct substitutions; the dense remainder goes through fraction-free
/// elimination. Every returned vector is re-checked against M exactly.
pub fn kernel<R: Ring>(ring: &R, m: &Mat<R::E>) -> Result<Subspace<R::E>> {
    let n = m.cols;
    // var_expr[v] = None: v is (currently) free/representative.
    // var_expr[v] = Some(pairs): v = Σ c·rep over representative vars.
    #[derive(Clone)]
    enum St<E> {
        Rep,
        Zero,
        Expr(Vec<(usize, E)>),
    }
    let mut state: Vec<St<R::E>> = vec![St::Rep; n];

    // normalize a linear form to representative variables
    let norm_form = |state: &Vec<St<R::E>>, form: &[(usize, R::E)]| -> Vec<(usize, R::E)> {
        let mut acc: std::collections::BTreeMap<usize, R::E> = std::collections::BTreeMap::new();
        let mut stack: Vec<(usize, R::E)> = form.to_vec();
        while let Some((v, c)) = stack.pop() {
            match &state[v] {
                St::Zero => {}
                St::Rep => {
                    let e = acc.entry(v).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &c);
                }
                St::Expr(pairs) => {
                    for (w, cw) in pairs {
                        stack.push((*w, ring.mul(&c, cw)));
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect()
    };

    let mut pending: Vec<Vec<(usize, R::E)>> = (0..m.rows)
        .map(|i| {
            (0..n)
                .filter(|&j| !ring.is_zero(m.at(i, j)))
                .map(|j| (j, m.at(i, j).clone()))
                .collect()
        })
        .collect();

    // Substitution sweep.
    loop {
        let mut changed = false;
        let mut rest = Vec::new();
        for row in pending.drain(..) {
            let f = norm_form(&state, &row);
            match f.len() {
                0 => {}
                1 => {
                    let (v, _) = f[0];
                    state[v] = St::Zero;
                    changed = true;
                }
                2 => {
                    let (v1, c1) = f[0].clone();
                    let (v2, c2) = f[1].clone();
                    // c1 v1 + c2 v2 = 0 ⇒ v2 = −c1/c2 · v1
                    let coeff = ring.neg(&ring.div(&c1, &c2)?);
                    state[v2] = St::Expr(vec![(v1, coeff)]);
                    changed = true;
                }
                _ => rest.push(f),
            }
        }
        pending = rest;
        if !changed {
            break;
        }
    }

    // Re-normalize remaining rows and collect representative vars.
    let rows: Vec<Vec<(usize, R::E)>> =
        pending.iter().map(|r| norm_form(&state, r)).filter(|r| !r.is_empty()).collect();
    let reps: Vec<usize> = (0..n).filter(|&v| matches!(state[v], St::Rep)).collect();
    let rep_index: std::collections::HashMap<usize, usize> =
        reps.iter().enumerate().map(|(k, &v)| (v, k)).collect();

    let reduced = Mat::from_fn(rows.len().max(1), reps.len(), |i, j| {
        if i >= rows.len() {
            return ring.zero();
        }
        rows[i]
            .iter()
            .find(|(v, _)| rep_index[v] == j)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| ring.zero())
    });

    let red_kernel = kernel_dense(ring, &reduced)?;

    // Expand reduced kernel vectors to the full variable set.
    let mut basis = Vec::new();
    for kv in red_kernel {
        let mut full = vec![ring.zero(); n];
        for (k, &v) in reps.iter().enumerate() {
            full[v] = kv[k].clone();
        }
        // fill substituted variables
        for v in 0..n {
            if let St::Expr(_) = state[v] {
                let f = norm_form(&state, &[(v, ring.one())]);
                let mut acc = ring.zero();
                for (w, c) in f {
                    acc = ring.add(&acc, &ring.mul(&c, &full[w]));
                }
                full[v] = acc;
            }
        }
        basis.push(full);
    }

    // Exact verification: M v = 0.
    for v in &basis {
        let image = m.mul_vec(ring, v);
        if image.iter().any(|x| !ring.is_zero(x)) {
            return Err(Error::AssertionFailed("kernel vector fails M v = 0".into()));
        }
    }
    Ok(Subspace { ambient: n, basis })
}

/// Plain fraction-free kernel of a dense matrix.
fn kernel_dense<R: Ring>(ring: &R, m: &Mat<R::E>) -> Result<Vec<Vec<R::E>>> {
    let mut w = m.clone();
    let pivots = bareiss_echelon(ring, &mut w)?;
    let piv_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..m.cols).filter(|c| !piv_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![ring.zero(); m.cols];
        v[fc] = ring.one();
        // back-substitute pivot variables
        for &(pr, pc) in pivots.iter().rev() {
            let mut acc = ring.zero();
            for j in (pc + 1)..m.cols {
                if !ring.is_zero(w.at(pr, j)) && !ring.is_zero(&v[j]) {
                    acc = ring.add(&acc, &ring.mul(w.at(pr, j), &v[j]));
                }
            }
            v[pc] = ring.neg(&ring.div(&acc, w.at(pr, pc))?);
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solves M x = b. Returns Ok(None) when inconsistent.
pub fn solve<R: Ring>(ring: &R, m: &Mat<R::E>, b: &[R::E]) -> Result<Option<Vec<R::E>>> {
    let sols = solve_many(ring, m, &[b.to_vec()])?;
    Ok(sols.map(|mut v| v.pop().unwrap()))
}

/// Solves M x = b for several right-hand sides with one elimination.
/// Returns None when any system is inconsistent.
pub fn solve_many<R: Ring>(
    ring: &R,
    m: &Mat<R::E>,
    bs: &[Vec<R::E>],
) -> Result<Option<Vec<Vec<R::E>>>> {
    let k = bs.len();
    let aug = Mat::from_fn(m.rows, m.cols + k, |i, j| {
        if j < m.cols {
            m.at(i, j).clone()
        } else {
            bs[j - m.cols][i].clone()
        }
    });
    let mut w = aug;
    // Restrict pivoting to the first m.cols columns.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    {
        let mut prev = ring.one();
        let mut r = 0;
        for c in 0..m.cols {
            if r >= w.rows {
                break;
            }
            let mut piv = None;
            for i in r..w.rows {
                if !ring.is_zero(w.at(i, c)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != r {
                for j in 0..w.cols {
                    w.data.swap(r * w.cols + j, p * w.cols + j);
                }
            }
            let pivot = w.at(r, c).clone();
            for i in (r + 1)..w.rows {
                let head = w.at(i, c).clone();
                for j in 0..w.cols {
                    if j <= c {
                        if j == c {
                            *w.at_mut(i, j) = ring.zero();
                        }
                        continue;
                    }
                    let t1 = ring.mul(&pivot, w.at(i, j));
                    let t2 = ring.mul(&head, w.at(r, j));
                    let num = ring.sub(&t1, &t2);
                    *w.at_mut(i, j) = ring.div(&num, &prev)?;
                }
            }
            prev = pivot;
            pivots.push((r, c));
            r += 1;
        }
    }
    // Consistency: rows below the last pivot must have zero in all
    // right-hand side columns.
    let nrank = pivots.len();
    for i in nrank..w.rows {
        for j in m.cols..w.cols {
            if !ring.is_zero(w.at(i, j)) {
                return Ok(None);
            }
        }
    }
    let mut sols = Vec::with_capacity(k);
    for t in 0..k {
        let bcol = m.cols + t;
        let mut x = vec![ring.zero(); m.cols];
        for &(pr, pc) in pivots.iter().rev() {
            let mut acc = w.at(pr, bcol).clone();
            for j in (pc + 1)..m.cols {
                if !ring.is_zero(w.at(pr, j)) && !ring.is_zero(&x[j]) {
                    acc = ring.sub(&acc, &ring.mul(w.at(pr, j), &x[j]));
                }
            }
            x[pc] = ring.div(&acc, w.at(pr, pc))?;
        }
        sols.push(x);
    }
    Ok(Some(sols))
}

/// Basis of the column space.
pub fn column_space<R: Ring>(ring: &R, m: &Mat<R::E>) -> Result<Subspace<R::E>> {
    let t = Mat::from_fn(m.cols, m.rows, |i, j| m.at(j, i).clone());
    let mut w = t;
    let pivots = bareiss_echelon(ring, &mut w)?;
    let basis = pivots.iter().map(|&(r, _)| w.row(r).to_vec()).collect();
    Ok(Subspace { ambient: m.rows, basis })
}

/// Vectors of Z completing a basis of B to a basis of Z.
/// Errors with NotSubspace unless B ⊆ Z.
pub fn quotient_basis<R: Ring>(
    ring: &R,
    z: &Subspace<R::E>,
    b: &Subspace<R::E>,
) -> Result<Subspace<R::E>> {
    assert_eq!(z.ambient, b.ambient);
    for (i, v) in b.basis.iter().enumerate() {
        if !z.contains(ring, v) {
            return Err(Error::NotSubspace { index: i });
        }
    }
    // Echelonize B, then greedily add Z vectors that increase the rank.
    let mut current: Vec<Vec<R::E>> = b.basis.clone();
    let mut extra = Vec::new();
    let rank_of = |vs: &Vec<Vec<R::E>>| -> Result<usize> {
        if vs.is_empty() {
            return Ok(0);
        }
        let m = Mat::from_fn(vs.len(), z.ambient, |i, j| vs[i][j].clone());
        rank(ring, &m)
    };
    let mut r = rank_of(&current)?;
    if r != b.dim() {
        return Err(Error::AssertionFailed("coboundary basis is dependent".into()));
    }
    for v in &z.basis {
        current.push(v.clone());
        let r2 = rank_of(&current)?;
        if r2 > r {
            r = r2;
            extra.push(v.clone());
        } else {
            current.pop();
        }
    }
    Ok(Subspace { ambient: z.ambient, basis: extra })
}

/// Monic characteristic polynomial det(xI − M) of a rational matrix,
/// computed fraction-free via determinant evaluation and interpolation.
pub fn charpoly_rat(m: &Mat<Rat>) -> Result<Poly> {
    assert_eq!(m.rows, m.cols);
    let ring = RatField;
    let n = m.rows;
    if n == 0 {
        return Ok(Poly::one());
    }
    // Evaluate det(kI − M) at k = 0..n and interpolate the degree-n
    // polynomial exactly.
    let mut points = Vec::with_capacity(n + 1);
    for k in 0..=n as i64 {
        let mk = Mat::from_fn(n, n, |i, j| {
            if i == j {
                rat_int(k) - m.at(i, j).clone()
            } else {
                -m.at(i, j).clone()
            }
        });
        points.push((rat_int(k), det(&ring, &mk)?));
    }
    let p = Poly::interpolate(&points);
    debug_assert!(p.is_monic());
    Ok(p)
}

/// Characteristic polynomial over Q(√D); exact, fraction-free.
pub fn charpoly_quad(
    ring: &crate::exact::quad::QuadField,
    m: &Mat<crate::exact::quad::QuadElt>,
) -> Result<Vec<crate::exact::quad::QuadElt>> {
    use crate::exact::quad::QuadElt;
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let f = &ring.0;
    if n == 0 {
        return Ok(vec![QuadElt::one(f)]);
    }
    let mut points = Vec::with_capacity(n + 1);
    for k in 0..=n as i64 {
        let mk = Mat::from_fn(n, n, |i, j| {
            if i == j {
                QuadElt::from_ints(f, k, 0).sub(m.at(i, j))
            } else {
                m.at(i, j).neg()
            }
        });
        points.push((QuadElt::from_ints(f, k, 0), det(ring, &mk)?));
    }
    // Lagrange interpolation over the field.
    let mut coeffs = vec![QuadElt::zero(f); n + 1];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x − xj)/(xi − xj)
        let mut num = vec![QuadElt::one(f)];
        let mut denom = QuadElt::one(f);
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![QuadElt::zero(f); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k] = next[k].sub(&c.mul(xj));
                next[k + 1] = next[k + 1].add(c);
            }
            num = next;
            denom = denom.mul(&xi.sub(xj));
        }
        let scale = yi.div(&denom)?;
        for (k, c) in num.iter().enumerate() {
            coeffs[k] = coeffs[k].add(&c.mul(&scale));
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat_int;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn mq(rows: usize, cols: usize, vals: &[i64]) -> Mat<Rat> {
        Mat::from_fn(rows, cols, |i, j| rat_int(vals[i * cols + j]))
    }

    #[test]
    fn kernel_identity_and_zero() {
        let r = RatField;
        let id = Mat::identity(&r, 3);
        assert_eq!(kernel(&r, &id).unwrap().dim(), 0);
        let z = Mat::zeros(&r, 3, 3);
        assert_eq!(kernel(&r, &z).unwrap().dim(), 3);
    }

    /// Independent dense elimination oracle for kernel dimension: plain
    /// Gauss-Jordan over Q with full normalization.
    fn gauss_jordan_rank(m: &Mat<Rat>) -> usize {
        let mut w: Vec<Vec<Rat>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        let mut r = 0;
        for c in 0..m.cols {
            if r >= w.len() {
                break;
            }
            let piv = (r..w.len()).find(|&i| !w[i][c].is_zero());
            let Some(p) = piv else { continue };
            w.swap(r, p);
            let inv = w[r][c].clone().recip();
            for x in w[r].iter_mut() {
                *x *= inv.clone();
            }
            for i in 0..w.len() {
                if i != r && !w[i][c].is_zero() {
                    let f = w[i][c].clone();
                    for j in 0..m.cols {
                        let t = &w[r][j] * &f;
                        w[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn kernel_rank2_vs_oracle() {
        // random-looking rank-2 4×4
        let m = mq(4, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0, 1, 3, 4, 4]);
        let r = RatField;
        let k = kernel(&r, &m).unwrap();
        let rk = gauss_jordan_rank(&m);
        assert_eq!(rk, 2);
        assert_eq!(k.dim(), 4 - rk);
    }

    #[test]
    fn quotient_basis_cases() {
        let r = RatField;
        let z = Subspace {
            ambient: 3,
            basis: vec![
                vec![rat_int(1), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(1), rat_int(0)],
            ],
        };
        let q = quotient_basis(&r, &z, &z).unwrap();
        assert_eq!(q.dim(), 0);
        let empty = Subspace { ambient: 3, basis: vec![] };
        let q = quotient_basis(&r, &z, &empty).unwrap();
        assert_eq!(q.dim(), 2);
        let outside = Subspace { ambient: 3, basis: vec![vec![rat_int(0), rat_int(0), rat_int(1)]] };
        assert!(matches!(quotient_basis(&r, &z, &outside), Err(Error::NotSubspace { .. })));
    }

    #[test]
    fn charpoly_examples() {
        // zero 2×2 → x²
        let z = mq(2, 2, &[0, 0, 0, 0]);
        assert_eq!(charpoly_rat(&z).unwrap().coeffs, vec![rat_int(0), rat_int(0), rat_int(1)]);
        // diag(1,2) → (x−1)(x−2) = x² − 3x + 2
        let d = mq(2, 2, &[1, 0, 0, 2]);
        assert_eq!(
            charpoly_rat(&d).unwrap().coeffs,
            vec![rat_int(2), rat_int(-3), rat_int(1)]
        );
        // companion matrix of x³ − 2
        let c = mq(3, 3, &[0, 0, 2, 1, 0, 0, 0, 1, 0]);
        assert_eq!(
            charpoly_rat(&c).unwrap().coeffs,
            vec![rat_int(-2), rat_int(0), rat_int(0), rat_int(1)]
        );
    }

    #[test]
    fn solve_consistent_and_not() {
        let r = RatField;
        let m = mq(2, 2, &[1, 1, 2, 2]);
        assert!(solve(&r, &m, &[rat_int(1), rat_int(2)]).unwrap().is_some());
        assert!(solve(&r, &m, &[rat_int(1), rat_int(3)]).unwrap().is_none());
        let m2 = mq(2, 2, &[1, 1, 1, -1]);
        let x = solve(&r, &m2, &[rat_int(3), rat_int(1)]).unwrap().unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
    }

    proptest! {
        #[test]
        fn kernel_matches_oracle(vals in proptest::collection::vec(-5i64..5, 20)) {
            let m = mq(4, 5, &vals);
            let r = RatField;
            let k = kernel(&r, &m).unwrap();
            prop_assert_eq!(k.dim(), 5 - gauss_jordan_rank(&m));
            for v in &k.basis {
                let im = m.mul_vec(&r, v);
                prop_assert!(im.iter().all(|x| x.is_zero()));
            }
        }
    }
}
