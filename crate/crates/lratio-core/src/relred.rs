//! The symbolic reduction calculus.
//!
//! A cocycle value on a relation word is expressed as a formal sum
//! Σ c·[g]·A + Σ c·[g]·B over the group, where A and B are the two
//! unknown values on the basic torsion relations. The third unknown (the
//! value on σ̃²) is normalized to zero throughout, and values on
//! relations among the upper-triangular generators vanish, so adjacent
//! parabolic letters merge freely and words are manipulated in the
//! alternating normal form σ̃p̃₁σ̃p̃₂⋯σ̃p̃_m.
//!
//! Everything here is weight independent; `materialize` turns a formal
//! sum into the pair of dim V × dim V matrices acting on A and B.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::mat::Mat;
use crate::exact::quad::{FieldRef, QuadElt, QuadField};
use crate::exact::rat::Rat;
use crate::modgroup::{generators, GammaElt, Gen, Word};
use crate::symrep::{rho_pair, WeightPair};

/// Plus part (full equivariance) or minus part (ν̃-conjugation acts with
/// an extra sign).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Plus,
    Minus,
}

impl Mode {
    /// Sign picked up when conjugating by a word of the given ν̃-degree.
    pub fn conj_sign(&self, nu_degree: i64) -> i64 {
        match self {
            Mode::Plus => 1,
            Mode::Minus => {
                if nu_degree.rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Formal sum Σ c·[g]·A + Σ c·[g]·B.
#[derive(Clone, Debug, Default)]
pub struct SymExpr {
    pub a: HashMap<GammaElt, Rat>,
    pub b: HashMap<GammaElt, Rat>,
}

fn map_add(m: &mut HashMap<GammaElt, Rat>, g: GammaElt, c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(g.clone()).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&g);
    }
}

impl SymExpr {
    pub fn zero() -> Self {
        SymExpr::default()
    }

    /// The unknown A itself.
    pub fn unit_a(field: &FieldRef) -> Self {
        let mut e = SymExpr::zero();
        map_add(&mut e.a, GammaElt::identity(field), Rat::one());
        e
    }

    /// The unknown B itself.
    pub fn unit_b(field: &FieldRef) -> Self {
        let mut e = SymExpr::zero();
        map_add(&mut e.b, GammaElt::identity(field), Rat::one());
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &o.a {
            map_add(&mut out.a, g.clone(), c.clone());
        }
        for (g, c) in &o.b {
            map_add(&mut out.b, g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return SymExpr::zero();
        }
        SymExpr {
            a: self.a.iter().map(|(g, v)| (g.clone(), v * c)).collect(),
            b: self.b.iter().map(|(g, v)| (g.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// Left multiplication by c·[g].
    pub fn apply(&self, c: &Rat, g: &GammaElt) -> Self {
        let mut out = SymExpr::zero();
        for (h, v) in &self.a {
            map_add(&mut out.a, g.mul(h), v * c);
        }
        for (h, v) in &self.b {
            map_add(&mut out.b, g.mul(h), v * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.values().all(|c| c.is_zero()) && self.b.values().all(|c| c.is_zero())
    }

    /// Canonical form modulo the right action of the stabilizers: A is
    /// fixed by σν and B by στ, so [g]·A = [g·σν]·A and
    /// [g]·B = [g·στ]·B = [g·(στ)²]·B. Each term is replaced by the
    /// smallest member of its orbit.
    pub fn normalize(&self, field: &FieldRef) -> Self {
        let gens = generators(field);
        let sn = gens.sigma.mul(&gens.nu);
        let st = gens.sigma.mul(&gens.tau);
        let st2 = st.mul(&st);
        let key = |g: &GammaElt| -> Vec<(Rat, Rat)> {
            g.m.iter().map(|e| (e.a.clone(), e.b.clone())).collect()
        };
        let min_orbit = |g: &GammaElt, orbit: &[GammaElt]| -> GammaElt {
            let mut best = g.clone();
            let mut bk = key(g);
            for h in orbit {
                let cand = g.mul(h);
                let ck = key(&cand);
                if ck < bk {
                    bk = ck;
                    best = cand;
                }
            }
            best
        };
        let mut out = SymExpr::zero();
        for (g, c) in &self.a {
            map_add(&mut out.a, min_orbit(g, std::slice::from_ref(&sn)), c.clone());
        }
        for (g, c) in &self.b {
            map_add(&mut out.b, min_orbit(g, &[st.clone(), st2.clone()]), c.clone());
        }
        out
    }

    /// Equality modulo the stabilizer actions above — the notion of
    /// equality appropriate for values applied to admissible (A, B).
    pub fn equiv(&self, o: &Self) -> bool {
        let field = match self.a.keys().next().or_else(|| self.b.keys().next()) {
            Some(g) => g.field().clone(),
            None => match o.a.keys().next().or_else(|| o.b.keys().next()) {
                Some(g) => g.field().clone(),
                None => return true,
            },
        };
        let d = self.add(&o.neg()).normalize(&field);
        d.is_zero()
    }
}

/// The materialized value: M_A·A + M_B·B with dim V × dim V matrices.
#[derive(Clone, Debug)]
pub struct LinExpr {
    pub ma: Mat<QuadElt>,
    pub mb: Mat<QuadElt>,
}

/// Scalar det(g)^{-l1/2}·conj(det g)^{-l2/2} of the canonical
/// representative; the product with the untwisted tensor action is the
/// twisted action and does not depend on the representative.
fn twist_scalar(w: &WeightPair, g: &GammaElt) -> QuadElt {
    let det = g.det();
    let di = det.inv().expect("invertible");
    let dci = det.conj().inv().expect("invertible");
    let mut s = QuadElt::one(g.field());
    for _ in 0..w.l1 / 2 {
        s = s.mul(&di);
    }
    for _ in 0..w.l2 / 2 {
        s = s.mul(&dci);
    }
    s
}

/// Materializes a formal sum at the given weights. With `pre` set, every
/// term [g] is materialized as the untwisted action of pre·g times the
/// twist scalar of g alone — the combination used by the Hecke sum where
/// `pre` is a coset representative inverse of non-unit determinant.
pub fn materialize(
    field: &FieldRef,
    w: &WeightPair,
    expr: &SymExpr,
    pre: Option<&[QuadElt; 4]>,
) -> Result<LinExpr> {
    let ring = QuadField(field.clone());
    let n = w.dim();
    let mut ma = Mat::zeros(&ring, n, n);
    let mut mb = Mat::zeros(&ring, n, n);
    let accumulate = |target: &mut Mat<QuadElt>,
                          g: &GammaElt,
                          c: &Rat|
     -> Result<()> {
        let tw = twist_scalar(w, g);
        let gm = match pre {
            None => g.m.clone(),
            Some(p) => {
                let [a, b, cc, d] = p;
                let [e, f, gg, h] = &g.m;
                [
                    a.mul(e).add(&b.mul(gg)),
                    a.mul(f).add(&b.mul(h)),
                    cc.mul(e).add(&d.mul(gg)),
                    cc.mul(f).add(&d.mul(h)),
                ]
            }
        };
        let rho = rho_pair(w, field, &gm, false)?;
        let scale = tw.mul_rat(c);
        for i in 0..n {
            for j in 0..n {
                if rho.at(i, j).is_zero() {
                    continue;
                }
                let t = rho.at(i, j).mul(&scale);
                *target.at_mut(i, j) = target.at(i, j).add(&t);
            }
        }
        Ok(())
    };
    for (g, c) in &expr.a {
        accumulate(&mut ma, g, c)?;
    }
    for (g, c) in &expr.b {
        accumulate(&mut mb, g, c)?;
    }
    Ok(LinExpr { ma, mb })
}

/// One parabolic block of an alternating normal form, cached with its
/// normal-form data [[ε^a, x], [0, 1]].
#[derive(Clone, Debug)]
struct Block {
    g: GammaElt,
    a: i64,
    x: QuadElt,
}

impl Block {
    fn new(g: GammaElt) -> Result<Self> {
        let (a, x) = g.upper_normal_form()?;
        Ok(Block { g, a, x })
    }

    fn from_parts(field: &FieldRef, a: i64, x: &QuadElt) -> Self {
        let u = QuadElt::eps_pow(field, a);
        let g = GammaElt::new(
            field,
            [u, x.clone(), QuadElt::zero(field), QuadElt::one(field)],
        );
        Block { g, a, x: x.clone() }
    }

    fn key(&self) -> (i64, Rat, Rat) {
        (self.a, self.x.a.clone(), self.x.b.clone())
    }
}

/// A relation in alternating normal form σ̃p̃₁σ̃p̃₂⋯σ̃p̃_m together with a
/// verified proof token that it evaluates to the identity.
#[derive(Clone, Debug)]
pub struct RelWord {
    blocks: Vec<Block>,
    field: FieldRef,
}

impl RelWord {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn product(&self) -> GammaElt {
        let gens = generators(&self.field);
        let mut acc = GammaElt::identity(&self.field);
        for b in &self.blocks {
            acc = acc.mul(&gens.sigma).mul(&b.g);
        }
        acc
    }

    fn assert_relation(&self) -> Result<()> {
        if self.blocks.is_empty() || self.product().is_identity() {
            Ok(())
        } else {
            Err(Error::NotARelation)
        }
    }

    fn memo_key(&self) -> Vec<(i64, Rat, Rat)> {
        self.blocks.iter().map(|b| b.key()).collect()
    }
}

/// Prefix transform (sign·coefficient, group element) applied to reduced
/// values when rotating or splitting words.
#[derive(Clone, Debug)]
struct Xf {
    c: Rat,
    g: GammaElt,
}

impl Xf {
    fn identity(field: &FieldRef) -> Self {
        Xf { c: Rat::one(), g: GammaElt::identity(field) }
    }

    fn apply(&self, e: &SymExpr) -> SymExpr {
        e.apply(&self.c, &self.g)
    }

    fn compose(&self, o: &Xf) -> Xf {
        Xf { c: &self.c * &o.c, g: self.g.mul(&o.g) }
    }
}

/// The reduction engine with memoization per (field, mode).
pub struct Reducer {
    pub field: FieldRef,
    pub mode: Mode,
    memo: RefCell<HashMap<Vec<(i64, Rat, Rat)>, SymExpr>>,
    fail_memo: RefCell<HashMap<Vec<(i64, Rat, Rat)>, usize>>,
    in_progress: RefCell<HashSet<Vec<(i64, Rat, Rat)>>>,
    b_memo: RefCell<HashMap<(bool, i64), SymExpr>>,
    budget: RefCell<usize>,
    pub trace: RefCell<Vec<String>>,
    pub tracing: bool,
}

impl Reducer {
    pub fn new(field: &FieldRef, mode: Mode) -> Self {
        Reducer {
            field: field.clone(),
            mode,
            memo: RefCell::new(HashMap::new()),
            fail_memo: RefCell::new(HashMap::new()),
            in_progress: RefCell::new(HashSet::new()),
            b_memo: RefCell::new(HashMap::new()),
            budget: RefCell::new(0),
            trace: RefCell::new(Vec::new()),
            tracing: false,
        }
    }

    fn log(&self, msg: impl FnOnce() -> String) {
        if self.tracing {
            self.trace.borrow_mut().push(msg());
        }
    }

    fn gens(&self) -> crate::modgroup::GeneratorSet {
        generators(&self.field)
    }

    // ------------------------------------------------------------------
    // primitive closed forms
    // ------------------------------------------------------------------

    /// Value on (σ̃ν̃^n)²: a geometric sum of powers of ν acting on A,
    /// with alternating signs in minus mode.
    pub fn two_term(&self, n: i64) -> SymExpr {
        let mut out = SymExpr::zero();
        if n == 0 {
            return out;
        }
        let gens = self.gens();
        if n > 0 {
            for i in 0..n {
                let sign = match self.mode {
                    Mode::Plus => Rat::one(),
                    Mode::Minus => {
                        if i % 2 == 0 {
                            Rat::one()
                        } else {
                            -Rat::one()
                        }
                    }
                };
                map_add(&mut out.a, gens.nu.pow(-i), sign);
            }
        } else {
            let m = -n;
            for i in 1..=m {
                let sign = match self.mode {
                    Mode::Plus => -Rat::one(),
                    Mode::Minus => {
                        if i % 2 == 1 {
                            Rat::one()
                        } else {
                            -Rat::one()
                        }
                    }
                };
                map_add(&mut out.a, gens.nu.pow(i), sign);
            }
        }
        out
    }

    /// Value on the unit-translation torsion word
    /// σ̃T̃(t)σ̃T̃(t^{−1})σ̃T̃(t)·d̃(t) for a unit t; B(1) = B.
    pub fn b_of_unit(&self, t: &QuadElt) -> Result<SymExpr> {
        let (neg, k) = t.decompose_unit().ok_or_else(|| {
            Error::AssertionFailed("unit-translation value of a non-unit".into())
        })?;
        self.b_of_unit_rec(neg, k)
    }

    /// The basic torsion word for a unit t as a free-group word:
    /// σ̃T̃(t)σ̃T̃(t^{-1})σ̃T̃(t)·d̃(t).
    fn b_word(&self, t: &QuadElt) -> Result<Word> {
        let field = &self.field;
        let mut w = Word::gen(Gen::S, 1);
        w = w.concat(&crate::modgroup::p_lift(&GammaElt::translation(field, t))?);
        w.push(Gen::S, 1);
        w = w.concat(&crate::modgroup::p_lift(&GammaElt::translation(
            field,
            &t.inv().unwrap(),
        ))?);
        w.push(Gen::S, 1);
        w = w.concat(&crate::modgroup::p_lift(&GammaElt::translation(field, t))?);
        w = w.concat(&crate::modgroup::p_lift(&GammaElt::dilation(field, t))?);
        Ok(w)
    }

    fn b_of_unit_rec(&self, neg: bool, k: i64) -> Result<SymExpr> {
        if let Some(v) = self.b_memo.borrow().get(&(neg, k)) {
            return Ok(v.clone());
        }
        let field = &self.field;
        let gens = self.gens();
        let one = Rat::one();
        let t = {
            let base = QuadElt::eps_pow(field, k);
            if neg {
                base.neg()
            } else {
                base
            }
        };
        let val = if !neg && k == 0 {
            SymExpr::unit_b(field)
        } else if neg {
            // Inverting the torsion word of −t^{-1} and rotating gives
            // the torsion word of t:
            //   B(t) = −[d(t^{-1})·T(−t)]·B(−t^{-1}).
            let s = t.inv().unwrap().neg(); // = −t^{-1}, positive sign
            debug_assert!(s.sign_at(1) == std::cmp::Ordering::Greater);
            let bs = self.b_of_unit(&s)?;
            let d = GammaElt::dilation(field, &t.inv().unwrap());
            let pre = d.mul(&GammaElt::translation(field, &t.neg()));
            bs.apply(&-one, &pre)
        } else {
            // Conjugating the torsion word of t by ν̃^{∓1} lands, after
            // consolidating dilations, on the torsion word of ε^{∓1}t:
            //   ±sign·ν^{±1}·B(t) = value(ν̃^{±1} W_b(t) ν̃^{∓1}),
            // and the right-hand side reduces through B(ε^{∓1}t), whose
            // exponent is strictly closer to zero.
            let e = if k > 0 { 1 } else { -1 };
            let mut w = Word::gen(Gen::N, e);
            w = w.concat(&self.b_word(&t)?);
            w.push(Gen::N, -e);
            let conj = self.reduce_word_internal(&w)?;
            let sign = Rat::from_integer(self.mode.conj_sign(e).into());
            conj.apply(&sign, &gens.nu.pow(-e))
        };
        self.b_memo.borrow_mut().insert((neg, k), val.clone());
        Ok(val)
    }

    /// Sign ε₀(u) for u = ±ε^a: +1 in plus mode, (−1)^a in minus mode.
    fn eps0(&self, a: i64) -> Rat {
        match self.mode {
            Mode::Plus => Rat::one(),
            Mode::Minus => {
                if a.rem_euclid(2) == 0 {
                    Rat::one()
                } else {
                    -Rat::one()
                }
            }
        }
    }

    /// Value on a genuine three-block relation. The dilation parts are
    /// shifted into the last block, after which the relation constraints
    /// force the shape σ̃T̃(t)σ̃T̃(t^{-1})σ̃T̃(t)d̃(t) of the basic
    /// unit-translation torsion word.
    /// Value on a genuine three-block relation: the dilation parts are
    /// consolidated into the final block by forward shifts, after which
    /// the relation constraints force the shape
    /// σ̃T̃(t)σ̃T̃(t^{-1})σ̃T̃(t)d̃(t) of the basic unit-translation
    /// torsion word.
    fn three_term(&self, rel: &RelWord, _depth: usize) -> Result<SymExpr> {
        let gens = self.gens();
        let field = &self.field;
        let mut acc = SymExpr::zero();
        let mut xf = Xf::identity(field);
        let mut cur = rel.clone();
        for _round in 0..6 {
            let dil: Vec<usize> = (0..3).filter(|&i| cur.blocks[i].a != 0).collect();
            if dil.len() <= 1 {
                // rotate the dilation block (if any) to the end
                let target = dil.first().copied().unwrap_or(2);
                let (x2, r) = self.rotate(&cur, (target + 1) % 3);
                let b = &r.blocks;
                let t = b[0].x.clone();
                if b[0].a != 0 || b[1].a != 0 || !t.is_unit() {
                    return Err(Error::NotARelation);
                }
                let t2 = t.mul(&t);
                let (_, k2) = t2.decompose_unit().ok_or(Error::NotARelation)?;
                if b[1].x != t.inv().unwrap() || b[2].a != k2 || b[2].x != t {
                    return Err(Error::NotARelation);
                }
                let val = self.b_of_unit(&t)?;
                return Ok(acc.add(&xf.apply(&x2.apply(&val))));
            }
            // forward-shift the first dilation block into its successor
            let i = dil[0];
            let (x2, r) = self.rotate(&cur, i);
            let t = r.blocks[0].a;
            let pre = gens
                .sigma
                .mul(&GammaElt::translation(field, &r.blocks[0].x))
                .mul(&gens.sigma);
            let head = self.two_term(t).apply(&Rat::one(), &pre);
            let inner = self.nu_shift_fwd_inner_word(&r)?;
            if !inner.product().is_identity() {
                return Err(Error::AssertionFailed("dilation shift broke the relation".into()));
            }
            acc = acc.add(&xf.apply(&x2.apply(&head)));
            xf = xf.compose(&x2);
            cur = inner;
        }
        Err(Error::ReductionStuck { terms: 3 })
    }

    // ------------------------------------------------------------------
    // word-level reduction
    // ------------------------------------------------------------------

    /// Builds an alternating normal form from a free-group word that
    /// evaluates to the identity, returning the prefix transform and the
    /// block list.
    fn normal_form(&self, word: &Word) -> Result<(Xf, RelWord)> {
        let field = &self.field;
        if !word.evaluate(field).is_identity() {
            return Err(Error::NotARelation);
        }
        let gens = self.gens();
        // split into segments between σ̃ letters
        let mut segments: Vec<(GammaElt, i64)> = vec![(GammaElt::identity(field), 0)];
        let mut sigma_count = 0usize;
        for &(g, e) in &word.runs {
            match g {
                Gen::S => {
                    for _ in 0..e.unsigned_abs() {
                        segments.push((GammaElt::identity(field), 0));
                        sigma_count += 1;
                    }
                }
                Gen::N => {
                    let last = segments.last_mut().unwrap();
                    last.0 = last.0.mul(&gens.nu.pow(e));
                    last.1 += e;
                }
                Gen::T => {
                    let last = segments.last_mut().unwrap();
                    last.0 = last.0.mul(&gens.tau.pow(e));
                }
            }
        }
        if sigma_count == 0 {
            // the word lies in the parabolic subgroup; its value vanishes
            return Ok((
                Xf::identity(field),
                RelWord { blocks: vec![], field: field.clone() },
            ));
        }
        // word = seg₀ σ̃ seg₁ σ̃ … σ̃ seg_k; rotate seg₀ to the end
        let seg0 = segments[0].clone();
        let mut blocks = Vec::with_capacity(sigma_count);
        for (i, (g, _)) in segments.iter().enumerate().skip(1) {
            let block_g = if i == sigma_count { g.mul(&seg0.0) } else { g.clone() };
            blocks.push(Block::new(block_g)?);
        }
        let sign = self.mode.conj_sign(seg0.1);
        let xf = Xf { c: Rat::from_integer(sign.into()), g: seg0.0 };
        let rel = RelWord { blocks, field: field.clone() };
        rel.assert_relation()?;
        Ok((xf, rel))
    }

    /// Reduces a relation given as a free-group word.
    pub fn reduce_word(&self, word: &Word) -> Result<SymExpr> {
        *self.budget.borrow_mut() = 200_000;
        self.reduce_word_internal(word)
    }

    /// Like `reduce_word` but without refreshing the node budget; used
    /// for recursive derivations inside the engine.
    fn reduce_word_internal(&self, word: &Word) -> Result<SymExpr> {
        let (xf, rel) = self.normal_form(word)?;
        let inner = self.reduce(&rel, 0)?;
        Ok(xf.apply(&inner))
    }

    /// Rotation taking block `i` (0-based) to the front.
    fn rotate(&self, rel: &RelWord, i: usize) -> (Xf, RelWord) {
        if i == 0 {
            return (Xf::identity(&self.field), rel.clone());
        }
        let gens = self.gens();
        let mut prefix = GammaElt::identity(&self.field);
        let mut nudeg = 0i64;
        for b in &rel.blocks[..i] {
            prefix = prefix.mul(&gens.sigma).mul(&b.g);
            nudeg += b.a;
        }
        let mut blocks = rel.blocks[i..].to_vec();
        blocks.extend_from_slice(&rel.blocks[..i]);
        let sign = self.mode.conj_sign(nudeg);
        (
            Xf { c: Rat::from_integer(sign.into()), g: prefix },
            RelWord { blocks, field: rel.field.clone() },
        )
    }

    /// Cyclic canonicalization: the rotation with the smallest key.
    fn canonical_rotation(&self, rel: &RelWord) -> usize {
        let m = rel.len();
        if m <= 1 {
            return 0;
        }
        let keys: Vec<(i64, Rat, Rat)> = rel.blocks.iter().map(|b| b.key()).collect();
        let mut best = 0usize;
        for r in 1..m {
            for j in 0..m {
                let a = &keys[(r + j) % m];
                let b = &keys[(best + j) % m];
                match a.cmp(b) {
                    std::cmp::Ordering::Less => {
                        best = r;
                        break;
                    }
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => continue,
                }
            }
        }
        best
    }

    fn reduce(&self, rel: &RelWord, depth: usize) -> Result<SymExpr> {
        self.reduce_lat(rel, depth, 0)
    }

    fn reduce_lat(&self, rel: &RelWord, depth: usize, lateral: usize) -> Result<SymExpr> {
        // rotate to the canonical representative of the cyclic class
        let r0 = self.canonical_rotation(rel);
        let (xf, canon) = self.rotate(rel, r0);
        let key = canon.memo_key();
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(xf.apply(v));
        }
        if let Some(&l0) = self.fail_memo.borrow().get(&key) {
            if lateral >= l0 {
                return Err(Error::ReductionStuck { terms: rel.len() });
            }
        }
        if depth > 48 || lateral > 6 {
            return Err(Error::ReductionStuck { terms: rel.len() });
        }
        {
            let mut budget = self.budget.borrow_mut();
            if *budget == 0 {
                return Err(Error::ReductionStuck { terms: rel.len() });
            }
            *budget -= 1;
        }
        if !self.in_progress.borrow_mut().insert(key.clone()) {
            return Err(Error::ReductionStuck { terms: rel.len() });
        }
        let out = self.reduce_inner(&canon, depth, lateral);
        self.in_progress.borrow_mut().remove(&key);
        match &out {
            Ok(v) => {
                self.memo.borrow_mut().insert(key, v.clone());
            }
            Err(_) => {
                // Failures found with budget left are genuine dead ends at
                // this lateral allowance; remember the smallest failing one.
                if *self.budget.borrow() > 0 && depth <= 40 {
                    let mut fm = self.fail_memo.borrow_mut();
                    let e = fm.entry(key).or_insert(lateral);
                    if lateral < *e {
                        *e = lateral;
                    }
                }
            }
        }
        out.map(|v| xf.apply(&v))
    }

    /// Complexity score used to order candidate moves: fewer blocks,
    /// more unit or zero translations, fewer dilation blocks, smaller
    /// norms first.
    fn word_score(&self, rel: &RelWord) -> (usize, i64, usize, Rat) {
        let m = rel.len();
        let mut easy = 0i64;
        let mut dil = 0usize;
        let mut norm_sum = Rat::zero();
        for b in &rel.blocks {
            let n = b.x.norm().abs();
            if b.x.is_zero() || n == Rat::one() {
                easy += 1;
            }
            if b.a != 0 {
                dil += 1;
            }
            norm_sum += n;
        }
        (m, -easy, dil, norm_sum)
    }

    fn reduce_inner(&self, rel: &RelWord, depth: usize, lateral: usize) -> Result<SymExpr> {
        let m = rel.len();
        let field = &self.field;
        match m {
            0 => return Ok(SymExpr::zero()),
            1 => return Err(Error::NotARelation),
            2 => {
                let b = &rel.blocks;
                if b[0].x.is_zero() && b[1].x.is_zero() && b[0].a == b[1].a {
                    return Ok(self.two_term(b[0].a));
                }
                return Err(Error::NotARelation);
            }
            3 => {
                return self.three_term(rel, depth);
            }
            _ => {}
        }

        // rule 1: collapse a zero-translation block (m → m−2);
        // unconditional progress, no branching needed
        if let Some(i) = rel.blocks.iter().position(|b| b.x.is_zero()) {
            self.log(|| format!("zero-collapse at {i} of m={m}"));
            let (xf, r) = self.rotate(rel, i);
            let val = self.collapse_front(&r, depth)?;
            return Ok(xf.apply(&val));
        }

        // Collect candidate branches: (score, action)
        enum Action {
            Unit(usize),
            Transmute(usize, QuadElt, QuadElt),
            NuShift(usize),
        }
        let mut branches: Vec<((usize, i64, usize, Rat), Action)> = Vec::new();

        for (i, b) in rel.blocks.iter().enumerate() {
            if b.x.is_unit() && b.a == 0 {
                // score the inner word of the unit reduction
                let (_, r) = self.rotate(rel, i);
                if let Ok(inner) = self.unit_inner_word(&r) {
                    branches.push((self.word_score(&inner), Action::Unit(i)));
                }
            }
            if b.a != 0 {
                // redistribute the dilation part toward a single block
                let (_, r) = self.rotate(rel, i);
                if let Ok(inner) = self.nu_shift_inner_word(&r) {
                    branches.push((self.word_score(&inner), Action::NuShift(i)));
                }
            }
            if b.a.rem_euclid(2) == 0 {
                let k = -b.a / 2;
                for u_neg in [false, true] {
                    if b.a == 0 && !u_neg {
                        continue; // u = 1 degenerate
                    }
                    let u = {
                        let base = QuadElt::eps_pow(field, k);
                        if u_neg {
                            base.neg()
                        } else {
                            base
                        }
                    };
                    let u2 = u.mul(&u);
                    let x = b.x.mul(&u2);
                    if x.is_zero() {
                        continue;
                    }
                    let one_minus_u = QuadElt::one(field).sub(&u);
                    if one_minus_u.is_zero() || !x.divides(&one_minus_u) {
                        continue;
                    }
                    let (_, r) = self.rotate(rel, i);
                    if let Ok(inner) = self.transmute_inner_word(&r, &x, &u) {
                        branches
                            .push((self.word_score(&inner), Action::Transmute(i, x, u)));
                    }
                }
            }
        }
        branches.sort_by(|a, b| a.0.cmp(&b.0));

        let mut last_err: Option<Error> = None;
        for (_, action) in branches {
            let res = match &action {
                Action::Unit(i) => {
                    let (xf, r) = self.rotate(rel, *i);
                    self.unit_reduce_front(&r, depth).map(|v| xf.apply(&v))
                }
                Action::Transmute(i, x, u) => self.transmute(rel, *i, x, u, depth, lateral),
                Action::NuShift(i) => {
                    let (xf, r) = self.rotate(rel, *i);
                    self.nu_shift_front(&r, depth, lateral).map(|v| xf.apply(&v))
                }
            };
            match res {
                Ok(val) => {
                    self.log(|| match &action {
                        Action::Unit(i) => format!("unit-reduce at {i} of m={m}"),
                        Action::Transmute(i, _, _) => format!("transmute at {i} of m={m}"),
                        Action::NuShift(i) => format!("nu-shift at {i} of m={m}"),
                    });
                    return Ok(val);
                }
                Err(e) => last_err = Some(e),
            }
        }

        // last resort: exponent shift on a pure family word
        if m == 4 {
            match self.shift_four_term(rel, depth) {
                Ok(val) => return Ok(val),
                Err(e) => last_err = Some(e),
            }
        }

        self.log(|| {
            let ks: Vec<String> = rel
                .blocks
                .iter()
                .map(|b| format!("[a={} x={} N={}]", b.a, b.x, b.x.norm()))
                .collect();
            format!("STUCK m={m}: {}", ks.join(" "))
        });
        Err(last_err.unwrap_or(Error::ReductionStuck { terms: m }))
    }

    /// Inner word of the unit reduction at the front, for scoring.
    fn unit_inner_word(&self, rel: &RelWord) -> Result<RelWord> {
        let field = &self.field;
        let m = rel.len();
        let p1 = &rel.blocks[0];
        if p1.a != 0 {
            return Err(Error::ReductionStuck { terms: m });
        }
        let v = p1.x.clone();
        let v_inv = v.inv().unwrap();
        let p_mat = GammaElt::new(
            field,
            [v.neg(), QuadElt::one(field), QuadElt::zero(field), v_inv.neg()],
        );
        let t_out = GammaElt::translation(field, &v_inv.neg());
        let mut blocks = Vec::with_capacity(m - 1);
        blocks.push(Block::new(p_mat.mul(&rel.blocks[1].g))?);
        for b in &rel.blocks[2..m - 1] {
            blocks.push(b.clone());
        }
        blocks.push(Block::new(rel.blocks[m - 1].g.mul(&t_out))?);
        Ok(RelWord { blocks, field: field.clone() })
    }

    /// Result word of the forward dilation shift at the front: using the
    /// factorization g₁ = T(x₁)·ν^{a₁}, the dilation moves across the
    /// following σ̃ into block 2.
    fn nu_shift_fwd_inner_word(&self, rel: &RelWord) -> Result<RelWord> {
        let field = &self.field;
        let gens = self.gens();
        let m = rel.len();
        let t = rel.blocks[0].a;
        let mut blocks = Vec::with_capacity(m);
        blocks.push(Block::new(GammaElt::translation(field, &rel.blocks[0].x))?);
        blocks.push(Block::new(gens.nu.pow(-t).mul(&rel.blocks[1].g))?);
        for b in &rel.blocks[2..] {
            blocks.push(b.clone());
        }
        Ok(RelWord { blocks, field: field.clone() })
    }

    /// Forward dilation shift: σ̃·T̃(x)ν̃^{a}·σ̃·w = [conj]·(σ̃ν̃^{a})² ·
    /// σ̃T̃(x)σ̃·ν̃^{-a}w, so the value picks up a conjugated geometric sum
    /// and the dilation migrates into the following block.
    fn nu_shift_fwd_front(&self, rel: &RelWord, depth: usize, lateral: usize) -> Result<SymExpr> {
        let gens = self.gens();
        let field = &self.field;
        let t = rel.blocks[0].a;
        debug_assert!(t != 0);
        let pre = gens.sigma.mul(&GammaElt::translation(field, &rel.blocks[0].x)).mul(&gens.sigma);
        let head = self.two_term(t).apply(&Rat::one(), &pre);
        let inner = self.nu_shift_fwd_inner_word(rel)?;
        if !inner.product().is_identity() {
            return Err(Error::AssertionFailed("forward dilation shift broke the relation".into()));
        }
        let val = self.reduce_lat(&inner, depth + 1, lateral + 1)?;
        Ok(head.add(&val))
    }

    /// Result word of the dilation shift at the front: the leading block
    /// becomes a pure translation and the last block absorbs ν^{-a}.
    fn nu_shift_inner_word(&self, rel: &RelWord) -> Result<RelWord> {
        let field = &self.field;
        let gens = self.gens();
        let m = rel.len();
        let t = rel.blocks[0].a;
        let mut blocks = Vec::with_capacity(m);
        blocks.push(Block::new(gens.nu.pow(-t).mul(&rel.blocks[0].g))?);
        for b in &rel.blocks[1..] {
            blocks.push(b.clone());
        }
        let last = blocks.len() - 1;
        blocks[last] = Block::new(blocks[last].g.mul(&gens.nu.pow(-t)))?;
        Ok(RelWord { blocks, field: field.clone() })
    }

    /// Shift the full dilation part of the leading block to the tail of
    /// the previous (cyclically, the last) block:
    /// σ̃ν̃^{t}X = (σ̃ν̃^{t})²·ν̃^{-t}·σ̃^{-1}·X.
    fn nu_shift_front(&self, rel: &RelWord, depth: usize, lateral: usize) -> Result<SymExpr> {
        let gens = self.gens();
        let t = rel.blocks[0].a;
        debug_assert!(t != 0);
        let head = self.two_term(t);
        let inner = self.nu_shift_inner_word(rel)?;
        if !inner.product().is_identity() {
            return Err(Error::AssertionFailed("dilation shift broke the relation".into()));
        }
        let val = self.reduce_lat(&inner, depth + 1, lateral + 1)?;
        let sign = Rat::from_integer(self.mode.conj_sign(-t).into());
        Ok(head.add(&val.apply(&sign, &gens.nu.pow(-t))))
    }

    /// Result word of the transmutation at the front, for scoring.
    fn transmute_inner_word(&self, r: &RelWord, x: &QuadElt, u: &QuadElt) -> Result<RelWord> {
        let field = &self.field;
        let m = r.len();
        let y1 = QuadElt::one(field).sub(u).div(x).expect("x nonzero");
        let y2 = x.div(u).expect("unit").neg();
        let y3 = u.mul(&y1).neg();
        let t3 = GammaElt::translation(field, &y3.neg());
        let mut blocks = Vec::with_capacity(m);
        blocks.push(Block::new(GammaElt::translation(field, &y2.neg()))?);
        blocks.push(Block::new(
            GammaElt::translation(field, &y1.neg()).mul(&r.blocks[1].g),
        )?);
        for b in &r.blocks[2..m] {
            blocks.push(b.clone());
        }
        let last = blocks.len() - 1;
        blocks[last] = Block::new(blocks[last].g.mul(&t3))?;
        Ok(RelWord { blocks, field: field.clone() })
    }

    /// Collapse with the zero-translation block at the front:
    /// σ̃ν̃^aσ̃·rest = (σ̃ν̃^a)²·ν̃^{−a}·rest.
    fn collapse_front(&self, rel: &RelWord, depth: usize) -> Result<SymExpr> {
        let field = &self.field;
        let a = rel.blocks[0].a;
        debug_assert!(rel.blocks[0].x.is_zero());
        let head = self.two_term(a);
        // remaining word: ν^{-a}·p₂ σ̃ p₃ … σ̃ p_m, rotated to end on the
        // merged block p_m (prefix q = ν^{-a}p₂ picked out front)
        let gens = self.gens();
        let q = gens.nu.pow(-a).mul(&rel.blocks[1].g);
        let q_block = Block::new(q.clone())?;
        let mut blocks: Vec<Block> = rel.blocks[2..].to_vec();
        if blocks.is_empty() {
            // m = 2 handled before; defensive
            return Ok(head);
        }
        let last = blocks.len() - 1;
        blocks[last] = Block::new(blocks[last].g.mul(&q))?;
        let inner = RelWord { blocks, field: field.clone() };
        debug_assert!(inner.product().is_identity());
        let sign = self.mode.conj_sign(q_block.a);
        let val = self.reduce_lat(&inner, depth + 1, 0)?;
        Ok(head.add(&val.apply(&Rat::from_integer(sign.into()), &q)))
    }

    /// Unit reduction with a pure unit-translation block at the front
    /// (m → m−1), through the unit-translation exchange relation
    /// σ̃T̃(v)σ̃ = W_E(v)·T̃(−v^{-1})·σ̃·P̃(v) with
    /// P(v) = [[−v, 1], [0, −v^{-1}]] and W_E(v) a three-block relation
    /// whose value reduces to the basic torsion word of v^{-1}.
    fn unit_reduce_front(&self, rel: &RelWord, depth: usize) -> Result<SymExpr> {
        let field = &self.field;
        let m = rel.len();
        debug_assert!(m >= 4);
        let p1 = &rel.blocks[0];
        if p1.a != 0 {
            return Err(Error::ReductionStuck { terms: m });
        }
        let v = p1.x.clone();
        debug_assert!(v.is_unit());
        let v_inv = v.inv().unwrap();
        let p_mat = GammaElt::new(
            field,
            [v.neg(), QuadElt::one(field), QuadElt::zero(field), v_inv.neg()],
        );
        // value of W_E(v): blocks [T(v)], [P(v)^{-1}], [T(v^{-1})]
        let we = RelWord {
            blocks: vec![
                Block::new(GammaElt::translation(field, &v))?,
                Block::new(p_mat.inv())?,
                Block::new(GammaElt::translation(field, &v_inv))?,
            ],
            field: field.clone(),
        };
        debug_assert!(we.product().is_identity());
        let we_val = self.three_term(&we, depth)?;
        // remaining word: [T(−v^{-1})]·(blocks [P(v)p₂], p₃, …, [p_m·T(−v^{-1})])
        let t_out = GammaElt::translation(field, &v_inv.neg());
        let mut blocks = Vec::with_capacity(m - 1);
        blocks.push(Block::new(p_mat.mul(&rel.blocks[1].g))?);
        for b in &rel.blocks[2..m - 1] {
            blocks.push(b.clone());
        }
        blocks.push(Block::new(rel.blocks[m - 1].g.mul(&t_out))?);
        let inner = RelWord { blocks, field: field.clone() };
        if !inner.product().is_identity() {
            return Err(Error::AssertionFailed("unit reduction broke the relation".into()));
        }
        let val = self.reduce_lat(&inner, depth + 1, 0)?;
        Ok(we_val.add(&val.apply(&Rat::one(), &t_out)))
    }

    /// The four-block family word for parameters (x, u) with x | 1 − u:
    /// blocks [T(y₁)], [T(y₂)], [T(y₃)], [d(u^{-1})T(x)], where
    /// y₁ = (1−u)/x, y₂ = −x/u, y₃ = −u(1−u)/x.
    fn family_word(&self, x: &QuadElt, u: &QuadElt) -> Result<RelWord> {
        let field = &self.field;
        let y1 = QuadElt::one(field).sub(u).div(x).expect("x nonzero");
        let y2 = x.div(u).expect("unit").neg();
        let y3 = u.mul(&y1).neg();
        let d_mat = GammaElt::new(
            field,
            [
                u.inv().unwrap(),
                QuadElt::zero(field),
                QuadElt::zero(field),
                u.clone(),
            ],
        );
        let last = d_mat.mul(&GammaElt::translation(field, x));
        let rel = RelWord {
            blocks: vec![
                Block::new(GammaElt::translation(field, &y1))?,
                Block::new(GammaElt::translation(field, &y2))?,
                Block::new(GammaElt::translation(field, &y3))?,
                Block::new(last)?,
            ],
            field: field.clone(),
        };
        if !rel.product().is_identity() {
            return Err(Error::AssertionFailed("family word is not a relation".into()));
        }
        Ok(rel)
    }

    /// Value of the full family relation T̃(x)σ̃T̃(y₁)σ̃T̃(y₂)σ̃T̃(y₃)σ̃D̃:
    /// [T(x)] applied to the value of the rotated normal form.
    fn family_value(&self, x: &QuadElt, u: &QuadElt, depth: usize) -> Result<SymExpr> {
        let rel = self.family_word(x, u)?;
        let val = self.reduce_lat(&rel, depth + 1, 0)?;
        Ok(val.apply(&Rat::one(), &GammaElt::translation(&self.field, x)))
    }

    /// Transmutes block i, recognized as d(u^{-1})·T(x), through the
    /// family relation: the block becomes T(−y₂), its neighbors absorb
    /// T(−y₃) and T(−y₁), and the family value is added.
    fn transmute(
        &self,
        rel: &RelWord,
        i: usize,
        x: &QuadElt,
        u: &QuadElt,
        depth: usize,
        lateral: usize,
    ) -> Result<SymExpr> {
        let field = &self.field;
        let gens = self.gens();
        let (xf, r) = self.rotate(rel, i);
        // r = σ̃ Ã σ̃ p₂ … σ̃ p_m with A = d(u^{-1})T(x)
        let y1 = QuadElt::one(field).sub(u).div(x).expect("x nonzero");
        let y3 = u.mul(&y1).neg();
        // cost: [σ·d(u^{-1})·T(x)]·(family value)
        let d_mat = GammaElt::new(
            field,
            [
                u.inv().unwrap(),
                QuadElt::zero(field),
                QuadElt::zero(field),
                u.clone(),
            ],
        );
        let fam = self.family_value(x, u, depth)?;
        let cost = fam.apply(&Rat::one(), &gens.sigma.mul(&d_mat));
        // new word: T̃(−y₃)σ̃T̃(−y₂)σ̃T̃(−y₁)·p₂σ̃…σ̃p_m
        //   rotated: blocks [T(−y₂)], [T(−y₁)p₂], p₃, …, [p_m·T(−y₃)]
        let t3 = GammaElt::translation(field, &y3.neg());
        let inner = self.transmute_inner_word(&r, x, u)?;
        if !inner.product().is_identity() {
            return Err(Error::AssertionFailed("transmutation broke the relation".into()));
        }
        let val = self.reduce_lat(&inner, depth + 1, lateral + 1)?;
        // prefix transform for the remaining word: [T(−y₃)] (ν-degree 0)
        let rest = val.apply(&Rat::one(), &t3);
        Ok(xf.apply(&cost.add(&rest)))
    }

    /// Exponent shift for a pure family word {x, u₀^e}: expresses its
    /// value through {x, u₀} and a shorter shift, recursing on |e|.
    fn shift_four_term(&self, rel: &RelWord, depth: usize) -> Result<SymExpr> {
        // recognize: rotate the unique dilation block to the end
        let dil: Vec<usize> = (0..4).filter(|&i| rel.blocks[i].a != 0).collect();
        if dil.len() != 1 {
            return Err(Error::ReductionStuck { terms: 4 });
        }
        let (xf, r) = self.rotate(rel, (dil[0] + 1) % 4);
        let field = &self.field;
        let b4 = &r.blocks[3];
        if b4.a.rem_euclid(2) != 0 {
            return Err(Error::ReductionStuck { terms: 4 });
        }
        let k = -b4.a / 2;
        for u_neg in [false, true] {
            let u_full = {
                let base = QuadElt::eps_pow(field, k);
                if u_neg {
                    base.neg()
                } else {
                    base
                }
            };
            let u2 = u_full.mul(&u_full);
            let x = b4.x.mul(&u2);
            // check the translation pattern
            let fam = match self.family_word(&x, &u_full) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let matches = (0..4).all(|j| fam.blocks[j].key() == r.blocks[j].key());
            if !matches {
                continue;
            }
            // find a base unit u₀ with x | 1 − u₀ and u_full = ±u₀^e
            let (fneg, fk) = u_full.decompose_unit().unwrap();
            for k0 in 1..=fk.abs().max(1) {
                if fk != 0 && (fk.abs() % k0 != 0) {
                    continue;
                }
                for n0 in [false, true] {
                    let mut u0 = QuadElt::eps_pow(field, if fk < 0 { -k0 } else { k0 });
                    if n0 {
                        u0 = u0.neg();
                    }
                    if u0.is_one() {
                        continue;
                    }
                    let e = if fk == 0 { 1 } else { fk.abs() / k0 };
                    // sign compatibility: u0^e must equal u_full
                    let mut p = QuadElt::one(field);
                    for _ in 0..e {
                        p = p.mul(&u0);
                    }
                    if p != u_full {
                        continue;
                    }
                    if e <= 1 {
                        continue;
                    }
                    let om = QuadElt::one(field).sub(&u0);
                    if om.is_zero() || !x.divides(&om) {
                        continue;
                    }
                    let _ = fneg;
                    match self.shift_step(&x, &u0, e, depth) {
                        Ok(v) => {
                            // v is the value of the full family word
                            // T̃(x)…; our r is the rotated form, so undo
                            // the leading [T(x)] prefix
                            let txi =
                                GammaElt::translation(field, &x).inv();
                            self.log(|| format!("shift four-term base e={e}"));
                            return Ok(xf.apply(&v.apply(&Rat::one(), &txi)));
                        }
                        Err(_) => continue,
                    }
                }
            }
        }
        Err(Error::ReductionStuck { terms: 4 })
    }

    /// Quantitative exponent shift: value of the family relation at
    /// (x, u^e) through the value at (x, u), a shifted family value, and
    /// geometric-sum corrections.
    fn shift_step(&self, x: &QuadElt, u: &QuadElt, e: i64, depth: usize) -> Result<SymExpr> {
        let field = &self.field;
        let gens = self.gens();
        if e == 1 {
            return self.family_value(x, u, depth);
        }
        if e == 0 {
            // the word at u⁰ = 1 has a zero translation and collapses
            return self.family_value(x, &QuadElt::one(field), depth);
        }
        let (_, ku) = u.decompose_unit().unwrap();
        let upow = |j: i64| -> QuadElt {
            let mut p = QuadElt::one(field);
            let base = if j >= 0 { u.clone() } else { u.inv().unwrap() };
            for _ in 0..j.unsigned_abs() {
                p = p.mul(&base);
            }
            p
        };
        let ue = upow(e);
        // base value
        let base = self.family_value(x, u, depth)?;
        // conjugator σ·[[u^{-1}, u^{-e+1}(1−u^e)/x], [0, u]]·σ
        let frac = QuadElt::one(field).sub(&ue).div(x).expect("x nonzero");
        let m1 = GammaElt::new(
            field,
            [
                u.inv().unwrap(),
                upow(1 - e).mul(&frac),
                QuadElt::zero(field),
                u.clone(),
            ],
        );
        let pre = gens.sigma.mul(&m1).mul(&gens.sigma);
        // shifted family value at (−u^{e−2}x, u^{e−1})
        let x_shift = upow(e - 2).mul(x).neg();
        let shifted = self.shift_step(&x_shift, u, e - 1, depth)?;
        let t_shift = GammaElt::translation(field, &upow(e - 2).mul(x));
        let term2 = shifted.apply(&Rat::one(), &pre.mul(&t_shift));
        // − [σ·M₁·σ]·value((σ̃ d̃(u^{1−e}))²)
        let term3 = self.two_term(2 * (1 - e) * ku).apply(&-Rat::one(), &pre);
        // + [σ·d(u^{-e})]·value((σ̃ d̃(u^{-e}))²)
        let d_ue = GammaElt::dilation(field, &upow(-e));
        let term4 = self.two_term(-2 * e * ku).apply(&Rat::one(), &gens.sigma.mul(&d_ue));
        // − [σ·d(u^{-1})]·value((σ̃ d̃(u^{-1}))²)
        let d_u = GammaElt::dilation(field, &u.inv().unwrap());
        let term5 = self.two_term(-2 * ku).apply(&-Rat::one(), &gens.sigma.mul(&d_u));
        Ok(base.add(&term2).add(&term3).add(&term4).add(&term5))
    }

    /// Public entry: value on the relation word, in this mode.
    pub fn reduce_relation(&self, word: &Word) -> Result<SymExpr> {
        self.reduce_word(word)
    }

    /// Test hook: reduces the word once along every available first move
    /// and returns the values, labeled. Path independence means they all
    /// agree modulo the stabilizer normalization.
    pub fn reduce_word_all_first_moves(&self, word: &Word) -> Result<Vec<(String, SymExpr)>> {
        let (xf, rel) = self.normal_form(word)?;
        *self.budget.borrow_mut() = 200_000;
        let m = rel.len();
        if m < 4 {
            return Ok(vec![("base".into(), xf.apply(&self.reduce(&rel, 0)?))]);
        }
        let field = &self.field;
        let mut out = Vec::new();
        for (i, b) in rel.blocks.iter().enumerate() {
            if b.x.is_zero() {
                let (x2, r) = self.rotate(&rel, i);
                if let Ok(v) = self.collapse_front(&r, 0) {
                    out.push((format!("zero@{i}"), xf.apply(&x2.apply(&v))));
                }
                continue;
            }
            if b.x.is_unit() && b.a == 0 {
                let (x2, r) = self.rotate(&rel, i);
                if let Ok(v) = self.unit_reduce_front(&r, 0) {
                    out.push((format!("unit@{i}"), xf.apply(&x2.apply(&v))));
                }
            }
            if b.a != 0 {
                let (x2, r) = self.rotate(&rel, i);
                if let Ok(v) = self.nu_shift_front(&r, 0, 0) {
                    out.push((format!("nushift@{i}"), xf.apply(&x2.apply(&v))));
                }
            }
            if b.a.rem_euclid(2) == 0 {
                let k = -b.a / 2;
                for u_neg in [false, true] {
                    if b.a == 0 && !u_neg {
                        continue;
                    }
                    let u = {
                        let base = QuadElt::eps_pow(field, k);
                        if u_neg {
                            base.neg()
                        } else {
                            base
                        }
                    };
                    let u2 = u.mul(&u);
                    let x = b.x.mul(&u2);
                    if x.is_zero() {
                        continue;
                    }
                    let omu = QuadElt::one(field).sub(&u);
                    if omu.is_zero() || !x.divides(&omu) {
                        continue;
                    }
                    if let Ok(v) = self.transmute(&rel, i, &x, &u, 0, 0) {
                        out.push((format!("transmute@{i},neg={u_neg}"), xf.apply(&v)));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quad::quad_field;
    use crate::exact::rat::rat_int;

    fn f5() -> FieldRef {
        quad_field(5).unwrap()
    }
    fn f13() -> FieldRef {
        quad_field(13).unwrap()
    }

    fn word_sn_pow2(n: i64) -> Word {
        // (σ̃ν̃^n)²
        let mut w = Word::empty();
        for _ in 0..2 {
            w.push(Gen::S, 1);
            w.push(Gen::N, n);
        }
        w
    }

    fn word_st_pow3() -> Word {
        let mut w = Word::empty();
        for _ in 0..3 {
            w.push(Gen::S, 1);
            w.push(Gen::T, 1);
        }
        w
    }

    #[test]
    fn basic_unknowns() {
        for f in [f5(), f13()] {
            let r = Reducer::new(&f, Mode::Plus);
            let a = r.reduce_word(&word_sn_pow2(1)).unwrap();
            assert!(a.equiv(&SymExpr::unit_a(&f)));
            let b = r.reduce_word(&word_st_pow3()).unwrap();
            assert!(b.equiv(&SymExpr::unit_b(&f)));
        }
    }

    #[test]
    fn two_term_formulas() {
        let f = f5();
        let r = Reducer::new(&f, Mode::Plus);
        let gens = generators(&f);
        // n = 2, plus: (1 + ν^{-1})A
        let v = r.reduce_word(&word_sn_pow2(2)).unwrap();
        let mut expect = SymExpr::unit_a(&f);
        map_add(&mut expect.a, gens.nu.inv(), rat_int(1));
        assert!(v.equiv(&expect));
        // n = 2, minus: (1 − ν^{-1})A
        let rm = Reducer::new(&f, Mode::Minus);
        let v = rm.reduce_word(&word_sn_pow2(2)).unwrap();
        let mut expect = SymExpr::unit_a(&f);
        map_add(&mut expect.a, gens.nu.inv(), rat_int(-1));
        assert!(v.equiv(&expect));
    }

    #[test]
    fn negative_torsion_word() {
        // (σ̃τ̃^{-1})³ reduces to −[σ]·B
        let f = f5();
        let r = Reducer::new(&f, Mode::Plus);
        let gens = generators(&f);
        let mut w = Word::empty();
        for _ in 0..3 {
            w.push(Gen::S, 1);
            w.push(Gen::T, -1);
        }
        let v = r.reduce_word(&w).unwrap();
        let mut expect = SymExpr::zero();
        map_add(&mut expect.b, gens.sigma.clone(), rat_int(-1));
        assert!(v.equiv(&expect));
    }

    #[test]
    fn all_zero_translations_collapse() {
        // σ̃ν̃σ̃ν̃^{-1}σ̃ν̃σ̃ν̃^{-1}… : compose units with x = 0 into a
        // genuine relation: (σ̃ν̃)²(σ̃ν̃)² rearranged as a 4-block word
        let f = f5();
        let r = Reducer::new(&f, Mode::Plus);
        let mut w = Word::empty();
        for _ in 0..4 {
            w.push(Gen::S, 1);
            w.push(Gen::N, 1);
        }
        // (σ̃ν̃)⁴ = ((σ̃ν̃)²)² has value (1 + [σν-conj…])·A; just check it
        // reduces and is 2A-consistent: φ(r²) = (1 + action of r)·φ(r),
        // and the action of (σν)² is trivial, so the value is 2A.
        let v = r.reduce_word(&w).unwrap();
        let expect = SymExpr::unit_a(&f).scale(&rat_int(2));
        assert!(v.equiv(&expect));
    }

    #[test]
    fn inversion_negates() {
        let f = f5();
        let r = Reducer::new(&f, Mode::Plus);
        let w = word_st_pow3();
        let v = r.reduce_word(&w).unwrap();
        let vi = r.reduce_word(&w.inverse()).unwrap();
        assert!(vi.equiv(&v.neg()));
    }

    #[test]
    fn conjugation_equivariance_symbolic() {
        // φ(g̃ r g̃^{-1}) = ±ρ(g)·φ(r) for generator conjugators
        let f = f5();
        for mode in [Mode::Plus, Mode::Minus] {
            let r = Reducer::new(&f, mode);
            let gens = generators(&f);
            let base = word_st_pow3();
            for (g_word, g_elt, nudeg) in [
                (Word::gen(Gen::T, 1), gens.tau.clone(), 0i64),
                (Word::gen(Gen::N, 1), gens.nu.clone(), 1),
                (Word::gen(Gen::S, 1), gens.sigma.clone(), 0),
                (Word::mu(1), gens.mu.clone(), 2),
            ] {
                let conj = g_word.concat(&base).concat(&g_word.inverse());
                let v = r.reduce_word(&conj).unwrap();
                let sign = Rat::from_integer(mode.conj_sign(nudeg).into());
                let expect = r.reduce_word(&base).unwrap().apply(&sign, &g_elt);
                assert!(v.equiv(&expect), "conjugation by {:?} mode {:?}", g_elt, mode);
            }
        }
    }

    #[test]
    fn unit_exchange_relation_value() {
        // the three-block relation obtained from the unit-translation
        // exchange at t = 1 is a rotation of (σ̃τ̃)³; its value is a
        // transform of B
        let f = f13();
        let r = Reducer::new(&f, Mode::Plus);
        let gens = generators(&f);
        // word: T̃(-1)·σ̃·T̃(-1)·σ̃·T̃(-1)·σ̃ == rotation of (σ̃T̃(-1))³
        let mut w = Word::empty();
        for _ in 0..3 {
            w.push(Gen::T, -1);
            w.push(Gen::S, 1);
        }
        let v = r.reduce_word(&w).unwrap();
        // φ((σ̃T(-1))³) = −[σ]B, rotated by T(-1): value = [T(-1)σ]… —
        // just compare against the direct reduction of the rotated word.
        let mut w2 = Word::empty();
        for _ in 0..3 {
            w2.push(Gen::S, 1);
            w2.push(Gen::T, -1);
        }
        let direct = r.reduce_word(&w2).unwrap();
        let expect = direct.apply(&Rat::one(), &gens.tau.inv());
        assert!(v.equiv(&expect));
    }

    #[test]
    fn torsion_probe_reduces_d5() {
        // the order-three companion for D = 5 coming from the Hecke
        // operator at 2
        let f = f5();
        let gens = generators(&f);
        let x = GammaElt::new(
            &f,
            [
                QuadElt::eps(&f),
                QuadElt::eps(&f).mul(&QuadElt::eps(&f)).neg(),
                QuadElt::from_ints(&f, 2, 0),
                QuadElt::eps(&f).mul(&QuadElt::eps(&f)).neg(),
            ],
        )
        .mul(&gens.tau);
        assert!(x.pow(3).is_identity());
        let lift = crate::modgroup::tilde_lift(&x).unwrap();
        let w = lift.concat(&lift).concat(&lift);
        for mode in [Mode::Plus, Mode::Minus] {
            let r = Reducer::new(&f, mode);
            let v = r.reduce_word(&w).unwrap();
            assert!(!v.a.is_empty() || !v.b.is_empty());
        }
    }

    #[test]
    fn torsion_probe_reduces_d13() {
        let f = f13();
        let gens = generators(&f);
        // x = σ [[ε^{-1}, 2ε−7], [0, ε]] σ [[1, −2ε], [0, 1]]: the word is
        // built from the factored presentation (σ̃ p̃ σ̃ q̃)³
        let p = GammaElt::new(
            &f,
            [
                QuadElt::eps(&f).inv().unwrap(),
                QuadElt::from_ints(&f, -7, 2),
                QuadElt::zero(&f),
                QuadElt::eps(&f),
            ],
        );
        let q = GammaElt::translation(&f, &QuadElt::from_ints(&f, 0, -2));
        let x = gens.sigma.mul(&p).mul(&gens.sigma).mul(&q);
        assert!(x.pow(3).is_identity());
        let mut period = Word::gen(Gen::S, 1);
        period = period.concat(&crate::modgroup::p_lift(&p).unwrap());
        period.push(Gen::S, 1);
        period = period.concat(&crate::modgroup::p_lift(&q).unwrap());
        let w = period.concat(&period).concat(&period);
        let r = Reducer::new(&f, Mode::Plus);
        let v = r.reduce_word(&w).unwrap();
        assert!(!v.a.is_empty() || !v.b.is_empty());
    }
}
