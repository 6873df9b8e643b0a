//! Assembly of the constraint space Z_A^± and the coboundary space
//! B_A^±, verification of the B-zeroing facts, the Hecke matrix on the
//! quotient, and the ratio reports extracted through the ζ-maps.

use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::extfield::{minpoly, ExtElt, QuotRing};
use crate::exact::factor::factor_over_q;
use crate::exact::mat::{charpoly_rat, kernel, quotient_basis, rank, solve_many, Mat, Subspace};
use crate::exact::poly::Poly;
use crate::exact::quad::{FieldRef, QuadElt, QuadField};
use crate::exact::quadext::QuadExt;
use crate::exact::rat::{Rat, RatField};
use crate::hecke::{materialize_psi, psi_triple, CosetReps};
use crate::modgroup::{generators, p_lift, tilde_lift, GammaElt, Gen, Word};
use crate::relred::{materialize, Mode, Reducer, SymExpr};
use crate::symrep::{rho_pair, WeightPair};

/// Plus or minus part of the cohomology under the ν-action.
pub type Part = Mode;

/// The order-three probe element and its relation word.
#[derive(Clone, Debug)]
pub struct TorsionProbe {
    pub x: GammaElt,
    /// lift word of one period; the relation is its cube
    pub period: Word,
}

impl TorsionProbe {
    pub fn relation_word(&self) -> Word {
        self.period.concat(&self.period).concat(&self.period)
    }
}

/// The torsion element used for the extra constraint, together with its
/// relation word built from the factored presentation.
pub fn torsion_probe(field: &FieldRef) -> Result<TorsionProbe> {
    let gens = generators(field);
    let (x, period) = match field.d {
        5 => {
            // [[ε, −ε²], [2, −ε²]] · τ
            let eps = QuadElt::eps(field);
            let e2 = eps.mul(&eps);
            let m = GammaElt::new(
                field,
                [eps, e2.neg(), QuadElt::from_ints(field, 2, 0), e2.neg()],
            );
            let x = m.mul(&gens.tau);
            let period = tilde_lift(&m)?.concat(&Word::gen(Gen::T, 1));
            (x, period)
        }
        13 => {
            // σ [[ε^{-1}, 2ε−7], [0, ε]] σ [[1, −2ε], [0, 1]]
            let p = GammaElt::new(
                field,
                [
                    QuadElt::eps(field).inv().unwrap(),
                    QuadElt::from_ints(field, -7, 2),
                    QuadElt::zero(field),
                    QuadElt::eps(field),
                ],
            );
            let q = GammaElt::translation(field, &QuadElt::from_ints(field, 0, -2));
            let x = gens.sigma.mul(&p).mul(&gens.sigma).mul(&q);
            let mut period = Word::gen(Gen::S, 1);
            period = period.concat(&p_lift(&p)?);
            period.push(Gen::S, 1);
            period = period.concat(&p_lift(&q)?);
            (x, period)
        }
        d => return Err(Error::UnsupportedField(d)),
    };
    if !x.pow(3).is_identity() {
        return Err(Error::AssertionFailed("torsion element is not of order three".into()));
    }
    if period.evaluate(field) != x {
        return Err(Error::AssertionFailed("torsion word does not evaluate to x".into()));
    }
    Ok(TorsionProbe { x, period })
}

/// The constraint space, coboundary space, and a quotient basis.
#[derive(Clone)]
pub struct ClassSpace {
    pub part: Part,
    pub weights: WeightPair,
    pub field: FieldRef,
    pub z: Subspace<QuadElt>,
    pub b: Subspace<QuadElt>,
    pub q: Subspace<QuadElt>,
}

fn rho_elt(w: &WeightPair, field: &FieldRef, g: &GammaElt) -> Result<Mat<QuadElt>> {
    rho_pair(w, field, &g.m, true)
}

/// Constraint space Z_A^±: kernel of (ρ′(σν) ∓ 1), (ρ′(δ) − 1), and the
/// torsion constraint (ρ′(x) − 1)·M_A(value of the torsion relation).
pub fn assemble_z(
    reducer: &Reducer,
    w: &WeightPair,
    probe: &TorsionProbe,
) -> Result<Subspace<QuadElt>> {
    let field = &reducer.field;
    let ring = QuadField(field.clone());
    let gens = generators(field);
    let n = w.dim();
    let id = Mat::identity(&ring, n);

    let sn = rho_elt(w, field, &gens.sigma.mul(&gens.nu))?;
    let c1 = match reducer.mode {
        Mode::Plus => sn.sub(&ring, &id),
        Mode::Minus => sn.add(&ring, &id),
    };
    let delta_m = rho_pair(w, field, &generators(field).delta.m, true)?;
    let c2 = delta_m.sub(&ring, &id);

    let z3 = reducer.reduce_word(&probe.relation_word())?;
    // the coboundary unknown is taken to vanish here; only the action on
    // the remaining unknown matters
    let z3a = materialize(field, w, &SymExpr { a: z3.a.clone(), b: Default::default() }, None)?;
    let x_m = rho_elt(w, field, &probe.x)?;
    let c3 = x_m.sub(&ring, &id).mul(&ring, &z3a.ma);

    let stacked = Mat::stack_rows(&[&c1, &c2, &c3]);
    kernel(&ring, &stacked)
}

/// Symbolic 1-cochain evaluation: value of h on a word over σ̃, ν̃, τ̃ as
/// an n×3n block matrix [H_S | H_T | H_U] acting on stacked (S, T, U).
fn cochain_eval_plus(
    w: &WeightPair,
    field: &FieldRef,
    word: &Word,
) -> Result<Mat<QuadElt>> {
    let ring = QuadField(field.clone());
    let n = w.dim();
    let gens = generators(field);
    let mut h = Mat::zeros(&ring, n, 3 * n);
    let mut prefix = Mat::identity(&ring, n);
    let add_block = |h: &mut Mat<QuadElt>, prefix: &Mat<QuadElt>, slot: usize, sign: bool| {
        for i in 0..n {
            for j in 0..n {
                let v = prefix.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let c = h.at(i, slot * n + j).clone();
                *h.at_mut(i, slot * n + j) = if sign { c.sub(v) } else { c.add(v) };
            }
        }
    };
    for &(g, e) in &word.runs {
        let (slot, base) = match g {
            Gen::S => (0usize, gens.sigma.clone()),
            Gen::T => (1, gens.tau.clone()),
            Gen::N => (2, gens.nu.clone()),
        };
        let base_m = rho_elt(w, field, &base)?;
        let step = if e >= 0 {
            base_m
        } else {
            rho_elt(w, field, &base.inv())?
        };
        for _ in 0..e.unsigned_abs() {
            if e >= 0 {
                // h(w·g) = h(w) + ρ(w)·h(g)
                add_block(&mut h, &prefix, slot, false);
                prefix = prefix.mul(&ring, &step);
            } else {
                // h(w·g^{-1}) = h(w) − ρ(w·g^{-1})·h(g)
                prefix = prefix.mul(&ring, &step);
                add_block(&mut h, &prefix, slot, true);
            }
        }
    }
    Ok(h)
}

/// Rewrites an even-ν-degree word over the five generators of the
/// index-two subgroup: σ̃, τ̃, μ̃ = ν̃², ν̃σ̃ν̃^{-1}, ν̃τ̃ν̃^{-1}, using the
/// transversal {1, ν̃}.
fn rewrite_five(word: &Word) -> Result<Vec<(usize, i64)>> {
    // generator indices: 0 σ̃, 1 τ̃, 2 μ̃, 3 ν̃σ̃ν̃^{-1}, 4 ν̃τ̃ν̃^{-1}
    let mut out: Vec<(usize, i64)> = Vec::new();
    let mut state = 0i64; // ν-parity of the current prefix, 0 or 1
    let mut nu_excess = 0i64; // full ν-exponent carried (in units of ν²)
    // We scan letters and emit: at state s, reading generator g produces
    // rep_s · g · rep_{s'}^{-1} with rep_0 = 1, rep_1 = ν̃.
    // ν-powers are accumulated and flushed as μ̃^k when even.
    let mut push = |out: &mut Vec<(usize, i64)>, g: usize, e: i64| {
        if e == 0 {
            return;
        }
        if let Some(last) = out.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
                return;
            }
        }
        out.push((g, e));
    };
    for &(g, e) in &word.runs {
        match g {
            Gen::N => {
                nu_excess += e;
                // flush pairs of ν as μ̃^{±1}
                let new_state = (state + e).rem_euclid(2);
                let flush = (nu_excess - new_state) / 2;
                push(&mut out, 2, flush);
                nu_excess = new_state;
                state = new_state;
            }
            Gen::S => {
                let idx = if state == 0 { 0 } else { 3 };
                for _ in 0..e.unsigned_abs() {
                    push(&mut out, idx, e.signum());
                }
            }
            Gen::T => {
                let idx = if state == 0 { 1 } else { 4 };
                push(&mut out, idx, e);
            }
        }
    }
    if state != 0 || nu_excess != 0 {
        return Err(Error::AssertionFailed("word has odd nu degree".into()));
    }
    Ok(out)
}

/// Minus-mode cochain evaluation over (S, T, U): the values on the five
/// generators are S, T, (1−ν^{-1})U, −νS + (ν^{-1} − ν³σ)U,
/// −νT + (ν^{-1} − ντν^{-2})U.
fn cochain_eval_minus(
    w: &WeightPair,
    field: &FieldRef,
    word: &Word,
) -> Result<Mat<QuadElt>> {
    let ring = QuadField(field.clone());
    let n = w.dim();
    let gens = generators(field);
    let rho = |g: &GammaElt| rho_elt(w, field, g);
    let id = Mat::identity(&ring, n);
    let zero = Mat::zeros(&ring, n, n);

    let nu = rho(&gens.nu)?;
    let nu_i = rho(&gens.nu.inv())?;
    let sigma = rho(&gens.sigma)?;
    // generator value blocks (H_S, H_T, H_U) for each of the 5 generators
    let mu_u = id.sub(&ring, &nu_i);
    let nsn_s = nu.neg(&ring);
    let nsn_u = nu_i.sub(&ring, &rho(&gens.nu.pow(3))?.mul(&ring, &sigma));
    let ntn_t = nu.neg(&ring);
    let ntn_u = nu_i.sub(&ring, &rho(&gens.nu.mul(&gens.tau).mul(&gens.nu.pow(-2)))?);
    let gen_vals: [(Mat<QuadElt>, Mat<QuadElt>, Mat<QuadElt>); 5] = [
        (id.clone(), zero.clone(), zero.clone()),
        (zero.clone(), id.clone(), zero.clone()),
        (zero.clone(), zero.clone(), mu_u),
        (nsn_s, zero.clone(), nsn_u),
        (zero.clone(), ntn_t, ntn_u),
    ];
    // the five generators as group elements
    let gen_elts = [
        gens.sigma.clone(),
        gens.tau.clone(),
        gens.mu.clone(),
        gens.nu.mul(&gens.sigma).mul(&gens.nu.inv()),
        gens.eta.clone(),
    ];

    let letters = rewrite_five(word)?;
    let mut h = Mat::zeros(&ring, n, 3 * n);
    let mut prefix = Mat::identity(&ring, n);
    for (idx, e) in letters {
        let count = e.unsigned_abs();
        for _ in 0..count {
            let (vs, vt, vu) = &gen_vals[idx];
            if e >= 0 {
                // h(w·g) = h(w) + ρ(w) h(g)
                let add = [
                    prefix.mul(&ring, vs),
                    prefix.mul(&ring, vt),
                    prefix.mul(&ring, vu),
                ];
                for (slot, a) in add.iter().enumerate() {
                    for i in 0..n {
                        for j in 0..n {
                            if a.at(i, j).is_zero() {
                                continue;
                            }
                            let c = h.at(i, slot * n + j).add(a.at(i, j));
                            *h.at_mut(i, slot * n + j) = c;
                        }
                    }
                }
                prefix = prefix.mul(&ring, &rho(&gen_elts[idx])?);
            } else {
                // h(w·g^{-1}) = h(w) − ρ(w g^{-1}) h(g)
                prefix = prefix.mul(&ring, &rho(&gen_elts[idx].inv())?);
                let add = [
                    prefix.mul(&ring, vs),
                    prefix.mul(&ring, vt),
                    prefix.mul(&ring, vu),
                ];
                for (slot, a) in add.iter().enumerate() {
                    for i in 0..n {
                        for j in 0..n {
                            if a.at(i, j).is_zero() {
                                continue;
                            }
                            let c = h.at(i, slot * n + j).sub(a.at(i, j));
                            *h.at_mut(i, slot * n + j) = c;
                        }
                    }
                }
            }
        }
    }
    Ok(h)
}

fn cochain_eval(
    mode: Mode,
    w: &WeightPair,
    field: &FieldRef,
    word: &Word,
) -> Result<Mat<QuadElt>> {
    match mode {
        Mode::Plus => cochain_eval_plus(w, field, word),
        Mode::Minus => cochain_eval_minus(w, field, word),
    }
}

/// The presentation relator words.
fn relator_words(field: &FieldRef) -> [Word; 5] {
    let mut r1 = Word::gen(Gen::S, 2);
    let r2 = {
        let mut w = Word::empty();
        for _ in 0..3 {
            w.push(Gen::S, 1);
            w.push(Gen::T, 1);
        }
        w
    };
    let r3 = {
        let mut w = Word::empty();
        for _ in 0..2 {
            w.push(Gen::S, 1);
            w.push(Gen::N, 1);
        }
        w
    };
    // τνsegún τ ν^{-1} (ν τ ν^{-1} τ)^{-1}
    let r4 = {
        let mut w = Word::gen(Gen::T, 1);
        w.push(Gen::N, 1);
        w.push(Gen::T, 1);
        w.push(Gen::N, -1);
        let mut rhs = Word::gen(Gen::N, 1);
        rhs.push(Gen::T, 1);
        rhs.push(Gen::N, -1);
        rhs.push(Gen::T, 1);
        w.concat(&rhs.inverse())
    };
    // ν²τν^{-2} (τ^A (ντν^{-1})^B)^{-1}
    let r5 = {
        let mut w = Word::gen(Gen::N, 2);
        w.push(Gen::T, 1);
        w.push(Gen::N, -2);
        let mut rhs = Word::gen(Gen::T, field.rel_a);
        rhs = rhs.concat(&Word::eta(field.rel_b));
        w.concat(&rhs.inverse())
    };
    let _ = &mut r1;
    [r1, r2, r3, r4, r5]
}

/// Constraint rows for the admissible cochain family of the given mode:
/// vanishing on the two parabolic relators, plus δ-stability on all
/// relators.
fn cochain_constraints(
    mode: Mode,
    w: &WeightPair,
    field: &FieldRef,
    delta_stable: bool,
) -> Result<Mat<QuadElt>> {
    let ring = QuadField(field.clone());
    let [r1, r2, r3, r4, r5] = relator_words(field);
    let mut rows: Vec<Mat<QuadElt>> = Vec::new();
    rows.push(cochain_eval(mode, w, field, &r4)?);
    rows.push(cochain_eval(mode, w, field, &r5)?);
    if delta_stable {
        // (ρ′(δ)^{-1}·h(r_δ) − h(r)) = 0 for every relator
        let delta_m = rho_pair(w, field, &generators(field).delta.m, true)?;
        let delta_i = rho_pair(w, field, &generators(field).delta.inv().m, true)?;
        let _ = delta_m;
        for r in [&r1, &r2, &r3, &r4, &r5] {
            let h = cochain_eval(mode, w, field, r)?;
            let hd = cochain_eval(mode, w, field, &r.delta_twist())?;
            rows.push(delta_i.mul(&ring, &hd).sub(&ring, &h));
        }
    }
    let refs: Vec<&Mat<QuadElt>> = rows.iter().collect();
    Ok(Mat::stack_rows(&refs))
}

/// The value maps of the admissible family on the three probes, as
/// n×3n block matrices.
struct CochainMaps {
    on_sigma_sq: Mat<QuadElt>,
    on_torsion_b: Mat<QuadElt>,
    on_torsion_a: Mat<QuadElt>,
}

fn cochain_maps(mode: Mode, w: &WeightPair, field: &FieldRef) -> Result<CochainMaps> {
    let [r1, r2, r3, _, _] = relator_words(field);
    Ok(CochainMaps {
        on_sigma_sq: cochain_eval(mode, w, field, &r1)?,
        on_torsion_b: cochain_eval(mode, w, field, &r2)?,
        on_torsion_a: cochain_eval(mode, w, field, &r3)?,
    })
}

/// Coboundary space B_A^±: the image of the A-probe value map over the
/// admissible δ-stable cochain family.
pub fn assemble_b(
    mode: Mode,
    w: &WeightPair,
    field: &FieldRef,
    z: &Subspace<QuadElt>,
) -> Result<Subspace<QuadElt>> {
    let ring = QuadField(field.clone());
    let n = w.dim();
    let maps = cochain_maps(mode, w, field)?;
    // family constraints: vanish on the parabolic relators, on σ̃², on
    // the torsion relator, and δ-stability of the A-probe value
    let base = cochain_constraints(mode, w, field, false)?;
    let delta_m = rho_pair(w, field, &generators(field).delta.m, true)?;
    let id = Mat::identity(&ring, n);
    let delta_cond = delta_m.sub(&ring, &id).mul(&ring, &maps.on_torsion_a);
    let stacked = Mat::stack_rows(&[
        &base,
        &maps.on_sigma_sq,
        &maps.on_torsion_b,
        &delta_cond,
    ]);
    let fam = kernel(&ring, &stacked)?;
    // B = span of the A-probe values over the family
    let mut image: Vec<Vec<QuadElt>> = Vec::new();
    for v in &fam.basis {
        image.push(maps.on_torsion_a.mul_vec(&ring, v));
    }
    let img_mat = Mat::from_fn(image.len().max(1), n, |i, j| {
        if i < image.len() {
            image[i][j].clone()
        } else {
            QuadElt::zero(field)
        }
    });
    let col = crate::exact::mat::column_space(
        &ring,
        &Mat::from_fn(n, image.len().max(1), |i, j| {
            if j < image.len() {
                image[j][i].clone()
            } else {
                QuadElt::zero(field)
            }
        }),
    )?;
    let _ = img_mat;
    // containment in Z
    for (i, v) in col.basis.iter().enumerate() {
        if !z.contains(&ring, v) {
            let _ = i;
            return Err(Error::SubspaceViolation);
        }
    }
    Ok(col)
}

/// Every value compatible with the torsion-probe invariances must be
/// realizable by an admissible coboundary; this is the hypothesis under
/// which the constraint assembly drops the second unknown.
pub fn verify_fact_zeroing(mode: Mode, w: &WeightPair, field: &FieldRef) -> Result<bool> {
    let ring = QuadField(field.clone());
    let n = w.dim();
    let gens = generators(field);
    let maps = cochain_maps(mode, w, field)?;
    // admissible family: vanishing on parabolic relators + δ-stability
    let constraints = cochain_constraints(mode, w, field, true)?;
    let fam = kernel(&ring, &constraints)?;
    // achievable B-values
    let mut image: Vec<Vec<QuadElt>> = Vec::new();
    for v in &fam.basis {
        image.push(maps.on_torsion_b.mul_vec(&ring, v));
    }
    let ncols = image.len().max(1);
    let img = crate::exact::mat::column_space(
        &ring,
        &Mat::from_fn(n, ncols, |i, j| {
            if j < image.len() {
                image[j][i].clone()
            } else {
                QuadElt::zero(field)
            }
        }),
    )?;
    // possible B-values: (στ)B = B and (δτ + 1)B = 0
    let id = Mat::identity(&ring, n);
    let st = rho_elt(w, field, &gens.sigma.mul(&gens.tau))?.sub(&ring, &id);
    let dt = rho_pair(w, field, &gens.delta.mul(&gens.tau).m, true)?.add(&ring, &id);
    let possible = kernel(&ring, &Mat::stack_rows(&[&st, &dt]))?;
    // containment: possible ⊆ image
    if possible.dim() == 0 {
        return Ok(true);
    }
    let img_dim = img.dim();
    let mut all = img.basis.clone();
    all.extend(possible.basis.iter().cloned());
    let mat = Mat::from_fn(all.len(), n, |i, j| all[i][j].clone());
    Ok(rank(&ring, &mat)? == img_dim)
}

/// Builds Z, B, and the quotient basis.
pub fn class_space(
    reducer: &Reducer,
    w: &WeightPair,
    probe: &TorsionProbe,
) -> Result<ClassSpace> {
    let field = &reducer.field;
    let ring = QuadField(field.clone());
    let z = assemble_z(reducer, w, probe)?;
    let b = assemble_b(reducer.mode, w, field, &z)?;
    let q = quotient_basis(&ring, &z, &b)?;
    Ok(ClassSpace {
        part: reducer.mode,
        weights: *w,
        field: field.clone(),
        z,
        b,
        q,
    })
}

/// The Hecke matrix on the quotient basis: the transformed triple is
/// renormalized by an admissible coboundary killing the values on σ̃²
/// and on the translation-torsion probe, and the corrected A-value is
/// reduced modulo B.
pub fn hecke_matrix(
    reducer: &Reducer,
    space: &ClassSpace,
    reps: &CosetReps,
) -> Result<Mat<Rat>> {
    let field = &space.field;
    let ring = QuadField(field.clone());
    let w = &space.weights;
    let n = w.dim();
    let dim_q = space.q.dim();
    if dim_q == 0 {
        return Ok(Mat { rows: 0, cols: 0, data: vec![] });
    }
    let triple = psi_triple(reducer, reps)?;
    let conj = triple.conj.as_ref();
    let em_c = materialize_psi(field, w, reps, &triple.c, conj.map(|c| &c.0))?;
    let em_a = materialize_psi(field, w, reps, &triple.a, conj.map(|c| &c.1))?;
    let em_b = materialize_psi(field, w, reps, &triple.b, conj.map(|c| &c.2))?;

    // normalization family: admissible cochain with prescribed values on
    // σ̃² and the translation torsion probe
    let maps = cochain_maps(reducer.mode, w, field)?;
    let constraints = cochain_constraints(reducer.mode, w, field, false)?;
    let system = Mat::stack_rows(&[&constraints, &maps.on_sigma_sq, &maps.on_torsion_b]);
    let zero_rows = constraints.rows;

    // right-hand sides per quotient basis vector
    let mut rhs = Vec::with_capacity(dim_q);
    for v in &space.q.basis {
        let cp = em_c.ma.mul_vec(&ring, v);
        let bp = em_b.ma.mul_vec(&ring, v);
        let mut r = vec![QuadElt::zero(field); zero_rows];
        r.extend(cp.iter().map(|x| x.neg()));
        r.extend(bp.iter().map(|x| x.neg()));
        rhs.push(r);
    }
    let sols = solve_many(&ring, &system, &rhs)?.ok_or(Error::NormalizationInfeasible {
        weights: (w.k1(), w.k2()),
    })?;

    // corrected A-values, reduced into quotient coordinates
    let mut basis_mat_cols: Vec<Vec<QuadElt>> = Vec::new();
    for bvec in &space.b.basis {
        basis_mat_cols.push(bvec.clone());
    }
    for qvec in &space.q.basis {
        basis_mat_cols.push(qvec.clone());
    }
    let basis_mat = Mat::from_fn(n, basis_mat_cols.len(), |i, j| basis_mat_cols[j][i].clone());
    let mut corrected = Vec::with_capacity(dim_q);
    for (v, s) in space.q.basis.iter().zip(&sols) {
        let ap = em_a.ma.mul_vec(&ring, v);
        let shift = maps.on_torsion_a.mul_vec(&ring, s);
        let total: Vec<QuadElt> = ap.iter().zip(&shift).map(|(a, b)| a.add(b)).collect();
        corrected.push(total);
    }
    let coords = solve_many(&ring, &basis_mat, &corrected)?
        .ok_or_else(|| Error::AssertionFailed("Hecke image left the constraint space".into()))?;
    let b_dim = space.b.dim();
    let mut out = Mat::zeros(&RatField, dim_q, dim_q);
    for (col, c) in coords.iter().enumerate() {
        for row in 0..dim_q {
            let entry = &c[b_dim + row];
            if !entry.b.is_zero() {
                return Err(Error::AssertionFailed(
                    "Hecke matrix entry is not rational".into(),
                ));
            }
            *out.at_mut(row, col) = entry.a.clone();
        }
    }
    Ok(out)
}

/// Position bookkeeping of the ζ-map: for critical m, the coefficient at
/// the diagonal basis vector e_{l1+2−m} ⊗ e'_{(l1+l2)/2+2−m} of
/// (1 ± ν^{-1})v lands in slot (l1+l2)/2+2−m (1-based).
pub fn critical_range(w: &WeightPair) -> (i64, i64) {
    let l1 = w.l1 as i64;
    let l2 = w.l2 as i64;
    ((l1 - l2) / 2 + 1, (l1 + l2) / 2 + 1)
}

/// The scalar (1 ± ν^{-1}) acts on the relevant diagonal positions by
/// 1 ± (−1)^{m−1−l1/2}; returns the multiplier for critical index m.
fn zeta_scalar(part: Part, w: &WeightPair, m: i64) -> i64 {
    let sign = if (m - 1 - (w.l1 as i64) / 2).rem_euclid(2) == 0 { 1 } else { -1 };
    match part {
        Mode::Plus => 1 + sign,
        Mode::Minus => 1 - sign,
    }
}

/// ζ-map over any coefficient ring: slot j (1-based, length l2+1)
/// receives the scaled component of v at the diagonal position.
pub fn zeta_map_generic<E: Clone, F: Fn(&E, i64) -> E>(
    part: Part,
    w: &WeightPair,
    v: &[E],
    scale: F,
    zero: E,
) -> Vec<E> {
    let l1 = w.l1 as i64;
    let l2 = w.l2 as i64;
    let mut out = vec![zero; (l2 + 1) as usize];
    let (lo, hi) = critical_range(w);
    for m in lo..=hi {
        let j = (l1 + l2) / 2 + 2 - m; // 1-based slot
        let i = l1 + 2 - m;
        let flat = w.flat(i as usize, j as usize);
        let c = zeta_scalar(part, w, m);
        out[(j - 1) as usize] = scale(&v[flat], c);
    }
    out
}

/// ζ-map on Q(√D)-vectors.
pub fn zeta_map(part: Part, w: &WeightPair, v: &[QuadElt]) -> Vec<QuadElt> {
    let field = v[0].field.clone();
    zeta_map_generic(
        part,
        w,
        v,
        |e, c| e.mul_rat(&Rat::from_integer(c.into())),
        QuadElt::zero(&field),
    )
}

// ---------------------------------------------------------------------
// report
// ---------------------------------------------------------------------

fn rat_pair(r: &Rat) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

/// One exact value in the eigenvalue field Q[x]/(poly): coordinates of
/// the representative, constant-first.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExtValue {
    pub poly: Vec<String>,
    pub coords: Vec<(String, String)>,
}

impl ExtValue {
    fn from_ext(e: &ExtElt) -> Self {
        ExtValue {
            poly: e
                .modulus
                .coeffs
                .iter()
                .map(|c| c.to_integer().to_string())
                .collect(),
            coords: e.coords().iter().map(rat_pair).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioEntry {
    pub m: i64,
    pub m_ref: i64,
    pub value: ExtValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenspaceReport {
    /// monic integer coefficients, constant first
    pub factor: Vec<String>,
    pub multiplicity: usize,
    /// ζ-vector of the eigenvector, normalized so the reference slot is 1
    pub zeta: Vec<ExtValue>,
    pub ratios: Vec<RatioEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimReport {
    #[serde(rename = "Z")]
    pub z: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub quotient: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub rep_choice_rules: String,
    pub normalization: String,
}

/// Per-weight ratio report: dimensions, Hecke characteristic polynomial,
/// and the exact critical-value ratios per eigenvalue factor.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub field: i64,
    pub weights: (u32, u32),
    pub part: String,
    pub hecke: String,
    pub dims: DimReport,
    /// integer coefficients of the characteristic polynomial, constant first
    pub charpoly: Vec<String>,
    pub eigenspaces: Vec<EigenspaceReport>,
    pub provenance: Provenance,
}

/// The reference index: the smallest critical m ≥ k1/2 (the center of
/// the functional equation) whose ζ-component of the eigenvector is
/// nonzero.
fn reference_index(part: Part, w: &WeightPair, zeta: &[QuadExt]) -> Option<i64> {
    let (lo, hi) = critical_range(w);
    let l1 = w.l1 as i64;
    let l2 = w.l2 as i64;
    let center = l1 / 2 + 1;
    let _ = part;
    let _ = lo;
    (center..=hi).find(|&m| {
        let j = (l1 + l2) / 2 + 2 - m;
        !zeta[(j - 1) as usize].is_zero()
    })
}

/// Full pipeline: spaces, Hecke matrix, characteristic polynomial,
/// factorization, eigenvectors over the factor fields, ζ-vectors, and
/// exact ratios against the reference index.
pub fn compute_report(
    reducer: &Reducer,
    w: &WeightPair,
    probe: &TorsionProbe,
    reps: &CosetReps,
) -> Result<RatioReport> {
    let field = &reducer.field;
    let space = class_space(reducer, w, probe)?;
    let hm = hecke_matrix(reducer, &space, reps)?;
    let cp = charpoly_rat(&hm)?;
    let cp_ints = cp
        .integer_coeffs()
        .ok_or_else(|| Error::AssertionFailed("characteristic polynomial not integral".into()))?;
    let factors = factor_over_q(&cp)?;
    let mut eigenspaces = Vec::new();
    let mut seen: Vec<Poly> = Vec::new();
    for g in &factors {
        if seen.contains(g) {
            continue;
        }
        seen.push(g.clone());
        let multiplicity = factors.iter().filter(|f| *f == g).count();
        eigenspaces.extend(eigen_report(&space, &hm, g, multiplicity)?);
    }
    Ok(RatioReport {
        field: field.d,
        weights: (w.k1(), w.k2()),
        part: match reducer.mode {
            Mode::Plus => "plus".into(),
            Mode::Minus => "minus".into(),
        },
        hecke: match &reps.pi {
            None => "identity".into(),
            Some(p) => format!("{}", p),
        },
        dims: DimReport { z: space.z.dim(), b: space.b.dim(), quotient: space.q.dim() },
        charpoly: cp_ints.iter().map(|c| c.to_string()).collect(),
        eigenspaces,
        provenance: Provenance {
            rep_choice_rules: "euclidean coset representatives; preference |α|+|β|, |α|, |β|, α≥0, β≥0".into(),
            normalization: "values on σ̃² and the translation torsion relation killed by an admissible coboundary; ratios R(m)/R(m_ref) carry the sign (−1)^{m−m_ref}".into(),
        },
    })
}

/// Reports for all eigenvectors attached to one irreducible factor.
fn eigen_report(
    space: &ClassSpace,
    hm: &Mat<Rat>,
    g: &Poly,
    multiplicity: usize,
) -> Result<Vec<EigenspaceReport>> {
    let w = &space.weights;
    let field = &space.field;
    let modulus = Rc::new(g.clone());
    let qring = QuotRing(modulus.clone());
    let dim_q = hm.rows;
    // kernel of (M − θ) over K = Q[x]/(g)
    let theta = ExtElt::gen(&modulus);
    let m_theta = Mat::from_fn(dim_q, dim_q, |i, j| {
        let base = ExtElt::from_rat(&modulus, hm.at(i, j).clone());
        if i == j {
            base.sub(&theta)
        } else {
            base
        }
    });
    let eig = kernel(&qring, &m_theta)?;
    if eig.dim() == 0 {
        return Err(Error::AssertionFailed("no eigenvector for a charpoly factor".into()));
    }
    let mut reports = Vec::new();
    for vec_k in &eig.basis {
        // A-vector over the compositum K(√D)
        let n = w.dim();
        let mut avec = vec![QuadExt::zero(&modulus, field.d); n];
        for (qi, coeff) in vec_k.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let ce = QuadExt::from_ext(coeff, field.d);
            for t in 0..n {
                let base = QuadExt::from_quad(&modulus, &space.q.basis[qi][t]);
                avec[t] = avec[t].add(&ce.mul(&base));
            }
        }
        let zeta = zeta_map_generic(
            space.part,
            w,
            &avec,
            |e, c| {
                let scale = QuadExt::from_ext(
                    &ExtElt::from_rat(&modulus, Rat::from_integer(c.into())),
                    field.d,
                );
                e.mul(&scale)
            },
            QuadExt::zero(&modulus, field.d),
        );
        let Some(m_ref) = reference_index(space.part, w, &zeta) else {
            // no usable component (e.g. zero quotient piece); skip
            continue;
        };
        let l1 = w.l1 as i64;
        let l2 = w.l2 as i64;
        let j_ref = ((l1 + l2) / 2 + 2 - m_ref - 1) as usize;
        let zref = zeta[j_ref].clone();
        let zref_inv = zref.inv()?;
        let zeta_norm: Vec<ExtElt> = zeta
            .iter()
            .map(|e| e.mul(&zref_inv).expect_rational_part())
            .collect::<Result<_>>()?;
        let (_, hi) = critical_range(w);
        let mut ratios = Vec::new();
        for m in (m_ref + 1)..=hi {
            let j = ((l1 + l2) / 2 + 2 - m - 1) as usize;
            if zeta_norm[j].is_zero() {
                continue;
            }
            // R(m)/R(m_ref) = (−1)^{m−m_ref}·ζ_{pos(m)}/ζ_{pos(m_ref)}
            let sign = if (m - m_ref).rem_euclid(2) == 0 { 1 } else { -1 };
            let value = ExtElt::from_rat(&modulus, Rat::from_integer(sign.into()))
                .mul(&zeta_norm[j]);
            ratios.push(RatioEntry { m, m_ref, value: ExtValue::from_ext(&value) });
        }
        reports.push(EigenspaceReport {
            factor: g
                .integer_coeffs()
                .expect("monic integer factor")
                .iter()
                .map(|c| c.to_string())
                .collect(),
            multiplicity,
            zeta: zeta_norm.iter().map(ExtValue::from_ext).collect(),
            ratios,
        });
    }
    Ok(reports)
}

/// Convenience: minimal polynomial of a reported ratio over Q.
pub fn ratio_minpoly(v: &ExtValue) -> Result<Poly> {
    let modulus = Rc::new(Poly::new(
        v.poly
            .iter()
            .map(|s| Rat::from_integer(s.parse::<BigInt>().unwrap()))
            .collect(),
    ));
    let coords: Vec<Rat> = v
        .coords
        .iter()
        .map(|(n, d)| Rat::new(n.parse().unwrap(), d.parse().unwrap()))
        .collect();
    let e = ExtElt::new(&modulus, Poly::new(coords));
    minpoly(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quad::quad_field;
    use crate::exact::rat::rat;

    #[test]
    fn torsion_probes_have_order_three() {
        for d in [5, 13] {
            let f = quad_field(d).unwrap();
            let p = torsion_probe(&f).unwrap();
            assert!(p.x.pow(3).is_identity());
            assert!(p.relation_word().evaluate(&f).is_identity());
        }
    }

    #[test]
    fn zeta_positions_and_parity() {
        let f = quad_field(5).unwrap();
        let w = WeightPair::new(8, 4).unwrap();
        // v = 0 maps to 0
        let v = vec![QuadElt::zero(&f); w.dim()];
        let z = zeta_map(Mode::Plus, &w, &v);
        assert_eq!(z.len(), 5);
        assert!(z.iter().all(|e| e.is_zero()));
        // alternating kill pattern: slots of the wrong parity get scalar 0
        let ones = vec![QuadElt::one(&f); w.dim()];
        let zp = zeta_map(Mode::Plus, &w, &ones);
        let zm = zeta_map(Mode::Minus, &w, &ones);
        for j in 0..5 {
            let plus_zero = zp[j].is_zero();
            let minus_zero = zm[j].is_zero();
            assert_ne!(plus_zero, minus_zero);
        }
    }

    #[test]
    fn example_small_weight_line() {
        // weights (10, 6): one-dimensional quotient with ζ-line through
        // (4, 0, 1, 0, 4), giving the ratio 4 between the two outer
        // critical values
        let f = quad_field(5).unwrap();
        let w = WeightPair::new(8, 4).unwrap();
        let red = Reducer::new(&f, Mode::Plus);
        let probe = torsion_probe(&f).unwrap();
        let space = class_space(&red, &w, &probe).unwrap();
        assert_eq!(space.q.dim(), 1);
        let zeta = zeta_map(Mode::Plus, &w, &space.q.basis[0]);
        // proportional to (4, 0, 1, 0, 4)
        assert!(!zeta[2].is_zero());
        let scale = zeta[2].clone();
        let normed: Vec<QuadElt> = zeta.iter().map(|e| e.div(&scale).unwrap()).collect();
        assert_eq!(normed[0], QuadElt::from_ints(&f, 4, 0));
        assert_eq!(normed[1], QuadElt::zero(&f));
        assert_eq!(normed[3], QuadElt::zero(&f));
        assert_eq!(normed[4], QuadElt::from_ints(&f, 4, 0));
        let _ = rat(1, 1);
    }
}
