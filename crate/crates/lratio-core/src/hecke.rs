//! Hecke operators on the presentation side: right-coset representatives
//! β_i for the double coset of diag(1, ϖ), the permutations they induce,
//! and the values of the transformed cocycle on the probe relations,
//! assembled as one symbolic expression per coset representative.

use crate::error::{Error, Result};
use crate::exact::mat::Mat;
use crate::exact::quad::{is_prime_element, residues_mod, FieldRef, QuadElt, QuadField};
use crate::exact::rat::Rat;
use crate::modgroup::{generators, p_lift, tilde_lift, GammaElt, Gen, Word};
use crate::relred::{materialize, LinExpr, Mode, Reducer, SymExpr};
use crate::symrep::{rho_pair, WeightPair};

/// Right-coset data for T(ϖ): matrices β_i with Γ*β_i covering the
/// double coset, d = N(ϖ) + 1 of them for prime ϖ.
#[derive(Clone, Debug)]
pub struct CosetReps {
    pub field: FieldRef,
    /// None encodes the identity operator.
    pub pi: Option<QuadElt>,
    /// concrete matrices, not classes: their inverses premultiply the sum
    pub betas: Vec<[QuadElt; 4]>,
}

impl CosetReps {
    /// The identity operator (single representative 1).
    pub fn identity(field: &FieldRef) -> Self {
        CosetReps {
            field: field.clone(),
            pi: None,
            betas: vec![[
                QuadElt::one(field),
                QuadElt::zero(field),
                QuadElt::zero(field),
                QuadElt::one(field),
            ]],
        }
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// The exact scalar ϖ^{l1}·conj(ϖ)^{(l1+l2)/2} carried by the
    /// normalized Hecke action at the given weights.
    pub fn scalar(&self, w: &WeightPair) -> QuadElt {
        match &self.pi {
            None => QuadElt::one(&self.field),
            Some(pi) => {
                let mut c = QuadElt::one(&self.field);
                for _ in 0..w.l1 {
                    c = c.mul(pi);
                }
                let pc = pi.conj();
                for _ in 0..(w.l1 + w.l2) / 2 {
                    c = c.mul(&pc);
                }
                c
            }
        }
    }
}

/// Standard representatives {[[1, u], [0, ϖ]] : u over residues} ∪
/// {[[ϖ, 0], [0, 1]]} for a totally positive prime element ϖ.
pub fn std_reps(field: &FieldRef, pi: &QuadElt) -> Result<CosetReps> {
    if !is_prime_element(pi) {
        return Err(Error::NotPrime);
    }
    if !pi.is_totally_positive() {
        return Err(Error::NotPrime);
    }
    let mut betas = Vec::new();
    for u in residues_mod(pi)? {
        betas.push([
            QuadElt::one(field),
            u,
            QuadElt::zero(field),
            pi.clone(),
        ]);
    }
    betas.push([
        pi.clone(),
        QuadElt::zero(field),
        QuadElt::zero(field),
        QuadElt::one(field),
    ]);
    Ok(CosetReps { field: field.clone(), pi: Some(pi.clone()), betas })
}

fn mat_mul(a: &[QuadElt; 4], b: &[QuadElt; 4]) -> [QuadElt; 4] {
    [
        a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
        a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
        a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
        a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
    ]
}

fn mat_inv(a: &[QuadElt; 4]) -> Result<[QuadElt; 4]> {
    let det = a[0].mul(&a[3]).sub(&a[1].mul(&a[2]));
    let di = det.inv()?;
    Ok([
        a[3].mul(&di),
        a[1].neg().mul(&di),
        a[2].neg().mul(&di),
        a[0].mul(&di),
    ])
}

/// β_i γ β_{j(i)}^{-1} ∈ Γ* determines j(i) uniquely; returns the map
/// i ↦ j(i) and the conjugated elements.
pub fn perm_of(gamma: &GammaElt, reps: &CosetReps) -> Result<(Vec<usize>, Vec<GammaElt>)> {
    let field = &reps.field;
    let d = reps.len();
    let mut perm = vec![usize::MAX; d];
    let mut conj = Vec::with_capacity(d);
    for i in 0..d {
        let left = mat_mul(&reps.betas[i], &[
            gamma.m[0].clone(),
            gamma.m[1].clone(),
            gamma.m[2].clone(),
            gamma.m[3].clone(),
        ]);
        let mut found = None;
        for j in 0..d {
            let cand = mat_mul(&left, &mat_inv(&reps.betas[j])?);
            let elt = GammaElt::new(field, cand);
            if elt.in_gamma_star() {
                if found.is_some() {
                    return Err(Error::NoMatchingCoset);
                }
                found = Some((j, elt));
            }
        }
        let (j, elt) = found.ok_or(Error::NoMatchingCoset)?;
        perm[i] = j;
        conj.push(elt);
    }
    Ok((perm, conj))
}

/// A probe letter: a group element together with its prescribed lift
/// word (on which the inductive cochain vanishes).
#[derive(Clone, Debug)]
pub struct Letter {
    pub elt: GammaElt,
    pub lift: Word,
}

impl Letter {
    fn check(&self, mode: Mode) -> Result<()> {
        match mode {
            Mode::Plus => {
                let g = generators(self.elt.field());
                if self.elt == g.sigma || self.elt.in_p_star() {
                    Ok(())
                } else {
                    Err(Error::LetterAlphabetViolation)
                }
            }
            Mode::Minus => {
                // must be one of the five free generators of the index-two
                // subgroup, or an inverse: σ̃, τ̃^{±1}, ν̃^{±2},
                // (ν̃σ̃ν̃^{-1})^{±1}, ν̃τ̃^{±1}ν̃^{-1}
                let ok = matches!(
                    self.lift.runs.as_slice(),
                    [(Gen::S, 1 | -1)]
                        | [(Gen::T, 1 | -1)]
                        | [(Gen::N, 2 | -2)]
                        | [(Gen::N, 1), (Gen::S, 1 | -1), (Gen::N, -1)]
                        | [(Gen::N, 1), (Gen::T, 1 | -1), (Gen::N, -1)]
                );
                if ok {
                    Ok(())
                } else {
                    Err(Error::LetterAlphabetViolation)
                }
            }
        }
    }
}

/// Symbolic value of ψ on a probe: one formal sum per coset
/// representative; the materialized value is
/// c · Σ_i ρ(β_i)^{-1}·(term i).
#[derive(Clone, Debug)]
pub struct PsiSym {
    pub per_beta: Vec<SymExpr>,
}

impl PsiSym {
    pub fn zero(d: usize) -> Self {
        PsiSym { per_beta: vec![SymExpr::zero(); d] }
    }

    pub fn add(&self, o: &Self) -> Self {
        PsiSym {
            per_beta: self
                .per_beta
                .iter()
                .zip(&o.per_beta)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PsiSym { per_beta: self.per_beta.iter().map(|e| e.scale(c)).collect() }
    }
}

/// Value of the transformed cocycle on the relation spelled by the
/// probe letters (whose product must be the identity).
pub fn psi_word(
    reducer: &Reducer,
    letters: &[Letter],
    reps: &CosetReps,
) -> Result<PsiSym> {
    let field = &reducer.field;
    for l in letters {
        l.check(reducer.mode)?;
    }
    let product = letters
        .iter()
        .fold(GammaElt::identity(field), |acc, l| acc.mul(&l.elt));
    if !product.is_identity() {
        return Err(Error::NotARelation);
    }
    let d = reps.len();
    // permutations per letter
    let mut perms = Vec::with_capacity(letters.len());
    let mut conjs = Vec::with_capacity(letters.len());
    for l in letters {
        let (p, c) = perm_of(&l.elt, reps)?;
        perms.push(p);
        conjs.push(c);
    }
    let mut out = PsiSym::zero(d);
    for i in 0..d {
        // chain of cosets q_0 = i, q_j = p_j(q_{j-1})
        let mut q = i;
        let mut word = Word::empty();
        for (j, _l) in letters.iter().enumerate() {
            let elt = &conjs[j][q];
            word = word.concat(&lift_for_word(elt)?);
            q = perms[j][q];
        }
        if q != i {
            return Err(Error::AssertionFailed(
                "letter product permutation is not the identity".into(),
            ));
        }
        out.per_beta[i] = reducer.reduce_word(&word)?;
    }
    Ok(out)
}

/// Canonical lift used inside the Hecke sums: parabolic elements use the
/// direct exponent lift, everything else the coset-representative lift.
fn lift_for_word(elt: &GammaElt) -> Result<Word> {
    if elt.in_p_star() {
        p_lift(elt)
    } else {
        tilde_lift(elt)
    }
}

/// The symbolic triple (C′, A′, B′) = ψ on σ̃², (σ̃ν̃)², (σ̃τ̃)³.
/// In minus mode the ν̃-conjugated probes are also evaluated and the
/// projection to the minus part is returned.
pub struct PsiTriple {
    pub c: PsiSym,
    pub a: PsiSym,
    pub b: PsiSym,
    /// conjugated-probe values, present in minus mode
    pub conj: Option<(PsiSym, PsiSym, PsiSym)>,
}

pub fn psi_triple(reducer: &Reducer, reps: &CosetReps) -> Result<PsiTriple> {
    let field = &reducer.field;
    let g = generators(field);
    let sigma = Letter { elt: g.sigma.clone(), lift: Word::gen(Gen::S, 1) };
    let nu = Letter { elt: g.nu.clone(), lift: Word::gen(Gen::N, 1) };
    let tau = Letter { elt: g.tau.clone(), lift: Word::gen(Gen::T, 1) };
    let mu = Letter { elt: g.mu.clone(), lift: Word::mu(1) };
    let nu_sigma = Letter {
        elt: g.nu.mul(&g.sigma).mul(&g.nu.inv()),
        lift: {
            let mut w = Word::gen(Gen::N, 1);
            w.push(Gen::S, 1);
            w.push(Gen::N, -1);
            w
        },
    };
    let eta = Letter { elt: g.eta.clone(), lift: Word::eta(1) };

    match reducer.mode {
        Mode::Plus => {
            let c = psi_word(reducer, &[sigma.clone(), sigma.clone()], reps)?;
            let a = psi_word(
                reducer,
                &[sigma.clone(), nu.clone(), sigma.clone(), nu.clone()],
                reps,
            )?;
            let b = psi_word(
                reducer,
                &[
                    sigma.clone(),
                    tau.clone(),
                    sigma.clone(),
                    tau.clone(),
                    sigma.clone(),
                    tau.clone(),
                ],
                reps,
            )?;
            Ok(PsiTriple { c, a, b, conj: None })
        }
        Mode::Minus => {
            let c = psi_word(reducer, &[sigma.clone(), sigma.clone()], reps)?;
            // (σ̃ν̃)² = σ̃ · (ν̃σ̃ν̃^{-1}) · ν̃²
            let a = psi_word(reducer, &[sigma.clone(), nu_sigma.clone(), mu.clone()], reps)?;
            let b = psi_word(
                reducer,
                &[
                    sigma.clone(),
                    tau.clone(),
                    sigma.clone(),
                    tau.clone(),
                    sigma.clone(),
                    tau.clone(),
                ],
                reps,
            )?;
            // ν̃-conjugates: ν̃σ̃²ν̃^{-1} = (ν̃σ̃ν̃^{-1})²,
            // ν̃(σ̃ν̃)²ν̃^{-1} = (ν̃σ̃ν̃^{-1})·ν̃²·σ̃,
            // ν̃(σ̃τ̃)³ν̃^{-1} = ((ν̃σ̃ν̃^{-1})(ν̃τ̃ν̃^{-1}))³
            let cc = psi_word(reducer, &[nu_sigma.clone(), nu_sigma.clone()], reps)?;
            let ca = psi_word(reducer, &[nu_sigma.clone(), mu.clone(), sigma.clone()], reps)?;
            let cb = psi_word(
                reducer,
                &[
                    nu_sigma.clone(),
                    eta.clone(),
                    nu_sigma.clone(),
                    eta.clone(),
                    nu_sigma.clone(),
                    eta.clone(),
                ],
                reps,
            )?;
            Ok(PsiTriple { c, a, b, conj: Some((cc, ca, cb)) })
        }
    }
}

/// Materializes a symbolic ψ-value at the given weights:
/// c(w) · Σ_i ρ(β_i)^{-1}·(term i), and for the minus part
/// ½·(ψ − ρ′(ν)^{-1}·ψ_conj).
pub fn materialize_psi(
    field: &FieldRef,
    w: &WeightPair,
    reps: &CosetReps,
    psi: &PsiSym,
    psi_conj: Option<&PsiSym>,
) -> Result<LinExpr> {
    let ring = QuadField(field.clone());
    let n = w.dim();
    let scalar = reps.scalar(w);
    let assemble = |p: &PsiSym| -> Result<LinExpr> {
        let mut ma = Mat::zeros(&ring, n, n);
        let mut mb = Mat::zeros(&ring, n, n);
        for (i, expr) in p.per_beta.iter().enumerate() {
            let pre = mat_inv(&reps.betas[i])?;
            let le = materialize(field, w, expr, Some(&pre))?;
            ma = ma.add(&ring, &le.ma);
            mb = mb.add(&ring, &le.mb);
        }
        Ok(LinExpr { ma: ma.scale(&ring, &scalar), mb: mb.scale(&ring, &scalar) })
    };
    let plain = assemble(psi)?;
    match psi_conj {
        None => Ok(plain),
        Some(pc) => {
            let conj = assemble(pc)?;
            let g = generators(field);
            let nu_inv = rho_pair(
                w,
                field,
                &[
                    QuadElt::eps(field).inv().unwrap(),
                    QuadElt::zero(field),
                    QuadElt::zero(field),
                    QuadElt::one(field),
                ],
                true,
            )?;
            let _ = g;
            let half = Rat::new(1.into(), 2.into());
            let ma = plain
                .ma
                .sub(&ring, &nu_inv.mul(&ring, &conj.ma))
                .scale(&ring, &QuadElt::from_rat(field, half.clone()));
            let mb = plain
                .mb
                .sub(&ring, &nu_inv.mul(&ring, &conj.mb))
                .scale(&ring, &QuadElt::from_rat(field, half));
            Ok(LinExpr { ma, mb })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quad::quad_field;

    fn t2_reps() -> (FieldRef, CosetReps) {
        let f = quad_field(5).unwrap();
        let two = QuadElt::from_ints(&f, 2, 0);
        let reps = std_reps(&f, &two).unwrap();
        (f, reps)
    }

    #[test]
    fn rep_counts() {
        let (_, reps) = t2_reps();
        assert_eq!(reps.len(), 5);
        let f13 = quad_field(13).unwrap();
        let pi = QuadElt::from_ints(&f13, 7, -2);
        let reps = std_reps(&f13, &pi).unwrap();
        assert_eq!(reps.len(), 4);
        // a non-prime and a non-totally-positive element are rejected
        assert!(std_reps(&f13, &QuadElt::from_ints(&f13, 4, 0)).is_err());
        assert!(std_reps(&f13, &QuadElt::from_ints(&f13, -7, 2)).is_err());
    }

    #[test]
    fn identity_permutation() {
        let (f, reps) = t2_reps();
        let (perm, conj) = perm_of(&GammaElt::identity(&f), &reps).unwrap();
        assert_eq!(perm, vec![0, 1, 2, 3, 4]);
        assert!(conj.iter().all(|g| g.is_identity()));
    }

    #[test]
    fn tau_cycles_residues() {
        // u ↦ u + 1 among the residues mod 2, the dilation fixed
        let (f, reps) = t2_reps();
        let g = generators(&f);
        let (perm, _) = perm_of(&g.tau, &reps).unwrap();
        // last rep (the dilation) is fixed
        assert_eq!(perm[4], 4);
        // the first four are permuted without fixed point... translation
        // by 1 swaps residues in pairs over F_4
        let mut seen = perm[..4].to_vec();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        assert!((0..4).all(|i| perm[i] != i));
    }

    #[test]
    fn permutation_composition() {
        let (f, reps) = t2_reps();
        let g = generators(&f);
        for (x, y) in [
            (g.sigma.clone(), g.tau.clone()),
            (g.tau.clone(), g.nu.clone()),
            (g.nu.mul(&g.sigma), g.tau.mul(&g.tau)),
        ] {
            let (px, _) = perm_of(&x, &reps).unwrap();
            let (py, _) = perm_of(&y, &reps).unwrap();
            let (pxy, _) = perm_of(&x.mul(&y), &reps).unwrap();
            let composed: Vec<usize> = (0..reps.len()).map(|i| py[px[i]]).collect();
            assert_eq!(pxy, composed);
        }
        let _ = f;
    }

    #[test]
    fn trivial_operator_triple() {
        let f = quad_field(5).unwrap();
        let reps = CosetReps::identity(&f);
        for mode in [Mode::Plus, Mode::Minus] {
            let red = Reducer::new(&f, mode);
            let t = psi_triple(&red, &reps).unwrap();
            assert!(t.c.per_beta[0].is_zero());
            assert!(t.a.per_beta[0].equiv(&SymExpr::unit_a(&f)));
            assert!(t.b.per_beta[0].equiv(&SymExpr::unit_b(&f)));
        }
    }

    #[test]
    fn t2_triple_reduces_both_modes() {
        let (f, reps) = t2_reps();
        for mode in [Mode::Plus, Mode::Minus] {
            let red = Reducer::new(&f, mode);
            let t = psi_triple(&red, &reps).unwrap();
            assert_eq!(t.a.per_beta.len(), 5);
            assert_eq!(t.b.per_beta.len(), 5);
        }
    }

    #[test]
    fn t_pi_triple_reduces_d13() {
        let f = quad_field(13).unwrap();
        let pi = QuadElt::from_ints(&f, 7, -2);
        let reps = std_reps(&f, &pi).unwrap();
        let red = Reducer::new(&f, Mode::Plus);
        let t = psi_triple(&red, &reps).unwrap();
        assert_eq!(t.b.per_beta.len(), 4);
    }

    #[test]
    fn psi_invariant_under_rep_permutation_and_residue_shift() {
        let (f, reps) = t2_reps();
        let w = WeightPair::new(4, 2).unwrap();
        let red = Reducer::new(&f, Mode::Plus);
        let t = psi_triple(&red, &reps).unwrap();
        let base = materialize_psi(&f, &w, &reps, &t.a, None).unwrap();
        // permute the representatives and shift a residue by 2·(1 + ω)
        let mut betas = reps.betas.clone();
        betas.swap(0, 3);
        betas[1][1] = betas[1][1].add(&QuadElt::from_ints(&f, 2, 2));
        let reps2 = CosetReps { field: f.clone(), pi: reps.pi.clone(), betas };
        let red2 = Reducer::new(&f, Mode::Plus);
        let t2 = psi_triple(&red2, &reps2).unwrap();
        let alt = materialize_psi(&f, &w, &reps2, &t2.a, None).unwrap();
        assert_eq!(base.ma, alt.ma);
        assert_eq!(base.mb, alt.mb);
    }
}
