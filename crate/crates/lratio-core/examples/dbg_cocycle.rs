use lratio_core::exact::quad::quad_field;
use lratio_core::modgroup::{generators, tilde_lift, GammaElt};
use lratio_core::relred::{Mode, Reducer, SymExpr};
use num_rational::BigRational;

fn f_val(red: &Reducer, g1: &GammaElt, g2: &GammaElt) -> SymExpr {
    let w = tilde_lift(g1)
        .unwrap()
        .concat(&tilde_lift(g2).unwrap())
        .concat(&tilde_lift(&g1.mul(g2)).unwrap().inverse());
    red.reduce_word(&w).unwrap().neg()
}

fn main() {
    let f = quad_field(5).unwrap();
    let red = Reducer::new(&f, Mode::Plus);
    let gens = generators(&f);
    let st = gens.sigma.mul(&gens.tau);
    let smt = gens.sigma.mul(&gens.mu).mul(&gens.tau);
    // failing triple (3,6,3): γ1 = στ, γ2 = σμτ, γ3 = στ
    let one = BigRational::from_integer(1.into());
    for (name, g1, g2, g3) in [
        ("st,smt,st", st.clone(), smt.clone(), st.clone()),
        ("smt,smt,smt", smt.clone(), smt.clone(), smt.clone()),
    ] {
        let t1 = f_val(&red, &g2, &g3).apply(&one, &g1);
        let t2 = f_val(&red, &g1.mul(&g2), &g3).neg();
        let t3 = f_val(&red, &g1, &g2.mul(&g3));
        let t4 = f_val(&red, &g1, &g2).neg();
        let sum = t1.add(&t2).add(&t3).add(&t4);
        let n = sum.normalize(&f);
        println!("{name}: residual a-terms {} b-terms {}", n.a.len(), n.b.len());
        for (g, c) in &n.a {
            println!("  A {} * {:?}", c, g);
        }
        for (g, c) in &n.b {
            println!("  B {} * {:?}", c, g);
        }
    }
    // the four words individually, with their lengths
    for (nm, a, b) in [
        ("f(smt, st)", smt.clone(), st.clone()),
        ("f(st·smt, st)", st.mul(&smt), st.clone()),
        ("f(st, smt·st)", st.clone(), smt.mul(&st)),
        ("f(st, smt)", st.clone(), smt.clone()),
        ("f(smt, smt)", smt.clone(), smt.clone()),
        ("f(smt·smt, smt)", smt.mul(&smt), smt.clone()),
        ("f(smt, smt·smt)", smt.clone(), smt.mul(&smt)),
    ] {
        let w = tilde_lift(&a).unwrap().concat(&tilde_lift(&b).unwrap()).concat(&tilde_lift(&a.mul(&b)).unwrap().inverse());
        let v = red.reduce_word(&w).unwrap();
        println!("{nm}: word runs {:?} -> {} a-terms {} b-terms", w.runs.len(), v.a.len(), v.b.len());
    }
}
