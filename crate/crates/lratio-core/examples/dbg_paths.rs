use lratio_core::exact::quad::quad_field;
use lratio_core::modgroup::{generators, tilde_lift, GammaElt};
use lratio_core::relred::{Mode, Reducer};

fn main() {
    let f = quad_field(5).unwrap();
    let red = Reducer::new(&f, Mode::Plus);
    let gens = generators(&f);
    let st = gens.sigma.mul(&gens.tau);
    let smt = gens.sigma.mul(&gens.mu).mul(&gens.tau);
    let pairs: Vec<(GammaElt, GammaElt)> = vec![
        (smt.clone(), st.clone()),
        (st.mul(&smt), st.clone()),
        (st.clone(), smt.mul(&st)),
        (st.clone(), smt.clone()),
        (smt.clone(), smt.clone()),
        (smt.mul(&smt), smt.clone()),
        (smt.clone(), smt.mul(&smt)),
    ];
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let w = tilde_lift(a)
            .unwrap()
            .concat(&tilde_lift(b).unwrap())
            .concat(&tilde_lift(&a.mul(b)).unwrap().inverse());
        let all = red.reduce_word_all_first_moves(&w).unwrap();
        let mut disagreements = Vec::new();
        for i in 1..all.len() {
            if !all[i].1.equiv(&all[0].1) {
                disagreements.push(all[i].0.clone());
            }
        }
        println!(
            "pair {idx}: {} paths, base {}, disagials: {:?}",
            all.len(),
            all.first().map(|x| x.0.clone()).unwrap_or_default(),
            disagreements
        );
    }
}
