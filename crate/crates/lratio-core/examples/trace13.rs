use lratio_core::exact::quad::{quad_field, QuadElt};
use lratio_core::modgroup::{generators, p_lift, GammaElt, Gen, Word};
use lratio_core::relred::{Mode, Reducer};

fn main() {
    let f = quad_field(13).unwrap();
    let gens = generators(&f);
    let p = GammaElt::new(
        &f,
        [
            QuadElt::eps(&f).inv().unwrap(),
            QuadElt::from_ints(&f, -7, 2),
            QuadElt::zero(&f),
            QuadElt::eps(&f),
        ],
    );
    let q = GammaElt::new(
        &f,
        [QuadElt::one(&f), QuadElt::from_ints(&f, 0, -2), QuadElt::zero(&f), QuadElt::one(&f)],
    );
    let x = gens.sigma.mul(&p).mul(&gens.sigma).mul(&q);
    println!("x^3 = 1: {}", x.pow(3).is_identity());
    // word from the factored presentation (σ̃ p̃ σ̃ q̃)³
    let mut period = Word::gen(Gen::S, 1);
    period = period.concat(&p_lift(&p).unwrap());
    period.push(Gen::S, 1);
    period = period.concat(&p_lift(&q).unwrap());
    let w = period.concat(&period).concat(&period);
    let mut r = Reducer::new(&f, Mode::Plus);
    r.tracing = true;
    match r.reduce_word(&w) {
        Ok(v) => println!("OK: {} a-terms, {} b-terms", v.a.len(), v.b.len()),
        Err(e) => println!("ERR: {e}"),
    }
    for line in r.trace.borrow().iter() {
        println!("  {line}");
    }
}
