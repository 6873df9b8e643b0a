use lratio_core::exact::quad::{quad_field, QuadElt};
use lratio_core::hecke::{psi_triple, std_reps};
use lratio_core::relred::{Mode, Reducer};

fn main() {
    let f = quad_field(5).unwrap();
    let two = QuadElt::from_ints(&f, 2, 0);
    let reps = std_reps(&f, &two).unwrap();
    let mut red = Reducer::new(&f, Mode::Minus);
    red.tracing = true;
    match psi_triple(&red, &reps) {
        Ok(_) => println!("D5 Minus: ok"),
        Err(e) => println!("D5 Minus: {e}"),
    }
    for l in red.trace.borrow().iter().filter(|l| l.contains("STUCK m=4")).take(8) {
        println!("  {l}");
    }
    let f13 = quad_field(13).unwrap();
    let pi = QuadElt::from_ints(&f13, 7, -2);
    let mut red = Reducer::new(&f13, Mode::Plus);
    red.tracing = true;
    let reps = std_reps(&f13, &pi).unwrap();
    match psi_triple(&red, &reps) {
        Ok(_) => println!("D13 Plus: ok"),
        Err(e) => println!("D13 Plus: {e}"),
    }
    for l in red.trace.borrow().iter().filter(|l| l.contains("STUCK m=4")).take(8) {
        println!("  {l}");
    }
}
