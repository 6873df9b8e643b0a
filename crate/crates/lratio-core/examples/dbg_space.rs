use lratio_core::cohomspace::*;
use lratio_core::exact::mat::{rank, Mat};
use lratio_core::exact::quad::{quad_field, QuadField};
use lratio_core::relred::{Mode, Reducer};
use lratio_core::symrep::WeightPair;

fn main() {
    let f = quad_field(5).unwrap();
    let w = WeightPair::new(8, 4).unwrap();
    let red = Reducer::new(&f, Mode::Plus);
    let probe = torsion_probe(&f).unwrap();
    let ring = QuadField(f.clone());
    let z = assemble_z(&red, &w, &probe).unwrap();
    println!("dim Z = {}", z.dim());
    // rank of zeta images of the Z basis
    let zmat = Mat::from_fn(z.dim(), 5, |i, j| {
        zeta_map(Mode::Plus, &w, &z.basis[i])[j].clone()
    });
    println!("dim zeta(Z) = {}", rank(&ring, &zmat).unwrap());
    for i in 0..z.dim().min(3) {
        let zt = zeta_map(Mode::Plus, &w, &z.basis[i]);
        println!("zeta[{}] = {:?}", i, zt.iter().map(|e| format!("{}", e)).collect::<Vec<_>>());
    }
}
