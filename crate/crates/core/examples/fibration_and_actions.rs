//! The canonical models: F4,5 fibres over S^3, and the two R^2-actions.

use md5fol::foliation::{
    action_rho_412, action_rho_414, canonical_target, fibration_p45, solve_rho_412, TopologicalType,
};
use md5fol::lie::Covector;
use md5fol::orbit::{leaf_residual, orbit_param};

fn main() {
    let d5 = canonical_target(TopologicalType::F1).family;
    let f = Covector::new(0.5, 1.0, -2.0, 2.0, 4.0);
    let g = orbit_param(&d5, &f, -7.0, 1.2);
    println!("p45(F) = {:?}", fibration_p45(&f).unwrap().coords());
    println!(
        "p45(G) = {:?}  (G on the leaf of F)",
        fibration_p45(&g).unwrap().coords()
    );
    println!(
        "C*-algebra of type F1: {}",
        TopologicalType::F1.connes_algebra().unwrap()
    );

    let d12 = canonical_target(TopologicalType::F2).family;
    let p = Covector::new(0.0, 1.0, 0.0, 1.0, 1.0);
    let q = action_rho_412(1.0, 2f64.ln(), &p);
    println!("rho412((1, ln 2), P) = {:?}", q.0);
    println!("  leaf residual {:.2e}", leaf_residual(&d12, &p, &q));
    println!("  recovered (r, a) = {:?}", solve_rho_412(&p, &q).unwrap());

    let d14 = canonical_target(TopologicalType::F3).family;
    let q = action_rho_414(0.0, std::f64::consts::PI, &p);
    println!("rho414((0, pi), P) = {:?}", q.0);
    println!("  leaf residual {:.2e}", leaf_residual(&d14, &p, &q));
}
