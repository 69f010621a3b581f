//! Build a family's Lie algebra, check Jacobi, and look at the Kirillov form.

use md5fol::catalog::{adx1_matrix, build_algebra, validate_params, FamilyId, FamilyParams};
use md5fol::lie::{bracket, kirillov_form, rank_skew, verify_jacobi, AlgebraElement, Covector};

fn main() {
    let d = validate_params(FamilyId::G5_4_8, FamilyParams::lambda(2.0)).expect("valid parameters");
    let c = build_algebra(&d);
    println!("{d}: Jacobi holds = {}", verify_jacobi(&c));
    println!("ad(X1) on the derived ideal:{}", adx1_matrix(&d));

    let x1 = AlgebraElement::basis(0);
    for j in 1..5 {
        println!(
            "[X1, X{}] = {:?}",
            j + 1,
            bracket(&c, &x1, &AlgebraElement::basis(j)).0
        );
    }

    for f in [
        Covector::new(1.0, 0.0, 0.0, 0.0, 0.0),
        Covector::new(0.0, 1.0, -2.0, 0.5, 3.0),
    ] {
        let b = kirillov_form(&c, &f);
        let r = rank_skew(&b, 1e-9).expect("positive tolerance");
        println!("F = {:?}: rank of B_F = {}", f.0, r.rank);
    }
}
