//! Carry leaves of non-canonical families onto the canonical foliation of their type.

use std::f64::consts::PI;

use md5fol::catalog::{validate_params, FamilyId, FamilyParams};
use md5fol::foliation::{
    canonical_target, equivalence_map, equivalence_map_inverse, round_trip_residual,
    topological_type,
};
use md5fol::lie::Covector;
use md5fol::orbit::{leaf_residual, orbit_param};

fn main() {
    let cases = [
        (
            FamilyId::G5_4_1,
            FamilyParams::lambdas3(2.0, 3.0, 4.0),
            Covector::new(0.0, 4.0, 8.0, 16.0, 5.0),
        ),
        (
            FamilyId::G5_4_9,
            FamilyParams::lambda(-1.5),
            Covector::new(1.0, 2.0, 0.0, -3.0, 0.5),
        ),
        (
            FamilyId::G5_4_10,
            FamilyParams::none(),
            Covector::new(0.0, 0.0, 1.5, -1.0, 2.0),
        ),
        (
            FamilyId::G5_4_13,
            FamilyParams::lambda_phi(3.0, PI / 3.0),
            Covector::new(0.0, 1.0, 0.5, 0.0, 2.0),
        ),
        (
            FamilyId::G5_4_14,
            FamilyParams::lambda_mu_phi(0.5, 2.0, 1.0),
            Covector::new(0.0, 1.0, 0.2, -1.0, 0.7),
        ),
    ];
    for (id, params, f) in cases {
        let d = validate_params(id, params).unwrap();
        let target = canonical_target(topological_type(id)).family;
        let hf = equivalence_map(&d, &f);
        let g = orbit_param(&d, &f, 3.0, 0.4);
        let hg = equivalence_map(&d, &g);
        println!("{d} -> {target}");
        println!("  h(F) = {:?}", hf.0);
        println!(
            "  h(G) on the target leaf of h(F): residual {:.2e}",
            leaf_residual(&target, &hf, &hg)
        );
        println!(
            "  h^-1(h(F)) = F: residual {:.2e}",
            round_trip_residual(&equivalence_map_inverse(&d, &hf), &f)
        );
    }
}
