//! Classify a few points: stratum, orbit dimension, topological type.

use md5fol::catalog::{validate_params, FamilyId, FamilyParams};
use md5fol::cli::classify;
use md5fol::lie::Covector;
use md5fol::orbit::ToleranceConfig;

fn main() {
    let tol = ToleranceConfig::default();
    let cases = [
        (
            FamilyId::G5_4_1,
            FamilyParams::lambdas3(2.0, 3.0, -1.0),
            Covector::new(0.0, 1.0, 0.0, 0.0, 0.0),
        ),
        (
            FamilyId::G5_4_5,
            FamilyParams::none(),
            Covector::new(3.0, 0.0, 0.0, 0.0, 0.0),
        ),
        (
            FamilyId::G5_4_13,
            FamilyParams::lambda_phi(0.5, 1.0),
            Covector::new(0.0, 0.0, 0.0, 2.0, 1.0),
        ),
        (
            FamilyId::G5_4_14,
            FamilyParams::lambda_mu_phi(1.5, 2.0, 0.3),
            Covector::new(-1.0, 1.0, 1.0, 1.0, 1.0),
        ),
    ];
    for (id, params, f) in cases {
        let d = validate_params(id, params).expect("valid parameters");
        let c = classify(&d, &f, &tol).expect("consistent rank");
        println!("{d} at {:?}: {}", f.0, serde_json::to_string(&c).unwrap());
    }

    // Constraint violations are reported by name.
    let err = validate_params(FamilyId::G5_4_1, FamilyParams::lambdas3(2.0, 2.0, 3.0)).unwrap_err();
    println!("rejected: {err}");
}
