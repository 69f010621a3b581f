//! Randomized invariants across the whole catalog.

use std::f64::consts::PI;

use nalgebra::{Matrix4, SVD};
use proptest::prelude::*;

use md5fol::catalog::{
    adx1_matrix, build_algebra, expected_eigenvalues, validate_params, FamilyId, FamilyParams,
};
use md5fol::foliation::{
    draw_sector_point, equivalence_map, equivalence_map_inverse, fibration_p45,
    round_trip_residual, topological_type, TopologicalType,
};
use md5fol::lie::{coad_span_matrix, kirillov_form, rank_skew, verify_jacobi, Covector};
use md5fol::orbit::{leaf_membership, leaf_residual, orbit_param, ToleranceConfig};
use md5fol::sampling::{draw_descriptor, sample_rng};

fn family() -> impl Strategy<Value = FamilyId> {
    (1usize..=14).prop_map(|n| FamilyId::from_number(n).unwrap())
}

fn descriptor() -> impl Strategy<Value = md5fol::catalog::FamilyDescriptor> {
    (family(), any::<u64>())
        .prop_map(|(id, seed)| draw_descriptor(id, &mut sample_rng(seed, id, 0, 0)))
}

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn covector() -> impl Strategy<Value = Covector> {
    prop::array::uniform5(coord()).prop_map(Covector)
}

fn generic_covector() -> impl Strategy<Value = Covector> {
    covector().prop_filter("generic", |f| {
        f.tail().iter().map(|v| v * v).sum::<f64>() > 1e-6
    })
}

/// Characteristic polynomial coefficients by Faddeev–LeVerrier.
fn char_poly(m: &Matrix4<f64>) -> [f64; 5] {
    let mut c = [0.0; 5];
    c[4] = 1.0;
    let mut mk = Matrix4::zeros();
    for k in 1..=4 {
        mk = m * (mk + Matrix4::identity() * c[5 - k]);
        c[4 - k] = -(mk.trace()) / k as f64;
    }
    c
}

/// Coefficients of `Π (t − rᵢ)` for complex roots given as `(re, im)`.
fn poly_from_roots(roots: [(f64, f64); 4]) -> [f64; 5] {
    let mut re = vec![1.0];
    let mut im = vec![0.0];
    for (a, b) in roots {
        let mut nre = vec![0.0; re.len() + 1];
        let mut nim = vec![0.0; im.len() + 1];
        for k in 0..re.len() {
            nre[k + 1] += re[k];
            nim[k + 1] += im[k];
            nre[k] -= a * re[k] - b * im[k];
            nim[k] -= a * im[k] + b * re[k];
        }
        re = nre;
        im = nim;
    }
    [re[0], re[1], re[2], re[3], re[4]]
}

fn span_rank(m: &nalgebra::Matrix5<f64>) -> usize {
    let s = SVD::new(*m, false, false).singular_values;
    let top = s.max();
    s.iter().filter(|v| top > 0.0 && **v > 1e-9 * top).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn catalog_algebras_are_lie(d in descriptor()) {
        prop_assert!(verify_jacobi(&build_algebra(&d)));
    }

    #[test]
    fn adx1_eigenstructure(d in descriptor()) {
        let got = char_poly(&adx1_matrix(&d));
        let want = poly_from_roots(expected_eigenvalues(&d));
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-9 * w.abs().max(1.0), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn kirillov_form_is_exactly_skew(d in descriptor(), f in covector()) {
        let b = kirillov_form(&build_algebra(&d), &f);
        prop_assert_eq!(b, -b.transpose());
    }

    #[test]
    fn md_property_and_leaf_rank(d in descriptor(), f in covector(), fixed in any::<bool>()) {
        let f = if fixed { Covector::new(f.alpha(), 0.0, 0.0, 0.0, 0.0) } else { f };
        let c = build_algebra(&d);
        let r = rank_skew(&kirillov_form(&c, &f), 1e-9).unwrap();
        prop_assert!(!r.odd_count);
        prop_assert_eq!(r.rank, if fixed { 0 } else { 2 });
        prop_assert_eq!(span_rank(&coad_span_matrix(&c, &f)), r.rank);
    }

    #[test]
    fn chart_base_is_exact(d in descriptor(), f in covector()) {
        prop_assert_eq!(orbit_param(&d, &f, f.alpha(), 0.0), f);
    }

    #[test]
    fn flow_parameter_is_additive(d in descriptor(), f in covector(), x in coord(), a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let direct = orbit_param(&d, &f, x, a + b);
        let composed = orbit_param(&d, &orbit_param(&d, &f, x, a), x, b);
        prop_assert!(round_trip_residual(&direct, &composed) < 1e-10);
    }

    #[test]
    fn membership_is_an_equivalence(d in descriptor(), f in generic_covector(), s in prop::array::uniform4(-1.0..1.0f64)) {
        let tol = ToleranceConfig::default();
        let loose = ToleranceConfig::new(tol.rank_tol, tol.residual_tol, 10.0 * tol.membership_tol).unwrap();
        let g = orbit_param(&d, &f, s[0] * 10.0, s[1]);
        let h = orbit_param(&d, &f, s[2] * 10.0, s[3]);
        prop_assert!(leaf_membership(&d, &f, &f, &tol));
        prop_assert!(leaf_membership(&d, &f, &g, &tol) && leaf_membership(&d, &g, &f, &tol));
        prop_assert!(leaf_membership(&d, &g, &h, &loose));
    }

    #[test]
    fn perturbed_point_leaves_the_leaf(d in descriptor(), f in generic_covector()) {
        // With a single nonzero slot the perturbation may just slide along the leaf.
        let mut g = f;
        let k = (1..5).find(|&k| f.0[k] != 0.0).unwrap();
        g.0[k] += 0.5 * f.0[k].abs().max(1.0);
        let moved = (1..5).filter(|&j| j != k).all(|j| f.0[j] == 0.0);
        if !moved {
            prop_assert!(leaf_residual(&d, &f, &g) > 1e-6);
        }
    }

    #[test]
    fn equivalence_maps_keep_x_and_invert(d in descriptor(), seed in any::<u64>()) {
        let p = draw_sector_point(&d, &mut sample_rng(seed, d.id(), 1, 0));
        let q = equivalence_map(&d, &p);
        prop_assert_eq!(q.alpha(), p.alpha());
        prop_assert_eq!(equivalence_map_inverse(&d, &q).alpha(), q.alpha());
        prop_assert!(round_trip_residual(&equivalence_map_inverse(&d, &q), &p) < 1e-9);
        prop_assert!(round_trip_residual(&equivalence_map(&d, &equivalence_map_inverse(&d, &q)), &q) < 1e-9);
    }

    #[test]
    fn fibres_are_leaves(f in generic_covector(), g in generic_covector(), same in any::<bool>(), c in 0.01..100.0f64) {
        let d5 = validate_params(FamilyId::G5_4_5, FamilyParams::none()).unwrap();
        let tol = ToleranceConfig::default();
        let g = if same { Covector::from_parts(g.alpha(), f.tail().map(|v| v * c)) } else { g };
        let on_leaf = leaf_membership(&d5, &f, &g, &tol);
        let on_fibre = fibration_p45(&f).unwrap().distance(&fibration_p45(&g).unwrap()) <= 1e-9;
        prop_assert_eq!(on_leaf, on_fibre);
        if same {
            prop_assert!(on_leaf);
        }
    }

    #[test]
    fn type_is_parameter_independent(d in descriptor()) {
        let t = topological_type(d.id());
        let want = match d.id().number() {
            1..=10 => TopologicalType::F1,
            11..=13 => TopologicalType::F2,
            _ => TopologicalType::F3,
        };
        prop_assert_eq!(t, want);
    }
}

#[test]
fn constraint_boundaries_are_rejected() {
    let bad = [
        (FamilyId::G5_4_1, FamilyParams::lambdas3(0.0, 2.0, 3.0)),
        (FamilyId::G5_4_1, FamilyParams::lambdas3(2.0, 3.0, 1.0)),
        (FamilyId::G5_4_2, FamilyParams::lambdas2(2.0, 2.0)),
        (FamilyId::G5_4_3, FamilyParams::lambda(1.0)),
        (FamilyId::G5_4_7, FamilyParams::lambda(0.0)),
        (FamilyId::G5_4_11, FamilyParams::lambdas2_phi(2.0, 3.0, 0.0)),
        (FamilyId::G5_4_12, FamilyParams::lambda_phi(2.0, PI)),
        (
            FamilyId::G5_4_14,
            FamilyParams::lambda_mu_phi(1.0, 0.0, 1.0),
        ),
    ];
    for (id, p) in bad {
        assert!(validate_params(id, p).is_err(), "{id} {p:?}");
    }
}
