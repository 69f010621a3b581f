//! The fourteen indecomposable MD5-families whose derived ideal is `ℝ⁴`.
//!
//! Each family is fixed by the matrix `M` of `ad_{X₁}` restricted to the
//! derived ideal `span{X₂, X₃, X₄, X₅}`. `M` acts on coordinate columns, so
//! `[X₁, X_{1+j}] = Σᵢ M(i, j) X_{1+i}`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie::StructureConstants;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("constraint violated for {family}: {constraint}")]
    ConstraintViolation {
        family: FamilyId,
        constraint: String,
    },
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    G5_4_1,
    G5_4_2,
    G5_4_3,
    G5_4_4,
    G5_4_5,
    G5_4_6,
    G5_4_7,
    G5_4_8,
    G5_4_9,
    G5_4_10,
    G5_4_11,
    G5_4_12,
    G5_4_13,
    G5_4_14,
}

impl FamilyId {
    pub const ALL: [FamilyId; 14] = [
        FamilyId::G5_4_1,
        FamilyId::G5_4_2,
        FamilyId::G5_4_3,
        FamilyId::G5_4_4,
        FamilyId::G5_4_5,
        FamilyId::G5_4_6,
        FamilyId::G5_4_7,
        FamilyId::G5_4_8,
        FamilyId::G5_4_9,
        FamilyId::G5_4_10,
        FamilyId::G5_4_11,
        FamilyId::G5_4_12,
        FamilyId::G5_4_13,
        FamilyId::G5_4_14,
    ];

    /// 1-based family number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        Self::ALL.get(n.wrapping_sub(1)).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::G5_4_1 => "G5_4_1",
            FamilyId::G5_4_2 => "G5_4_2",
            FamilyId::G5_4_3 => "G5_4_3",
            FamilyId::G5_4_4 => "G5_4_4",
            FamilyId::G5_4_5 => "G5_4_5",
            FamilyId::G5_4_6 => "G5_4_6",
            FamilyId::G5_4_7 => "G5_4_7",
            FamilyId::G5_4_8 => "G5_4_8",
            FamilyId::G5_4_9 => "G5_4_9",
            FamilyId::G5_4_10 => "G5_4_10",
            FamilyId::G5_4_11 => "G5_4_11",
            FamilyId::G5_4_12 => "G5_4_12",
            FamilyId::G5_4_13 => "G5_4_13",
            FamilyId::G5_4_14 => "G5_4_14",
        }
    }

    /// Parameter slots the family takes, in canonical order.
    pub fn param_names(self) -> &'static [ParamName] {
        use ParamName::*;
        match self.number() {
            1 => &[Lambda1, Lambda2, Lambda3],
            2 | 6 => &[Lambda1, Lambda2],
            3 | 4 | 7 | 8 | 9 => &[Lambda],
            5 | 10 => &[],
            11 => &[Lambda1, Lambda2, Phi],
            12 | 13 => &[Lambda, Phi],
            _ => &[Lambda, Mu, Phi],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamName {
    Lambda1,
    Lambda2,
    Lambda3,
    Lambda,
    Mu,
    Phi,
}

impl ParamName {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::Lambda1 => "lambda1",
            ParamName::Lambda2 => "lambda2",
            ParamName::Lambda3 => "lambda3",
            ParamName::Lambda => "lambda",
            ParamName::Mu => "mu",
            ParamName::Phi => "phi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ParamName::Lambda1,
            ParamName::Lambda2,
            ParamName::Lambda3,
            ParamName::Lambda,
            ParamName::Mu,
            ParamName::Phi,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
    }
}

/// Raw family parameters. `phi` is in radians.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi: Option<f64>,
}

impl FamilyParams {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn lambdas3(l1: f64, l2: f64, l3: f64) -> Self {
        Self {
            lambda1: Some(l1),
            lambda2: Some(l2),
            lambda3: Some(l3),
            ..Self::default()
        }
    }

    pub fn lambdas2(l1: f64, l2: f64) -> Self {
        Self {
            lambda1: Some(l1),
            lambda2: Some(l2),
            ..Self::default()
        }
    }

    pub fn lambda(l: f64) -> Self {
        Self {
            lambda: Some(l),
            ..Self::default()
        }
    }

    pub fn lambdas2_phi(l1: f64, l2: f64, phi: f64) -> Self {
        Self {
            phi: Some(phi),
            ..Self::lambdas2(l1, l2)
        }
    }

    pub fn lambda_phi(l: f64, phi: f64) -> Self {
        Self {
            phi: Some(phi),
            ..Self::lambda(l)
        }
    }

    pub fn lambda_mu_phi(l: f64, mu: f64, phi: f64) -> Self {
        Self {
            mu: Some(mu),
            phi: Some(phi),
            ..Self::lambda(l)
        }
    }

    pub fn get(&self, name: ParamName) -> Option<f64> {
        match name {
            ParamName::Lambda1 => self.lambda1,
            ParamName::Lambda2 => self.lambda2,
            ParamName::Lambda3 => self.lambda3,
            ParamName::Lambda => self.lambda,
            ParamName::Mu => self.mu,
            ParamName::Phi => self.phi,
        }
    }

    pub fn set(&mut self, name: ParamName, value: f64) {
        let slot = match name {
            ParamName::Lambda1 => &mut self.lambda1,
            ParamName::Lambda2 => &mut self.lambda2,
            ParamName::Lambda3 => &mut self.lambda3,
            ParamName::Lambda => &mut self.lambda,
            ParamName::Mu => &mut self.mu,
            ParamName::Phi => &mut self.phi,
        };
        *slot = Some(value);
    }

    fn present(&self) -> impl Iterator<Item = ParamName> + '_ {
        [
            ParamName::Lambda1,
            ParamName::Lambda2,
            ParamName::Lambda3,
            ParamName::Lambda,
            ParamName::Mu,
            ParamName::Phi,
        ]
        .into_iter()
        .filter(|p| self.get(*p).is_some())
    }
}

/// A family together with parameters that passed [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyDescriptor {
    id: FamilyId,
    params: FamilyParams,
}

impl FamilyDescriptor {
    pub fn id(&self) -> FamilyId {
        self.id
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    fn slot(&self, p: ParamName) -> f64 {
        self.params.get(p).unwrap_or(0.0)
    }

    pub fn lambda1(&self) -> f64 {
        self.slot(ParamName::Lambda1)
    }
    pub fn lambda2(&self) -> f64 {
        self.slot(ParamName::Lambda2)
    }
    pub fn lambda3(&self) -> f64 {
        self.slot(ParamName::Lambda3)
    }
    pub fn lambda(&self) -> f64 {
        self.slot(ParamName::Lambda)
    }
    pub fn mu(&self) -> f64 {
        self.slot(ParamName::Mu)
    }
    pub fn phi(&self) -> f64 {
        self.slot(ParamName::Phi)
    }

    /// Human-readable label such as `G5_4_12(lambda=1, phi=1.5707963267948966)`.
    pub fn label(&self) -> String {
        let names = self.id.param_names();
        if names.is_empty() {
            return self.id.to_string();
        }
        let args: Vec<String> = names
            .iter()
            .map(|p| format!("{}={}", p.as_str(), self.slot(*p)))
            .collect();
        format!("{}({})", self.id, args.join(", "))
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn validate_params(
    id: FamilyId,
    params: FamilyParams,
) -> Result<FamilyDescriptor, CatalogError> {
    let fail = |constraint: String| CatalogError::ConstraintViolation {
        family: id,
        constraint,
    };
    let expected = id.param_names();
    for p in params.present() {
        if !expected.contains(&p) {
            return Err(fail(format!("unexpected parameter {}", p.as_str())));
        }
    }
    for p in expected {
        match params.get(*p) {
            None => return Err(fail(format!("missing parameter {}", p.as_str()))),
            Some(v) if !v.is_finite() => return Err(fail(format!("{} is not finite", p.as_str()))),
            Some(_) => {}
        }
    }
    let get = |p: ParamName| params.get(p).unwrap_or(0.0);
    let not_zero_one = |p: ParamName| -> Result<(), CatalogError> {
        let v = get(p);
        if v == 0.0 {
            Err(fail(format!("{} == 0", p.as_str())))
        } else if v == 1.0 {
            Err(fail(format!("{} == 1", p.as_str())))
        } else {
            Ok(())
        }
    };
    let not_zero = |p: ParamName| -> Result<(), CatalogError> {
        if get(p) == 0.0 {
            Err(fail(format!("{} == 0", p.as_str())))
        } else {
            Ok(())
        }
    };
    let distinct = |a: ParamName, b: ParamName| -> Result<(), CatalogError> {
        if get(a) == get(b) {
            Err(fail(format!("{} == {}", a.as_str(), b.as_str())))
        } else {
            Ok(())
        }
    };
    let phi_open = || -> Result<(), CatalogError> {
        let phi = get(ParamName::Phi);
        if phi > 0.0 && phi < PI {
            Ok(())
        } else {
            Err(fail("phi not in (0,pi)".to_string()))
        }
    };

    use ParamName::*;
    match id.number() {
        1 => {
            not_zero_one(Lambda1)?;
            not_zero_one(Lambda2)?;
            not_zero_one(Lambda3)?;
            distinct(Lambda1, Lambda2)?;
            distinct(Lambda2, Lambda3)?;
            distinct(Lambda1, Lambda3)?;
        }
        2 | 6 => {
            not_zero_one(Lambda1)?;
            not_zero_one(Lambda2)?;
            distinct(Lambda1, Lambda2)?;
        }
        3 | 4 | 7 | 8 | 9 => not_zero_one(Lambda)?,
        5 | 10 => {}
        11 => {
            not_zero(Lambda1)?;
            not_zero(Lambda2)?;
            distinct(Lambda1, Lambda2)?;
            phi_open()?;
        }
        12 | 13 => {
            not_zero(Lambda)?;
            phi_open()?;
        }
        _ => {
            if !(get(Mu) > 0.0) {
                return Err(fail("mu <= 0".to_string()));
            }
            phi_open()?;
        }
    }
    Ok(FamilyDescriptor { id, params })
}

/// Descriptor for a parameter-free family (`G5_4_5`, `G5_4_10`).
pub fn unparameterized(id: FamilyId) -> Result<FamilyDescriptor, CatalogError> {
    validate_params(id, FamilyParams::none())
}

pub fn adx1_matrix(d: &FamilyDescriptor) -> Matrix4<f64> {
    let diag = |a: f64, b: f64, c: f64, e: f64| Matrix4::from_diagonal(&[a, b, c, e].into());
    let rot = |m: &mut Matrix4<f64>, phi: f64| {
        let (s, c) = phi.sin_cos();
        m[(0, 0)] = c;
        m[(0, 1)] = -s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
    };
    match d.id.number() {
        1 => diag(d.lambda1(), d.lambda2(), d.lambda3(), 1.0),
        2 => diag(d.lambda1(), d.lambda2(), 1.0, 1.0),
        3 => diag(d.lambda(), d.lambda(), 1.0, 1.0),
        4 => diag(d.lambda(), 1.0, 1.0, 1.0),
        5 => Matrix4::identity(),
        6 => {
            let mut m = diag(d.lambda1(), d.lambda2(), 1.0, 1.0);
            m[(2, 3)] = 1.0;
            m
        }
        7 => {
            let mut m = diag(d.lambda(), d.lambda(), 1.0, 1.0);
            m[(2, 3)] = 1.0;
            m
        }
        8 => {
            let mut m = diag(d.lambda(), d.lambda(), 1.0, 1.0);
            m[(0, 1)] = 1.0;
            m[(2, 3)] = 1.0;
            m
        }
        9 => {
            let mut m = diag(d.lambda(), 1.0, 1.0, 1.0);
            m[(1, 2)] = 1.0;
            m[(2, 3)] = 1.0;
            m
        }
        10 => {
            let mut m = Matrix4::identity();
            m[(0, 1)] = 1.0;
            m[(1, 2)] = 1.0;
            m[(2, 3)] = 1.0;
            m
        }
        11 => {
            let mut m = diag(0.0, 0.0, d.lambda1(), d.lambda2());
            rot(&mut m, d.phi());
            m
        }
        12 => {
            let mut m = diag(0.0, 0.0, d.lambda(), d.lambda());
            rot(&mut m, d.phi());
            m
        }
        13 => {
            let mut m = diag(0.0, 0.0, d.lambda(), d.lambda());
            rot(&mut m, d.phi());
            m[(2, 3)] = 1.0;
            m
        }
        _ => {
            let mut m = diag(0.0, 0.0, d.lambda(), d.lambda());
            rot(&mut m, d.phi());
            m[(2, 3)] = -d.mu();
            m[(3, 2)] = d.mu();
            m
        }
    }
}

/// Structure constants: `c(1, 1+j, 1+i) = M(i, j)`, antisymmetric completion,
/// and all brackets inside the derived ideal vanish.
pub fn build_algebra(d: &FamilyDescriptor) -> StructureConstants {
    let m = adx1_matrix(d);
    let mut c = StructureConstants::zero();
    for j in 0..4 {
        for i in 0..4 {
            if m[(i, j)] != 0.0 {
                c.set_antisymmetric(0, 1 + j, 1 + i, m[(i, j)]);
            }
        }
    }
    c
}

/// Expected eigenvalues of `ad_{X₁}|ℝ⁴` as `(re, im)` pairs, with multiplicity.
pub fn expected_eigenvalues(d: &FamilyDescriptor) -> [(f64, f64); 4] {
    let r = |x: f64| (x, 0.0);
    let (s, c) = d.phi().sin_cos();
    match d.id.number() {
        1 => [r(d.lambda1()), r(d.lambda2()), r(d.lambda3()), r(1.0)],
        2 | 6 => [r(d.lambda1()), r(d.lambda2()), r(1.0), r(1.0)],
        3 | 7 | 8 => [r(d.lambda()), r(d.lambda()), r(1.0), r(1.0)],
        4 | 9 => [r(d.lambda()), r(1.0), r(1.0), r(1.0)],
        5 | 10 => [r(1.0); 4],
        11 => [(c, s), (c, -s), r(d.lambda1()), r(d.lambda2())],
        12 | 13 => [(c, s), (c, -s), r(d.lambda()), r(d.lambda())],
        _ => [(c, s), (c, -s), (d.lambda(), d.mu()), (d.lambda(), -d.mu())],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{bracket, verify_jacobi, AlgebraElement};

    fn violation(r: Result<FamilyDescriptor, CatalogError>) -> String {
        match r {
            Err(CatalogError::ConstraintViolation { constraint, .. }) => constraint,
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn family_names_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
            assert_eq!(FamilyId::from_number(id.number()), Some(id));
        }
        assert!("G5_4_99".parse::<FamilyId>().is_err());
        assert_eq!(FamilyId::from_number(0), None);
    }

    #[test]
    fn validation_examples() {
        assert!(validate_params(FamilyId::G5_4_1, FamilyParams::lambdas3(2.0, 3.0, -1.0)).is_ok());
        assert_eq!(
            violation(validate_params(
                FamilyId::G5_4_1,
                FamilyParams::lambdas3(2.0, 2.0, 3.0)
            )),
            "lambda1 == lambda2"
        );
        assert!(validate_params(
            FamilyId::G5_4_14,
            FamilyParams::lambda_mu_phi(0.0, 1.0, PI / 2.0)
        )
        .is_ok());
    }

    #[test]
    fn boundary_points_are_rejected() {
        use FamilyId::*;
        let cases = [
            (
                G5_4_1,
                FamilyParams::lambdas3(0.0, 2.0, 3.0),
                "lambda1 == 0",
            ),
            (
                G5_4_1,
                FamilyParams::lambdas3(2.0, 3.0, 1.0),
                "lambda3 == 1",
            ),
            (
                G5_4_1,
                FamilyParams::lambdas3(2.0, 3.0, 2.0),
                "lambda1 == lambda3",
            ),
            (G5_4_2, FamilyParams::lambdas2(1.0, 2.0), "lambda1 == 1"),
            (
                G5_4_6,
                FamilyParams::lambdas2(2.0, 2.0),
                "lambda1 == lambda2",
            ),
            (G5_4_9, FamilyParams::lambda(0.0), "lambda == 0"),
            (
                G5_4_11,
                FamilyParams::lambdas2_phi(2.0, 3.0, 0.0),
                "phi not in (0,pi)",
            ),
            (
                G5_4_11,
                FamilyParams::lambdas2_phi(2.0, 2.0, 1.0),
                "lambda1 == lambda2",
            ),
            (
                G5_4_12,
                FamilyParams::lambda_phi(2.0, PI),
                "phi not in (0,pi)",
            ),
            (G5_4_13, FamilyParams::lambda_phi(0.0, 1.0), "lambda == 0"),
            (
                G5_4_14,
                FamilyParams::lambda_mu_phi(1.0, 0.0, 1.0),
                "mu <= 0",
            ),
            (
                G5_4_5,
                FamilyParams::lambda(2.0),
                "unexpected parameter lambda",
            ),
            (G5_4_3, FamilyParams::none(), "missing parameter lambda"),
            (
                G5_4_3,
                FamilyParams::lambda(f64::NAN),
                "lambda is not finite",
            ),
        ];
        for (id, p, msg) in cases {
            assert_eq!(violation(validate_params(id, p)), msg, "{id}");
        }
    }

    #[test]
    fn lambda_one_allowed_for_complex_families() {
        assert!(
            validate_params(FamilyId::G5_4_12, FamilyParams::lambda_phi(1.0, PI / 2.0)).is_ok()
        );
        assert!(
            validate_params(FamilyId::G5_4_11, FamilyParams::lambdas2_phi(1.0, 2.0, 1.0)).is_ok()
        );
    }

    #[test]
    fn adx1_displays() {
        let d5 = unparameterized(FamilyId::G5_4_5).unwrap();
        assert_eq!(adx1_matrix(&d5), Matrix4::identity());

        let d10 = unparameterized(FamilyId::G5_4_10).unwrap();
        let m = adx1_matrix(&d10);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j || j == i + 1 { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], want);
            }
        }

        let d12 =
            validate_params(FamilyId::G5_4_12, FamilyParams::lambda_phi(2.0, PI / 2.0)).unwrap();
        let want = Matrix4::new(
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 2.0, 0.0, //
            0.0, 0.0, 0.0, 2.0,
        );
        assert!((adx1_matrix(&d12) - want).abs().max() < 1e-15);
    }

    #[test]
    fn family5_and_family8_constants() {
        let c5 = build_algebra(&unparameterized(FamilyId::G5_4_5).unwrap());
        for k in 1..5 {
            assert_eq!(c5.get(0, k, k), 1.0);
            assert_eq!(c5.get(k, 0, k), -1.0);
        }

        let d8 = validate_params(FamilyId::G5_4_8, FamilyParams::lambda(2.0)).unwrap();
        let c = build_algebra(&d8);
        let mut want = StructureConstants::zero();
        for (j, k, v) in [
            (1, 1, 2.0),
            (2, 1, 1.0),
            (2, 2, 2.0),
            (3, 3, 1.0),
            (4, 3, 1.0),
            (4, 4, 1.0),
        ] {
            want.set_antisymmetric(0, j, k, v);
        }
        assert_eq!(c, want);
    }

    #[test]
    fn bracket_examples() {
        let d1 = validate_params(FamilyId::G5_4_1, FamilyParams::lambdas3(2.0, 3.0, -1.0)).unwrap();
        let c1 = build_algebra(&d1);
        let x = AlgebraElement::basis;
        assert_eq!(
            bracket(&c1, &x(0), &x(1)),
            AlgebraElement([0.0, 2.0, 0.0, 0.0, 0.0])
        );
        assert_eq!(bracket(&c1, &x(1), &x(2)), AlgebraElement::default());

        let d6 = validate_params(FamilyId::G5_4_6, FamilyParams::lambdas2(2.0, 3.0)).unwrap();
        let c6 = build_algebra(&d6);
        assert_eq!(
            bracket(&c6, &x(0), &x(4)),
            AlgebraElement([0.0, 0.0, 0.0, 1.0, 1.0])
        );
    }

    #[test]
    fn derived_ideal_is_abelian_and_jacobi_holds() {
        let samples = [
            validate_params(FamilyId::G5_4_1, FamilyParams::lambdas3(2.0, 3.0, -1.0)).unwrap(),
            validate_params(FamilyId::G5_4_10, FamilyParams::none()).unwrap(),
            validate_params(FamilyId::G5_4_13, FamilyParams::lambda_phi(-0.7, 2.0)).unwrap(),
            validate_params(
                FamilyId::G5_4_14,
                FamilyParams::lambda_mu_phi(0.3, 2.0, 0.4),
            )
            .unwrap(),
        ];
        for d in samples {
            let c = build_algebra(&d);
            assert!(c.is_antisymmetric());
            assert!(verify_jacobi(&c));
            for i in 1..5 {
                for j in 1..5 {
                    for k in 0..5 {
                        assert_eq!(c.get(i, j, k), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn params_serialize_as_flat_map() {
        let p = FamilyParams::lambda_mu_phi(0.0, 1.0, 0.5);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"lambda":0.0,"mu":1.0,"phi":0.5}"#);
        let back: FamilyParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
