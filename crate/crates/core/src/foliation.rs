//! MD5-foliations on the generic stratum and their topological classification.
//!
//! The generic stratum `V = {F : (β, γ, δ, σ) ≠ 0}` is foliated by the
//! 2-dimensional K-orbits. The fourteen families fall into three topological
//! types; [`equivalence_map`] sends leaves of each family onto leaves of the
//! canonical representative of its type:
//!
//! | type | families | canonical target |
//! |------|----------|------------------|
//! | F1   | 1–10     | `G5_4_5` (fibration over `S³`, see [`fibration_p45`]) |
//! | F2   | 11–13    | `G5_4_12(λ=1, φ=π/2)` (orbits of [`action_rho_412`]) |
//! | F3   | 14       | `G5_4_14(λ=0, μ=1, φ=π/2)` (orbits of [`action_rho_414`]) |
//!
//! Coordinates follow the notation `(x, y, z, t, s)` for `(α, β, γ, δ, σ)`.
//! Complex slots use the principal argument in `(-π, π]`, so the maps of
//! families 11–14 carry leaves onto leaves only along paths that do not cross
//! the negative real axis.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{unparameterized, validate_params, FamilyDescriptor, FamilyId, FamilyParams};
use crate::lie::Covector;
use crate::orbit::{
    blocks, is_generic, leaf_residual, orbit_param, recover_flow_param, Block, ToleranceConfig,
};
use crate::report::{Counterexample, PropertyReport, SampleOutcome};
use crate::sampling::{
    draw_descriptor, draw_generic_point, draw_pinned_point, sample_rng, suite_tag, uniform,
    SampleRng,
};

/// Bound on `h ∘ h⁻¹` and `h⁻¹ ∘ h` round trips.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// Bound on `|p₄,₅(F) − p₄,₅(G)|` for two points of one leaf.
pub const FIBER_TOL: f64 = 1e-9;

/// Bound on the action axiom `ρ(g₁g₂) = ρ(g₁)ρ(g₂)`.
pub const ACTION_AXIOM_TOL: f64 = 1e-12;

/// Keeps sampled complex arguments this far from the branch cut.
const BRANCH_MARGIN: f64 = 1e-3;

const CUT_SNAP: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoliationError {
    #[error("point {0:?} is not in the generic stratum")]
    NotGeneric([f64; 5]),
}

pub fn in_generic_stratum(_d: &FamilyDescriptor, f: &Covector) -> bool {
    is_generic(f)
}

/// The foliation `(V, 𝓕)` of one family; `V` is implicit in [`in_generic_stratum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoliationDescriptor {
    pub family: FamilyDescriptor,
}

impl FoliationDescriptor {
    pub fn contains(&self, f: &Covector) -> bool {
        in_generic_stratum(&self.family, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TopologicalType {
    F1,
    F2,
    F3,
}

impl TopologicalType {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologicalType::F1 => "F1",
            TopologicalType::F2 => "F2",
            TopologicalType::F3 => "F3",
        }
    }

    /// Connes C*-algebra of the foliation, where it is known in closed form.
    ///
    /// Type F1 foliations are trivial fibrations over `S³` with connected
    /// fibres, so their C*-algebra is `C(S³) ⊗ K`. Nothing is computed here.
    pub fn connes_algebra(self) -> Option<&'static str> {
        match self {
            TopologicalType::F1 => Some("C(S^3) ⊗ K"),
            _ => None,
        }
    }
}

impl fmt::Display for TopologicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn topological_type(id: FamilyId) -> TopologicalType {
    match id.number() {
        1..=10 => TopologicalType::F1,
        11..=13 => TopologicalType::F2,
        _ => TopologicalType::F3,
    }
}

pub fn canonical_target(t: TopologicalType) -> FoliationDescriptor {
    let family = match t {
        TopologicalType::F1 => unparameterized(FamilyId::G5_4_5),
        TopologicalType::F2 => {
            validate_params(FamilyId::G5_4_12, FamilyParams::lambda_phi(1.0, PI / 2.0))
        }
        TopologicalType::F3 => validate_params(
            FamilyId::G5_4_14,
            FamilyParams::lambda_mu_phi(0.0, 1.0, PI / 2.0),
        ),
    }
    .expect("canonical parameters are valid");
    FoliationDescriptor { family }
}

pub fn is_canonical(d: &FamilyDescriptor) -> bool {
    canonical_target(topological_type(d.id())).family == *d
}

// ---------------------------------------------------------------------------
// Scalar building blocks
// ---------------------------------------------------------------------------

/// `sign(u)·|u|^{1/λ}`, with `0 ↦ 0`.
fn power(u: f64, lambda: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u.signum() * u.abs().powf(1.0 / lambda)
    }
}

fn power_inv(v: f64, lambda: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(lambda)
    }
}

/// `s − t·ln|t|`, or `s` on `t = 0`.
fn shear(s: f64, t: f64) -> f64 {
    if t != 0.0 {
        s - t * t.abs().ln()
    } else {
        s
    }
}

fn unshear(s: f64, t: f64) -> f64 {
    if t != 0.0 {
        s + t * t.abs().ln()
    } else {
        s
    }
}

fn principal_log(w: Complex64) -> Complex64 {
    let mut theta = w.im.atan2(w.re);
    if theta == -PI {
        theta = PI;
    }
    Complex64::new(w.norm().ln(), theta)
}

/// `r·e^{iθ} ↦ e^{(ln r + iθ)·k}` with `θ ∈ (−π, π]`, and `0 ↦ 0`.
fn complex_power(re: f64, im: f64, k: Complex64) -> (f64, f64) {
    let w = Complex64::new(re, im);
    if w.norm() == 0.0 {
        return (0.0, 0.0);
    }
    let q = (principal_log(w) * k).exp();
    (q.re, q.im)
}

/// Preimage of [`complex_power`] whose argument is the one closest to zero.
///
/// Solving `e^{L·k} = q` gives `L = (Log q + 2πin)/k`; consecutive `n` shift
/// `Im L` by `2π·Re(1/k)`. Picking `Im L` in `(−π·Re(1/k), π·Re(1/k)]`
/// inverts the map exactly on the sector `|θ| < π·min(1, Re(1/k))`.
fn complex_power_inv(re: f64, im: f64, k: Complex64) -> (f64, f64) {
    let q = Complex64::new(re, im);
    if q.norm() == 0.0 {
        return (0.0, 0.0);
    }
    let inv = k.inv();
    let step = 2.0 * PI * inv.re;
    let l0 = principal_log(q) * inv;
    let mut n = (-l0.im / step).round();
    let theta = |n: f64| l0.im + n * step;
    if theta(n) <= -step / 2.0 {
        n += 1.0;
    } else if theta(n) > step / 2.0 {
        n -= 1.0;
    }
    let mut l = (principal_log(q) + Complex64::new(0.0, 2.0 * PI * n)) * inv;
    // A preimage on the negative real axis can come back a rounding error
    // past ±π; put it on the upper side, where the principal argument lives.
    if (l.im > PI && l.im - PI < CUT_SNAP) || (l.im <= -PI && -PI - l.im < CUT_SNAP) {
        l.im = PI;
    }
    let z = l.exp();
    (z.re, z.im)
}

/// Exponent `−i·e^{iφ}` of the first complex slot (families 11–14).
fn rotation_exponent(phi: f64) -> Complex64 {
    Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, phi)
}

/// Exponent of the second complex slot of family 14.
fn spiral_exponent(lambda: f64, mu: f64) -> Complex64 {
    if lambda != 0.0 {
        let n = lambda * lambda + mu * mu;
        Complex64::new(mu / n, -lambda / n)
    } else {
        Complex64::new(1.0 / mu, 0.0)
    }
}

/// Half-width of the argument sector on which each complex slot map is injective.
pub(crate) fn injectivity_sectors(d: &FamilyDescriptor) -> Vec<(usize, f64)> {
    match d.id().number() {
        11..=13 => vec![(1, PI * d.phi().sin().min(1.0))],
        14 => vec![
            (1, PI * d.phi().sin().min(1.0)),
            (
                3,
                PI * spiral_exponent(d.lambda(), d.mu()).inv().re.min(1.0),
            ),
        ],
        _ => Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Equivalence maps
// ---------------------------------------------------------------------------

/// Topological equivalence from the foliation of `d` onto the canonical
/// foliation of its type. Identity on the canonical families; the first
/// coordinate is always preserved.
pub fn equivalence_map(d: &FamilyDescriptor, p: &Covector) -> Covector {
    if is_canonical(d) {
        return *p;
    }
    let [x, y, z, t, s] = p.0;
    let l = d.lambda();
    let out = match d.id().number() {
        1 => [
            x,
            power(y, d.lambda1()),
            power(z, d.lambda2()),
            power(t, d.lambda3()),
            s,
        ],
        2 => [x, power(y, d.lambda1()), power(z, d.lambda2()), t, s],
        3 => [x, power(y, l), power(z, l), t, s],
        4 => [x, power(y, l), z, t, s],
        5 => [x, y, z, t, s],
        6 => [
            x,
            power(y, d.lambda1()),
            power(z, d.lambda2()),
            t,
            shear(s, t),
        ],
        7 => [x, power(y, l), power(z, l), t, shear(s, t)],
        8 => {
            let w = if y != 0.0 {
                z - y * y.abs().ln() / l
            } else {
                z
            };
            [x, power(y, l), power(w, l), t, shear(s, t)]
        }
        9 => {
            let t_new = if z != 0.0 { t - z * z.abs().ln() } else { t };
            let s_new = if z != 0.0 {
                let lz = z.abs().ln();
                if t_new != 0.0 {
                    s - 0.5 * t * lz - 0.5 * t_new * t_new.abs().ln()
                } else {
                    s - 0.5 * t * lz
                }
            } else {
                shear(s, t)
            };
            [x, power(y, l), z, t_new, s_new]
        }
        10 => {
            let (z_new, t_new, s_new) = family10_forward(y, z, t, s);
            [x, y, z_new, t_new, s_new]
        }
        11 => {
            let (u, v) = complex_power(y, z, rotation_exponent(d.phi()));
            [x, u, v, power(t, d.lambda1()), power(s, d.lambda2())]
        }
        12 => {
            let (u, v) = complex_power(y, z, rotation_exponent(d.phi()));
            [x, u, v, power(t, l), power(s, l)]
        }
        13 => {
            let (u, v) = complex_power(y, z, rotation_exponent(d.phi()));
            let w = if t != 0.0 {
                s - t * t.abs().ln() / l
            } else {
                s
            };
            [x, u, v, power(t, l), power(w, l)]
        }
        _ => {
            let (u, v) = complex_power(y, z, rotation_exponent(d.phi()));
            let (p, q) = complex_power(t, s, spiral_exponent(l, d.mu()));
            [x, u, v, p, q]
        }
    };
    Covector(out)
}

fn family10_forward(y: f64, z: f64, t: f64, s: f64) -> (f64, f64, f64) {
    if y != 0.0 {
        let ly = y.abs().ln();
        let z_new = z - y * ly;
        let t_new = if z_new != 0.0 {
            t - 0.5 * z * ly - 0.5 * z_new * z_new.abs().ln()
        } else {
            t - 0.5 * z * ly
        };
        let s_new = s - t * ly / 3.0 - (t - 0.5 * z * ly) * ly / 3.0
            + (z * ly - t - 0.5 * y * ly * ly) * ly / 3.0;
        (z_new, t_new, s_new)
    } else if z != 0.0 {
        let lz = z.abs().ln();
        let t_new = t - z * lz;
        let s_new = if t_new != 0.0 {
            s - 0.5 * t * lz - 0.5 * t_new * t_new.abs().ln()
        } else {
            s - 0.5 * t * lz
        };
        (z, t_new, s_new)
    } else {
        (z, t, shear(s, t))
    }
}

fn family10_inverse(y: f64, z_new: f64, t_new: f64, s_new: f64) -> (f64, f64, f64) {
    if y != 0.0 {
        let ly = y.abs().ln();
        let z = z_new + y * ly;
        let t = if z_new != 0.0 {
            t_new + 0.5 * z * ly + 0.5 * z_new * z_new.abs().ln()
        } else {
            t_new + 0.5 * z * ly
        };
        let s = s_new + t * ly / 3.0 + (t - 0.5 * z * ly) * ly / 3.0
            - (z * ly - t - 0.5 * y * ly * ly) * ly / 3.0;
        (z, t, s)
    } else if z_new != 0.0 {
        let z = z_new;
        let lz = z.abs().ln();
        let t = t_new + z * lz;
        let s = if t_new != 0.0 {
            s_new + 0.5 * t * lz + 0.5 * t_new * t_new.abs().ln()
        } else {
            s_new + 0.5 * t * lz
        };
        (z, t, s)
    } else {
        (z_new, t_new, unshear(s_new, t_new))
    }
}

/// Inverse of [`equivalence_map`].
///
/// For families 11–14 the complex slot maps are inverted on their
/// injectivity sector (see [`complex_power_inv`]), so `h ∘ h⁻¹ = id` on the
/// image and `h⁻¹ ∘ h = id` on points whose complex arguments lie in that sector.
pub fn equivalence_map_inverse(d: &FamilyDescriptor, q: &Covector) -> Covector {
    if is_canonical(d) {
        return *q;
    }
    let [x, y, z, t, s] = q.0;
    let l = d.lambda();
    let out = match d.id().number() {
        1 => [
            x,
            power_inv(y, d.lambda1()),
            power_inv(z, d.lambda2()),
            power_inv(t, d.lambda3()),
            s,
        ],
        2 => [
            x,
            power_inv(y, d.lambda1()),
            power_inv(z, d.lambda2()),
            t,
            s,
        ],
        3 => [x, power_inv(y, l), power_inv(z, l), t, s],
        4 => [x, power_inv(y, l), z, t, s],
        5 => [x, y, z, t, s],
        6 => [
            x,
            power_inv(y, d.lambda1()),
            power_inv(z, d.lambda2()),
            t,
            unshear(s, t),
        ],
        7 => [x, power_inv(y, l), power_inv(z, l), t, unshear(s, t)],
        8 => {
            let y0 = power_inv(y, l);
            let w = power_inv(z, l);
            let z0 = if y0 != 0.0 {
                w + y0 * y0.abs().ln() / l
            } else {
                w
            };
            [x, y0, z0, t, unshear(s, t)]
        }
        9 => {
            let t0 = if z != 0.0 { t + z * z.abs().ln() } else { t };
            let s0 = if z != 0.0 {
                let lz = z.abs().ln();
                if t != 0.0 {
                    s + 0.5 * t0 * lz + 0.5 * t * t.abs().ln()
                } else {
                    s + 0.5 * t0 * lz
                }
            } else {
                unshear(s, t)
            };
            [x, power_inv(y, l), z, t0, s0]
        }
        10 => {
            let (z0, t0, s0) = family10_inverse(y, z, t, s);
            [x, y, z0, t0, s0]
        }
        11 => {
            let (u, v) = complex_power_inv(y, z, rotation_exponent(d.phi()));
            [
                x,
                u,
                v,
                power_inv(t, d.lambda1()),
                power_inv(s, d.lambda2()),
            ]
        }
        12 => {
            let (u, v) = complex_power_inv(y, z, rotation_exponent(d.phi()));
            [x, u, v, power_inv(t, l), power_inv(s, l)]
        }
        13 => {
            let (u, v) = complex_power_inv(y, z, rotation_exponent(d.phi()));
            let t0 = power_inv(t, l);
            let w = power_inv(s, l);
            let s0 = if t0 != 0.0 {
                w + t0 * t0.abs().ln() / l
            } else {
                w
            };
            [x, u, v, t0, s0]
        }
        _ => {
            let (u, v) = complex_power_inv(y, z, rotation_exponent(d.phi()));
            let (p, r) = complex_power_inv(t, s, spiral_exponent(l, d.mu()));
            [x, u, v, p, r]
        }
    };
    Covector(out)
}

/// Per-coordinate distance, relative above unit magnitude and absolute below it.
pub fn round_trip_residual(a: &Covector, b: &Covector) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(u, v)| (u - v).abs() / u.abs().max(v.abs()).max(1.0))
        .fold(0.0, |m, r| if r.is_nan() { f64::NAN } else { m.max(r) })
}

// ---------------------------------------------------------------------------
// Part 2: fibration and R²-actions
// ---------------------------------------------------------------------------

/// A point of the unit sphere `S³ ⊂ ℝ⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint([f64; 4]);

impl SpherePoint {
    /// Normalizes a nonzero vector onto `S³`.
    pub fn from_direction(v: [f64; 4]) -> Option<Self> {
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Self(v.map(|c| c / n)))
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Projection `V ≅ S³ × ℝ₊ × ℝ → S³` whose fibres are the leaves of `𝓕₄,₅`.
pub fn fibration_p45(p: &Covector) -> Result<SpherePoint, FoliationError> {
    SpherePoint::from_direction(p.tail()).ok_or(FoliationError::NotGeneric(p.0))
}

/// `ρ₄,₁₂((r, a), (x, y+iz, t, s)) = (x+r, (y+iz)e^{−ia}, t·eᵃ, s·eᵃ)`.
pub fn action_rho_412(r: f64, a: f64, p: &Covector) -> Covector {
    let [x, y, z, t, s] = p.0;
    let w = Complex64::new(y, z) * Complex64::from_polar(1.0, -a);
    let e = a.exp();
    Covector([x + r, w.re, w.im, t * e, s * e])
}

/// `ρ₄,₁₄((r, a), (x, y+iz, t+is)) = (x+r, (y+iz)e^{−ia}, (t+is)e^{−ia})`.
pub fn action_rho_414(r: f64, a: f64, p: &Covector) -> Covector {
    let [x, y, z, t, s] = p.0;
    let rot = Complex64::from_polar(1.0, -a);
    let w = Complex64::new(y, z) * rot;
    let u = Complex64::new(t, s) * rot;
    Covector([x + r, w.re, w.im, u.re, u.im])
}

/// Group element `(r, a)` with `ρ₄,₁₂((r, a), p) ≈ q`, when `q` lies on the orbit of `p`.
pub fn solve_rho_412(p: &Covector, q: &Covector) -> Option<(f64, f64)> {
    let target = canonical_target(TopologicalType::F2).family;
    recover_flow_param(&target, p, q).map(|a| (q.alpha() - p.alpha(), a))
}

/// Group element `(r, a)` with `ρ₄,₁₄((r, a), p) ≈ q`, when `q` lies on the orbit of `p`.
pub fn solve_rho_414(p: &Covector, q: &Covector) -> Option<(f64, f64)> {
    let target = canonical_target(TopologicalType::F3).family;
    recover_flow_param(&target, p, q).map(|a| (q.alpha() - p.alpha(), a))
}

// ---------------------------------------------------------------------------
// Leaf-to-leaf certification
// ---------------------------------------------------------------------------

/// Where sampled base points live.
#[derive(Debug, Clone, PartialEq)]
pub enum Stratum {
    /// Uniform generic points.
    Open,
    /// Generic points with the listed slots set to exactly zero.
    Zero(Vec<usize>),
    /// As `Zero`, plus `F[dependent] = F[source]·ln|F[source]|`, which zeroes
    /// one of the log-shear differences at the base point.
    LogLocked {
        zero: Vec<usize>,
        dependent: usize,
        source: usize,
    },
}

const SLOT_NAMES: [&str; 5] = ["x", "y", "z", "t", "s"];

impl Stratum {
    pub fn name(&self) -> String {
        let zeros = |z: &[usize]| {
            z.iter()
                .map(|k| format!("{}=0", SLOT_NAMES[*k]))
                .collect::<Vec<_>>()
        };
        match self {
            Stratum::Open => "open".to_string(),
            Stratum::Zero(z) => zeros(z).join(","),
            Stratum::LogLocked {
                zero,
                dependent,
                source,
            } => {
                let mut parts = zeros(zero);
                let src = SLOT_NAMES[*source];
                parts.push(format!("{}={}*ln|{}|", SLOT_NAMES[*dependent], src, src));
                parts.join(",")
            }
        }
    }

    pub fn draw(&self, rng: &mut SampleRng) -> Covector {
        match self {
            Stratum::Open => draw_generic_point(rng),
            Stratum::Zero(z) => draw_pinned_point(rng, z),
            Stratum::LogLocked {
                zero,
                dependent,
                source,
            } => {
                let mut f = draw_pinned_point(rng, zero);
                let v = f.0[*source];
                f.0[*dependent] = if v != 0.0 { v * v.abs().ln() } else { 0.0 };
                f
            }
        }
    }
}

/// Branch-pinned strata exercising every piecewise case of the family's map.
pub fn leaf_strata(id: FamilyId) -> Vec<Stratum> {
    let z = |v: &[usize]| Stratum::Zero(v.to_vec());
    let mut out = Vec::new();
    match id.number() {
        1..=10 => {
            for pins in [&[1][..], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]] {
                out.push(z(pins));
            }
        }
        _ => {
            for pins in [&[1, 2][..], &[3], &[4], &[3, 4]] {
                out.push(z(pins));
            }
        }
    }
    match id.number() {
        9 => out.push(Stratum::LogLocked {
            zero: vec![],
            dependent: 3,
            source: 2,
        }),
        10 => {
            out.push(Stratum::LogLocked {
                zero: vec![],
                dependent: 2,
                source: 1,
            });
            out.push(Stratum::LogLocked {
                zero: vec![1],
                dependent: 3,
                source: 2,
            });
        }
        _ => {}
    }
    out
}

/// Interval of flow parameters within `[lo, hi]` along which no complex slot
/// of `f` crosses the branch cut of the principal argument.
pub fn branch_safe_interval(
    d: &FamilyDescriptor,
    f: &Covector,
    lo: f64,
    hi: f64,
) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (lo, hi);
    for b in blocks(d) {
        if let Block::Complex { start, rate } = b {
            let (re, im) = (f.0[start], f.0[start + 1]);
            if re == 0.0 && im == 0.0 || rate.im == 0.0 {
                continue;
            }
            let theta = principal_log(Complex64::new(re, im)).im;
            let a1 = (-PI + BRANCH_MARGIN - theta) / rate.im;
            let a2 = (PI - BRANCH_MARGIN - theta) / rate.im;
            lo = lo.max(a1.min(a2));
            hi = hi.min(a1.max(a2));
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// Source of family parameters for a suite: fixed, or drawn per sample.
#[derive(Debug, Clone, Copy)]
pub enum ParamSource {
    Fixed(FamilyDescriptor),
    Random(FamilyId),
}

impl ParamSource {
    pub fn id(&self) -> FamilyId {
        match self {
            ParamSource::Fixed(d) => d.id(),
            ParamSource::Random(id) => *id,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ParamSource::Fixed(d) => d.label(),
            ParamSource::Random(id) => format!("{id}(random)"),
        }
    }

    pub fn draw(&self, rng: &mut SampleRng) -> FamilyDescriptor {
        match self {
            ParamSource::Fixed(d) => *d,
            ParamSource::Random(id) => draw_descriptor(*id, rng),
        }
    }
}

/// Draws a base point on `stratum` together with a branch-safe `a ∈ [-1, 1]`.
fn draw_leaf_sample(
    d: &FamilyDescriptor,
    stratum: &Stratum,
    rng: &mut SampleRng,
) -> (Covector, f64, f64) {
    loop {
        let f = stratum.draw(rng);
        if let Some((lo, hi)) = branch_safe_interval(d, &f, -1.0, 1.0) {
            let a = uniform(rng, lo, hi);
            let x = uniform(rng, -10.0, 10.0);
            return (f, x, a);
        }
    }
}

/// Checks that `h` maps the leaf through `f` into the canonical leaf through
/// `h(f)`, and that `h ∘ h⁻¹` fixes both images.
pub fn leaf_to_leaf_sample(
    d: &FamilyDescriptor,
    f: &Covector,
    x: f64,
    a: f64,
    tol: &ToleranceConfig,
) -> (f64, f64, bool) {
    let target = canonical_target(topological_type(d.id())).family;
    let g = orbit_param(d, f, x, a);
    let hf = equivalence_map(d, f);
    let hg = equivalence_map(d, &g);
    let residual = leaf_residual(&target, &hf, &hg);
    let rt = round_trip_residual(&equivalence_map(d, &equivalence_map_inverse(d, &hf)), &hf).max(
        round_trip_residual(&equivalence_map(d, &equivalence_map_inverse(d, &hg)), &hg),
    );
    let x_kept = hf.alpha() == f.alpha() && hg.alpha() == g.alpha();
    let pass = residual <= tol.membership_tol && rt <= ROUND_TRIP_TOL && x_kept;
    (residual, rt, pass)
}

/// Leaf-to-leaf property over `n_samples` draws from `stratum`.
pub fn leaf_to_leaf_suite(
    source: ParamSource,
    stratum: &Stratum,
    seed: u64,
    n_samples: usize,
    tol: &ToleranceConfig,
) -> PropertyReport {
    let suite = if *stratum == Stratum::Open {
        "leaf_to_leaf".to_string()
    } else {
        format!("leaf_to_leaf[{}]", stratum.name())
    };
    let tag = suite_tag(&suite);
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, source.id(), tag, i as u64);
            let d = source.draw(&mut rng);
            let (f, x, a) = draw_leaf_sample(&d, stratum, &mut rng);
            let (residual, rt, pass) = leaf_to_leaf_sample(&d, &f, x, a, tol);
            SampleOutcome {
                residual,
                secondary: rt,
                pass,
                counterexample: (!pass).then(|| Counterexample {
                    sample: i,
                    family: d.label(),
                    point: f.0,
                    x,
                    a,
                    residual,
                    detail: format!("round_trip={rt:e}"),
                }),
            }
        })
        .collect();
    PropertyReport::collect(
        suite,
        source.label(),
        tol.membership_tol,
        Some(("round_trip", ROUND_TRIP_TOL)),
        outcomes,
    )
}

pub fn check_leaf_to_leaf(
    d: &FamilyDescriptor,
    seed: u64,
    n_samples: usize,
    tol: &ToleranceConfig,
) -> PropertyReport {
    leaf_to_leaf_suite(
        ParamSource::Fixed(*d),
        &Stratum::Open,
        seed,
        n_samples.max(1),
        tol,
    )
}

/// Draws a generic point whose complex arguments lie in the injectivity sector
/// of the family's map, by scaling the argument into the sector.
pub fn draw_sector_point(d: &FamilyDescriptor, rng: &mut SampleRng) -> Covector {
    let mut f = draw_generic_point(rng);
    for (start, half_width) in injectivity_sectors(d) {
        let w = Complex64::new(f.0[start], f.0[start + 1]);
        if w.norm() == 0.0 {
            continue;
        }
        let theta = principal_log(w).im;
        if theta.abs() >= half_width * (1.0 - BRANCH_MARGIN) {
            let scaled =
                Complex64::from_polar(w.norm(), theta * half_width / PI * (1.0 - BRANCH_MARGIN));
            f.0[start] = scaled.re;
            f.0[start + 1] = scaled.im;
        }
    }
    f
}

/// `h⁻¹ ∘ h` and `h ∘ h⁻¹` on the image, plus exact preservation of the first coordinate.
pub fn round_trip_suite(source: ParamSource, seed: u64, n_samples: usize) -> PropertyReport {
    let tag = suite_tag("round_trip");
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, source.id(), tag, i as u64);
            let d = source.draw(&mut rng);
            let p = draw_sector_point(&d, &mut rng);
            let hp = equivalence_map(&d, &p);
            let back = round_trip_residual(&equivalence_map_inverse(&d, &hp), &p);
            let forth =
                round_trip_residual(&equivalence_map(&d, &equivalence_map_inverse(&d, &hp)), &hp);
            let residual = back.max(forth);
            let x_kept = hp.alpha() == p.alpha();
            let pass = residual <= ROUND_TRIP_TOL && x_kept;
            SampleOutcome {
                residual,
                secondary: 0.0,
                pass,
                counterexample: (!pass).then(|| Counterexample {
                    sample: i,
                    family: d.label(),
                    point: p.0,
                    x: p.alpha(),
                    a: 0.0,
                    residual,
                    detail: format!(
                        "inverse_after={back:e} inverse_before={forth:e} x_kept={x_kept}"
                    ),
                }),
            }
        })
        .collect();
    PropertyReport::collect("round_trip", source.label(), ROUND_TRIP_TOL, None, outcomes)
}

/// Leaves of `𝓕₄,₅` against fibres of `p₄,₅`, in both directions.
pub fn fibration_suite(seed: u64, n_samples: usize, tol: &ToleranceConfig) -> PropertyReport {
    let d5 = canonical_target(TopologicalType::F1).family;
    let tag = suite_tag("fibration_p45");
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, FamilyId::G5_4_5, tag, i as u64);
            let f = draw_generic_point(&mut rng);
            let x = uniform(&mut rng, -10.0, 10.0);
            let a = uniform(&mut rng, -3.0, 3.0);
            let pf = fibration_p45(&f).expect("generic");
            // Same leaf: must share the fibre.
            let g = orbit_param(&d5, &f, x, a);
            let same_fiber = pf.distance(&fibration_p45(&g).expect("generic"));
            let mut consistent =
                leaf_residual(&d5, &f, &g) <= tol.membership_tol && same_fiber <= FIBER_TOL;
            // Same fibre: must share the leaf.
            let c = uniform(&mut rng, 0.01, 100.0);
            let scaled =
                Covector::from_parts(uniform(&mut rng, -10.0, 10.0), f.tail().map(|v| v * c));
            consistent &= leaf_residual(&d5, &f, &scaled) <= tol.membership_tol
                && pf.distance(&fibration_p45(&scaled).expect("generic")) <= FIBER_TOL;
            // Nearby and unrelated points: off the leaf and off the fibre.
            let mut nearby = g;
            let k = 1 + (i % 4);
            nearby.0[k] += 1e-3 * nearby.0[k].abs().max(1.0);
            let other = draw_generic_point(&mut rng);
            for h in [nearby, other] {
                let on_leaf = leaf_residual(&d5, &f, &h) <= tol.membership_tol;
                let on_fiber = pf.distance(&fibration_p45(&h).expect("generic")) <= FIBER_TOL;
                consistent &= on_leaf == on_fiber;
            }
            SampleOutcome {
                residual: same_fiber,
                secondary: 0.0,
                pass: consistent,
                counterexample: (!consistent).then(|| Counterexample {
                    sample: i,
                    family: d5.label(),
                    point: f.0,
                    x,
                    a,
                    residual: same_fiber,
                    detail: "leaf and fibre disagree".to_string(),
                }),
            }
        })
        .collect();
    PropertyReport::collect("fibration_p45", d5.label(), FIBER_TOL, None, outcomes)
}

/// Orbits of `ρ₄,₁₂` (or `ρ₄,₁₄`) against leaves of the canonical F2 (or F3)
/// foliation, in both directions, plus the action axiom.
pub fn action_suite(
    t: TopologicalType,
    seed: u64,
    n_samples: usize,
    tol: &ToleranceConfig,
) -> PropertyReport {
    type Action = fn(f64, f64, &Covector) -> Covector;
    type Solver = fn(&Covector, &Covector) -> Option<(f64, f64)>;
    let (name, rho, solve): (&str, Action, Solver) = match t {
        TopologicalType::F2 => ("action_rho_412", action_rho_412, solve_rho_412),
        TopologicalType::F3 => ("action_rho_414", action_rho_414, solve_rho_414),
        TopologicalType::F1 => panic!("type F1 is a fibration, not an R^2-action"),
    };
    let target = canonical_target(t).family;
    let tag = suite_tag(name);
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, target.id(), tag, i as u64);
            let p = draw_generic_point(&mut rng);
            let r = uniform(&mut rng, -10.0, 10.0);
            let a = uniform(&mut rng, -3.0, 3.0);
            let forward = leaf_residual(&target, &p, &rho(r, a, &p));

            let x2 = uniform(&mut rng, -10.0, 10.0);
            let a2 = uniform(&mut rng, -3.0, 3.0);
            let g = orbit_param(&target, &p, x2, a2);
            let backward = match solve(&p, &g) {
                Some((r2, a_solved)) => round_trip_residual(&rho(r2, a_solved, &p), &g),
                None => f64::INFINITY,
            };

            let (r1, a1) = (uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -2.0, 2.0));
            let axiom = round_trip_residual(&rho(r1 + r, a1 + a, &p), &rho(r1, a1, &rho(r, a, &p)));

            let residual = forward.max(backward);
            let pass = residual <= tol.membership_tol && axiom <= ACTION_AXIOM_TOL;
            SampleOutcome {
                residual,
                secondary: axiom,
                pass,
                counterexample: (!pass).then(|| Counterexample {
                    sample: i,
                    family: target.label(),
                    point: p.0,
                    x: r,
                    a,
                    residual,
                    detail: format!("forward={forward:e} backward={backward:e} axiom={axiom:e}"),
                }),
            }
        })
        .collect();
    PropertyReport::collect(
        name,
        target.label(),
        tol.membership_tol,
        Some(("action_axiom", ACTION_AXIOM_TOL)),
        outcomes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::leaf_membership;

    fn d(id: FamilyId, p: FamilyParams) -> FamilyDescriptor {
        validate_params(id, p).unwrap()
    }

    fn close(a: &Covector, b: &Covector, tol: f64) -> bool {
        round_trip_residual(a, b) <= tol
    }

    #[test]
    fn stratum_membership() {
        let any = unparameterized(FamilyId::G5_4_5).unwrap();
        assert!(!in_generic_stratum(
            &any,
            &Covector::new(3.0, 0.0, 0.0, 0.0, 0.0)
        ));
        assert!(in_generic_stratum(
            &any,
            &Covector::new(0.0, 0.0, 0.0, 0.0, 1.0)
        ));
        let d14 = canonical_target(TopologicalType::F3).family;
        assert!(in_generic_stratum(
            &d14,
            &Covector::new(0.0, 0.0, 0.0, 1.0, 0.0)
        ));
    }

    #[test]
    fn types_and_targets() {
        assert_eq!(topological_type(FamilyId::G5_4_7), TopologicalType::F1);
        assert_eq!(topological_type(FamilyId::G5_4_13), TopologicalType::F2);
        assert_eq!(topological_type(FamilyId::G5_4_14), TopologicalType::F3);
        assert_eq!(
            canonical_target(TopologicalType::F1).family.id(),
            FamilyId::G5_4_5
        );
        let f2 = canonical_target(TopologicalType::F2).family;
        assert_eq!(
            (f2.id(), f2.lambda(), f2.phi()),
            (FamilyId::G5_4_12, 1.0, PI / 2.0)
        );
        let f3 = canonical_target(TopologicalType::F3).family;
        assert_eq!(
            (f3.id(), f3.lambda(), f3.mu(), f3.phi()),
            (FamilyId::G5_4_14, 0.0, 1.0, PI / 2.0)
        );
        assert_eq!(TopologicalType::F1.connes_algebra(), Some("C(S^3) ⊗ K"));
        assert_eq!(TopologicalType::F2.connes_algebra(), None);
    }

    #[test]
    fn h41_examples() {
        let h = d(FamilyId::G5_4_1, FamilyParams::lambdas3(2.0, 3.0, 4.0));
        let img = equivalence_map(&h, &Covector::new(0.0, 4.0, 8.0, 16.0, 5.0));
        assert!(close(&img, &Covector::new(0.0, 2.0, 2.0, 2.0, 5.0), 1e-15));
        let fixed = Covector::new(-3.0, 1.0, 1.0, 1.0, 7.0);
        assert_eq!(equivalence_map(&h, &fixed), fixed);
        let back = equivalence_map_inverse(&h, &Covector::new(0.0, 2.0, 2.0, 2.0, 5.0));
        assert!(close(
            &back,
            &Covector::new(0.0, 4.0, 8.0, 16.0, 5.0),
            1e-15
        ));
        assert_eq!(equivalence_map_inverse(&h, &fixed), fixed);
    }

    #[test]
    fn h413_quarter_turn_is_identity_on_complex_slot() {
        // −i·e^{iπ/2} = 1; with λ = 1 the t = 0 branch leaves s alone.
        let h = d(FamilyId::G5_4_13, FamilyParams::lambda_phi(1.0, PI / 2.0));
        let p = Covector::new(2.0, 0.6, -1.7, 0.0, 3.5);
        assert!(close(&equivalence_map(&h, &p), &p, 1e-15));
    }

    #[test]
    fn canonical_maps_are_identity() {
        for t in [
            TopologicalType::F1,
            TopologicalType::F2,
            TopologicalType::F3,
        ] {
            let c = canonical_target(t).family;
            let p = Covector::new(1.0, -2.0, 3.0, -4.0, 5.0);
            assert_eq!(equivalence_map(&c, &p), p);
            assert_eq!(equivalence_map_inverse(&c, &p), p);
        }
    }

    #[test]
    fn h49_missing_branch_keeps_leaves() {
        // γ = 0: (t, s) = (δeᵃ, (aδ + σ)eᵃ), handled by s − t·ln|t|.
        let tol = ToleranceConfig::default();
        let h = d(FamilyId::G5_4_9, FamilyParams::lambda(2.5));
        let f = Covector::new(0.0, 1.5, 0.0, -2.0, 0.7);
        for a in [-0.8, 0.3, 1.0] {
            let (res, rt, pass) = leaf_to_leaf_sample(&h, &f, 1.0, a, &tol);
            assert!(pass, "a={a} residual={res} rt={rt}");
        }
    }

    #[test]
    fn h410_every_branch_keeps_leaves() {
        let tol = ToleranceConfig::default();
        let h = unparameterized(FamilyId::G5_4_10).unwrap();
        let points = [
            Covector::new(0.0, 1.5, -0.4, 2.0, 0.7),
            Covector::new(0.0, 0.0, -0.4, 2.0, 0.7),
            Covector::new(0.0, 0.0, 0.0, 2.0, 0.7),
            Covector::new(0.0, 0.0, 0.0, 0.0, 0.7),
            Covector::new(0.0, 2.0, 2.0 * 2f64.ln(), 1.0, -1.0),
        ];
        for f in points {
            for a in [-1.0, -0.2, 0.6] {
                let (res, rt, pass) = leaf_to_leaf_sample(&h, &f, 0.0, a, &tol);
                assert!(pass, "f={f:?} a={a} residual={res} rt={rt}");
            }
        }
    }

    #[test]
    fn h413_general_lambda_keeps_leaves() {
        let tol = ToleranceConfig::default();
        let h = d(FamilyId::G5_4_13, FamilyParams::lambda_phi(-2.5, 0.8));
        for f in [
            Covector::new(0.0, 1.0, 0.2, 1.5, -0.3),
            Covector::new(0.0, 1.0, 0.2, 0.0, -0.3),
        ] {
            let (res, _, pass) = leaf_to_leaf_sample(&h, &f, 0.0, 0.4, &tol);
            assert!(pass, "residual={res}");
        }
    }

    #[test]
    fn complex_power_inverse_on_sector() {
        for phi in [0.15, 1.0, PI / 2.0, 2.5] {
            let k = rotation_exponent(phi);
            let half = PI * phi.sin();
            for theta in [-0.99 * half, -0.3 * half, 0.0, 0.5 * half, 0.99 * half] {
                let w = Complex64::from_polar(3.7, theta);
                let (u, v) = complex_power(w.re, w.im, k);
                let (re, im) = complex_power_inv(u, v, k);
                assert!(
                    (Complex64::new(re, im) - w).norm() < 1e-12 * w.norm(),
                    "phi={phi} theta={theta}"
                );
                // Any q is hit again after inversion.
                let q = Complex64::from_polar(0.4, 2.9);
                let (a, b) = complex_power_inv(q.re, q.im, k);
                let (c, e) = complex_power(a, b, k);
                assert!((Complex64::new(c, e) - q).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn complex_map_is_not_injective_off_the_quarter_turn() {
        // Two distinct points with one image: the reason inversion is sector-bound.
        let phi = PI / 4.0;
        let k = rotation_exponent(phi);
        let l1 = Complex64::new(0.0, 2.0);
        let l2 = l1 - Complex64::new(0.0, 2.0 * PI) / k;
        assert!(l2.im.abs() < PI);
        let (a, b) = complex_power(l1.exp().re, l1.exp().im, k);
        let (c, e) = complex_power(l2.exp().re, l2.exp().im, k);
        assert!((a - c).abs() < 1e-12 && (b - e).abs() < 1e-12);
        assert!((l1.exp() - l2.exp()).norm() > 1.0);
    }

    #[test]
    fn fibration_examples() {
        let p = fibration_p45(&Covector::new(7.0, 0.0, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(p.coords(), [0.0, 0.0, 0.0, 1.0]);
        let p = fibration_p45(&Covector::new(0.0, 3.0, 4.0, 0.0, 0.0)).unwrap();
        assert!((p.coords()[0] - 0.6).abs() < 1e-16 && (p.coords()[1] - 0.8).abs() < 1e-16);
        assert!(fibration_p45(&Covector::new(1.0, 0.0, 0.0, 0.0, 0.0)).is_err());

        let d5 = unparameterized(FamilyId::G5_4_5).unwrap();
        let f = Covector::new(1.0, 2.0, -1.0, 0.5, 3.0);
        let g = orbit_param(&d5, &f, -4.0, 1.3);
        assert!(
            fibration_p45(&f)
                .unwrap()
                .distance(&fibration_p45(&g).unwrap())
                < 1e-15
        );
    }

    #[test]
    fn action_examples() {
        let p = Covector::new(0.3, 1.0, -2.0, 0.5, 4.0);
        assert!(close(&action_rho_412(0.0, 0.0, &p), &p, 0.0));
        assert!(close(&action_rho_414(0.0, 0.0, &p), &p, 0.0));

        let got = action_rho_412(1.0, 2f64.ln(), &Covector::new(0.0, 1.0, 0.0, 1.0, 1.0));
        let want = Covector::new(1.0, 2f64.ln().cos(), -(2f64.ln().sin()), 2.0, 2.0);
        assert!(close(&got, &want, 1e-15));

        let got = action_rho_414(0.0, PI, &Covector::new(0.0, 1.0, 0.0, 1.0, 0.0));
        assert!(close(
            &got,
            &Covector::new(0.0, -1.0, 0.0, -1.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn rho414_orbit_is_canonical_leaf() {
        let tol = ToleranceConfig::default();
        let target = canonical_target(TopologicalType::F3).family;
        let p = Covector::new(0.0, 1.0, -0.5, 2.0, 0.25);
        for (r, a) in [(1.0, 0.5), (-3.0, 4.0), (0.0, -2.2)] {
            let q = action_rho_414(r, a, &p);
            assert!(leaf_membership(&target, &p, &q, &tol));
            assert!(leaf_membership(&target, &q, &p, &tol));
            let (r2, a2) = solve_rho_414(&p, &q).unwrap();
            assert!(close(&action_rho_414(r2, a2, &p), &q, 1e-12));
        }
    }

    #[test]
    fn branch_safe_interval_excludes_cut() {
        let d11 = d(
            FamilyId::G5_4_11,
            FamilyParams::lambdas2_phi(2.0, 3.0, PI / 2.0),
        );
        // arg = 3.0 rad, rotating by −a: a ∈ (3 − π, 3 + π) ∩ [−1, 1].
        let f = Covector::new(0.0, 3.0f64.cos(), 3.0f64.sin(), 1.0, 1.0);
        let (lo, hi) = branch_safe_interval(&d11, &f, -1.0, 1.0).unwrap();
        assert!((lo - (3.0 - PI + BRANCH_MARGIN)).abs() < 1e-12);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn fixed_family_leaf_to_leaf_smoke() {
        let tol = ToleranceConfig::default();
        let r = check_leaf_to_leaf(&unparameterized(FamilyId::G5_4_5).unwrap(), 1, 50, &tol);
        assert!(r.all_passed());
        assert!(r.max_residual < 1e-14);
    }
}
