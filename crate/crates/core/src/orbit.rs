//! Coadjoint orbits (K-orbits) of the MD5-groups in closed form.
//!
//! Every 2-dimensional orbit is parametrized by `(x, a) ∈ ℝ²`: the first
//! coordinate is free and the tail `(β, γ, δ, σ)` moves along
//! `exp(a·Mᵀ)`, where `M` is the ad-matrix of the family. Families 11–14 use
//! the complex identifications `ℝ×ℂ×ℝ²` and `ℝ×ℂ×ℂ`.
//!
//! The closed forms in [`orbit_param`] are checked against the Lie algebra two
//! independent ways: [`tangent_residual`] compares their tangent plane with the
//! span of the coadjoint generators, and [`numeric_flow`] integrates those
//! generators with RK4.

use std::f64::consts::PI;

use nalgebra::{Vector5, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{build_algebra, FamilyDescriptor};
use crate::lie::{
    coad_generator_matrix, coad_span_matrix, kirillov_form, rank_skew, AlgebraElement, Covector,
    LieError,
};

/// Half-width of the `a`-window searched when the flow parameter can only be
/// read off a pure rotation (it is then determined modulo a period).
pub const ROTATION_SEARCH_WINDOW: f64 = 64.0;

/// Below this ratio `|Re κ| / |κ|` a complex slot is treated as a rotation
/// when recovering `a`.
const MODULUS_PIVOT_MIN: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error(
        "rank {rank} (odd count: {odd}) disagrees with closed-form dimension {closed} at {point:?}"
    )]
    InternalInconsistency {
        rank: usize,
        odd: bool,
        closed: usize,
        point: [f64; 5],
    },
    #[error("point {0:?} is a fixed point; a generic point is required")]
    NotGeneric([f64; 5]),
    #[error("step count must be at least 1")]
    InvalidSteps,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub membership_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_tol: 1e-9,
            residual_tol: 1e-8,
            membership_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_tol: f64, residual_tol: f64, membership_tol: f64) -> Result<Self, OrbitError> {
        let t = Self {
            rank_tol,
            residual_tol,
            membership_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), OrbitError> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("residual_tol", self.residual_tol),
            ("membership_tol", self.membership_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(OrbitError::InvalidTolerance(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// True iff `(β, γ, δ, σ) ≠ 0` exactly.
pub fn is_generic(f: &Covector) -> bool {
    f.tail().iter().any(|&v| v != 0.0)
}

pub fn orbit_dimension(
    d: &FamilyDescriptor,
    f: &Covector,
    tol: &ToleranceConfig,
) -> Result<usize, OrbitError> {
    let c = build_algebra(d);
    let r = rank_skew(&kirillov_form(&c, f), tol.rank_tol)?;
    let closed = if is_generic(f) { 2 } else { 0 };
    if r.odd_count || r.rank != closed {
        return Err(OrbitError::InternalInconsistency {
            rank: r.rank,
            odd: r.odd_count,
            closed,
            point: f.0,
        });
    }
    Ok(closed)
}

fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Closed-form point of the orbit through `f` with parameters `(x, a)`.
///
/// At a fixed point the tail stays put (the map is constant in `a`).
pub fn orbit_param(d: &FamilyDescriptor, f: &Covector, x: f64, a: f64) -> Covector {
    let [_, b, g, de, s] = f.0;
    let e = |rate: f64| (a * rate).exp();
    let rotate = |re: f64, im: f64, kappa: Complex64| cplx(re, im) * (kappa * a).exp();
    let e_minus_i_phi = || Complex64::from_polar(1.0, -d.phi());
    let tail = match d.id().number() {
        1 => [
            b * e(d.lambda1()),
            g * e(d.lambda2()),
            de * e(d.lambda3()),
            s * e(1.0),
        ],
        2 => [
            b * e(d.lambda1()),
            g * e(d.lambda2()),
            de * e(1.0),
            s * e(1.0),
        ],
        3 => [
            b * e(d.lambda()),
            g * e(d.lambda()),
            de * e(1.0),
            s * e(1.0),
        ],
        4 => [b * e(d.lambda()), g * e(1.0), de * e(1.0), s * e(1.0)],
        5 => [b * e(1.0), g * e(1.0), de * e(1.0), s * e(1.0)],
        6 => [
            b * e(d.lambda1()),
            g * e(d.lambda2()),
            de * e(1.0),
            de * a * e(1.0) + s * e(1.0),
        ],
        7 => [
            b * e(d.lambda()),
            g * e(d.lambda()),
            de * e(1.0),
            de * a * e(1.0) + s * e(1.0),
        ],
        8 => [
            b * e(d.lambda()),
            b * a * e(d.lambda()) + g * e(d.lambda()),
            de * e(1.0),
            de * a * e(1.0) + s * e(1.0),
        ],
        9 => [
            b * e(d.lambda()),
            g * e(1.0),
            g * a * e(1.0) + de * e(1.0),
            g * a * a * e(1.0) / 2.0 + de * a * e(1.0) + s * e(1.0),
        ],
        10 => [
            b * e(1.0),
            b * a * e(1.0) + g * e(1.0),
            b * a * a * e(1.0) / 2.0 + g * a * e(1.0) + de * e(1.0),
            b * a * a * a * e(1.0) / 6.0 + g * a * a * e(1.0) / 2.0 + de * a * e(1.0) + s * e(1.0),
        ],
        11 => {
            let w = rotate(b, g, e_minus_i_phi());
            [w.re, w.im, de * e(d.lambda1()), s * e(d.lambda2())]
        }
        12 => {
            let w = rotate(b, g, e_minus_i_phi());
            [w.re, w.im, de * e(d.lambda()), s * e(d.lambda())]
        }
        13 => {
            let w = rotate(b, g, e_minus_i_phi());
            [
                w.re,
                w.im,
                de * e(d.lambda()),
                de * a * e(d.lambda()) + s * e(d.lambda()),
            ]
        }
        _ => {
            let w = rotate(b, g, e_minus_i_phi());
            let z = rotate(de, s, cplx(d.lambda(), -d.mu()));
            [w.re, w.im, z.re, z.im]
        }
    };
    Covector::from_parts(x, tail)
}

/// A 2-dimensional orbit given by its closed form, anchored at `base`.
#[derive(Debug, Clone, Copy)]
pub struct OrbitChart {
    pub descriptor: FamilyDescriptor,
    pub base: Covector,
}

impl OrbitChart {
    pub fn new(descriptor: FamilyDescriptor, base: Covector) -> Self {
        Self { descriptor, base }
    }

    pub fn map(&self, x: f64, a: f64) -> Covector {
        orbit_param(&self.descriptor, &self.base, x, a)
    }
}

/// Invariant subspaces of `exp(a·Mᵀ)` on the tail, indexed by covector slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Block {
    /// Jordan chain `start..start+len` with real eigenvalue `rate`.
    Chain { start: usize, len: usize, rate: f64 },
    /// Complex slot `(start, start+1)` multiplied by `exp(a·rate)`.
    Complex { start: usize, rate: Complex64 },
}

impl Block {
    fn slots(&self) -> std::ops::Range<usize> {
        match *self {
            Block::Chain { start, len, .. } => start..start + len,
            Block::Complex { start, .. } => start..start + 2,
        }
    }
}

pub(crate) fn blocks(d: &FamilyDescriptor) -> Vec<Block> {
    let ch = |start, len, rate| Block::Chain { start, len, rate };
    let rot = || Block::Complex {
        start: 1,
        rate: Complex64::from_polar(1.0, -d.phi()),
    };
    let (l, l1, l2) = (d.lambda(), d.lambda1(), d.lambda2());
    match d.id().number() {
        1 => vec![
            ch(1, 1, l1),
            ch(2, 1, l2),
            ch(3, 1, d.lambda3()),
            ch(4, 1, 1.0),
        ],
        2 => vec![ch(1, 1, l1), ch(2, 1, l2), ch(3, 1, 1.0), ch(4, 1, 1.0)],
        3 => vec![ch(1, 1, l), ch(2, 1, l), ch(3, 1, 1.0), ch(4, 1, 1.0)],
        4 => vec![ch(1, 1, l), ch(2, 1, 1.0), ch(3, 1, 1.0), ch(4, 1, 1.0)],
        5 => vec![ch(1, 1, 1.0), ch(2, 1, 1.0), ch(3, 1, 1.0), ch(4, 1, 1.0)],
        6 => vec![ch(1, 1, l1), ch(2, 1, l2), ch(3, 2, 1.0)],
        7 => vec![ch(1, 1, l), ch(2, 1, l), ch(3, 2, 1.0)],
        8 => vec![ch(1, 2, l), ch(3, 2, 1.0)],
        9 => vec![ch(1, 1, l), ch(2, 3, 1.0)],
        10 => vec![ch(1, 4, 1.0)],
        11 => vec![rot(), ch(3, 1, l1), ch(4, 1, l2)],
        12 => vec![rot(), ch(3, 1, l), ch(4, 1, l)],
        13 => vec![rot(), ch(3, 2, l)],
        _ => vec![
            rot(),
            Block::Complex {
                start: 3,
                rate: cplx(l, -d.mu()),
            },
        ],
    }
}

/// Slot whose value along the leaf is a pure exponential in `a`.
#[derive(Debug, Clone, Copy)]
enum Pivot {
    Real { slot: usize, rate: f64 },
    Complex { start: usize, rate: Complex64 },
}

impl Pivot {
    fn determines_a(&self) -> bool {
        match self {
            Pivot::Real { .. } => true,
            Pivot::Complex { rate, .. } => rate.re.abs() >= MODULUS_PIVOT_MIN * rate.norm(),
        }
    }

    fn index(&self) -> usize {
        match *self {
            Pivot::Real { slot, .. } => slot,
            Pivot::Complex { start, .. } => start,
        }
    }
}

/// Pure-exponential slot used to read `a` off a target point: the first nonzero
/// entry of each Jordan chain, or a nonzero complex slot. Slots that fix `a`
/// uniquely win over pure rotations; ties go to the lowest index.
fn choose_pivot(d: &FamilyDescriptor, f: &Covector) -> Option<Pivot> {
    let mut pivots: Vec<Pivot> = blocks(d)
        .into_iter()
        .filter_map(|b| match b {
            Block::Chain { start, len, rate } => (start..start + len)
                .find(|&k| f.0[k] != 0.0)
                .map(|slot| Pivot::Real { slot, rate }),
            Block::Complex { start, rate } => (f.0[start] != 0.0 || f.0[start + 1] != 0.0)
                .then_some(Pivot::Complex { start, rate }),
        })
        .collect();
    pivots.sort_by_key(|p| (!p.determines_a(), p.index()));
    pivots.into_iter().next()
}

fn candidate_flow_params(pivot: Pivot, f: &Covector, g: &Covector) -> Vec<f64> {
    match pivot {
        Pivot::Real { slot, rate } => {
            let ratio = g.0[slot] / f.0[slot];
            if ratio > 0.0 && ratio.is_finite() {
                vec![ratio.ln() / rate]
            } else {
                Vec::new()
            }
        }
        Pivot::Complex { start, rate } => {
            let q = cplx(g.0[start], g.0[start + 1]) / cplx(f.0[start], f.0[start + 1]);
            if q.norm() == 0.0 || !q.is_finite() {
                return Vec::new();
            }
            if pivot.determines_a() {
                return vec![q.norm().ln() / rate.re];
            }
            // a·Im κ ≡ arg q (mod 2π)
            let theta = q.arg();
            let w = rate.im;
            let reach = (ROTATION_SEARCH_WINDOW * w.abs() / (2.0 * PI)).ceil() as i64 + 1;
            (-reach..=reach)
                .map(|k| (theta + 2.0 * PI * k as f64) / w)
                .filter(|a| a.abs() <= ROTATION_SEARCH_WINDOW)
                .collect()
        }
    }
}

/// Block-wise distance between two tails: relative to the block's size when the
/// predicted block is nonzero, absolute otherwise.
pub(crate) fn block_residual(d: &FamilyDescriptor, pred: &Covector, g: &Covector) -> f64 {
    blocks(d)
        .iter()
        .map(|b| {
            let mut diff = 0.0_f64;
            let mut p_size = 0.0_f64;
            let mut g_size = 0.0_f64;
            for k in b.slots() {
                diff = diff.max((pred.0[k] - g.0[k]).abs());
                p_size = p_size.max(pred.0[k].abs());
                g_size = g_size.max(g.0[k].abs());
            }
            if p_size == 0.0 {
                g_size
            } else {
                diff / p_size.max(g_size)
            }
        })
        .fold(0.0, f64::max)
}

fn scaled_diff(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Smallest residual over `(x, a)` between `g` and the closed-form orbit through `f`.
///
/// Returns `f64::INFINITY` when no flow parameter is consistent with `g`.
pub fn leaf_residual(d: &FamilyDescriptor, f: &Covector, g: &Covector) -> f64 {
    if !is_generic(f) {
        return (0..5)
            .map(|k| scaled_diff(g.0[k], f.0[k]))
            .fold(0.0, f64::max);
    }
    let pivot = choose_pivot(d, f).expect("generic point has a nonzero pure-exponential slot");
    candidate_flow_params(pivot, f, g)
        .into_iter()
        .map(|a| block_residual(d, &orbit_param(d, f, g.alpha(), a), g))
        .filter(|r| !r.is_nan())
        .fold(f64::INFINITY, f64::min)
}

pub fn leaf_membership(
    d: &FamilyDescriptor,
    f: &Covector,
    g: &Covector,
    tol: &ToleranceConfig,
) -> bool {
    leaf_residual(d, f, g) <= tol.membership_tol
}

/// Flow parameter `a` with `orbit_param(f, ·, a) ≈ g`, if one exists.
pub fn recover_flow_param(d: &FamilyDescriptor, f: &Covector, g: &Covector) -> Option<f64> {
    if !is_generic(f) {
        return None;
    }
    let pivot = choose_pivot(d, f)?;
    candidate_flow_params(pivot, f, g)
        .into_iter()
        .map(|a| (block_residual(d, &orbit_param(d, f, g.alpha(), a), g), a))
        .filter(|(r, _)| !r.is_nan())
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map(|(_, a)| a)
}

fn fd_step(v: f64) -> f64 {
    1e-6 * v.abs().max(1.0)
}

/// Distance of the closed-form tangent plane at `(x, a)` from the span of the
/// coadjoint generators there, normalized by `|∂ₐ| + |∂ₓ|`.
pub fn tangent_residual(
    d: &FamilyDescriptor,
    f: &Covector,
    x: f64,
    a: f64,
) -> Result<f64, OrbitError> {
    if !is_generic(f) {
        return Err(OrbitError::NotGeneric(f.0));
    }
    let p = |x: f64, a: f64| Vector5::from(orbit_param(d, f, x, a).0);
    let ha = fd_step(a);
    let hx = fd_step(x);
    let v = (p(x, a + ha) - p(x, a - ha)) / (2.0 * ha);
    let w = (p(x + hx, a) - p(x - hx, a)) / (2.0 * hx);

    let c = build_algebra(d);
    let g = orbit_param(d, f, x, a);
    let svd = SVD::new(coad_span_matrix(&c, &g), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let largest = svd.singular_values.max();
    let keep: Vec<usize> = (0..5)
        .filter(|&i| largest > 0.0 && svd.singular_values[i] > 1e-9 * largest)
        .collect();

    let reject = |vec: &Vector5<f64>| {
        let mut r = *vec;
        for &i in &keep {
            let col = u.column(i);
            r -= col * col.dot(vec);
        }
        r.norm()
    };
    let mut residual = (reject(&v) + reject(&w)) / (v.norm() + w.norm());
    if keep.len() != 2 {
        residual = residual.max(1.0);
    }
    Ok(residual)
}

/// Integrates `F' = Σᵢ uᵢ Yᵢ(F)` from 0 to `t_end` with classical RK4.
pub fn numeric_flow(
    d: &FamilyDescriptor,
    f: &Covector,
    u: &AlgebraElement,
    t_end: f64,
    steps: usize,
) -> Result<Covector, OrbitError> {
    if steps < 1 {
        return Err(OrbitError::InvalidSteps);
    }
    let a = coad_generator_matrix(&build_algebra(d), u);
    let h = t_end / steps as f64;
    let mut y = Vector5::from(f.0);
    for _ in 0..steps {
        let k1 = a * y;
        let k2 = a * (y + k1 * (h / 2.0));
        let k3 = a * (y + k2 * (h / 2.0));
        let k4 = a * (y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(Covector([y[0], y[1], y[2], y[3], y[4]]))
}
