//! Arithmetic in a 5-dimensional real Lie algebra given by structure constants.
//!
//! Basis indices are zero-based in code: `X₁..X₅` are `0..5`. Covectors are
//! written in the dual basis, so a covector `(α, β, γ, δ, σ)` has `α` at slot 0.

use nalgebra::{Matrix5, SVD};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dimension of every algebra handled by this crate.
pub const DIM: usize = 5;

/// Absolute tolerance used by [`verify_jacobi`].
pub const JACOBI_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("basis index {0} out of range 0..5")]
    IndexOutOfRange(usize),
    #[error("rank tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
}

/// Element of the Lie algebra, coefficients in the basis `X₁..X₅`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraElement(pub [f64; DIM]);

/// Point of the dual space, coefficients `(α, β, γ, δ, σ)` in `X₁*..X₅*`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Covector(pub [f64; DIM]);

impl AlgebraElement {
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; DIM];
        c[i] = 1.0;
        Self(c)
    }
}

impl Covector {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, sigma: f64) -> Self {
        Self([alpha, beta, gamma, delta, sigma])
    }

    pub fn alpha(&self) -> f64 {
        self.0[0]
    }

    /// The `(β, γ, δ, σ)` part, i.e. the restriction to the derived ideal.
    pub fn tail(&self) -> [f64; 4] {
        [self.0[1], self.0[2], self.0[3], self.0[4]]
    }

    pub fn from_parts(alpha: f64, tail: [f64; 4]) -> Self {
        Self([alpha, tail[0], tail[1], tail[2], tail[3]])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// Bracket table `c[i][j][k]` with `[Xᵢ, Xⱼ] = Σₖ c[i][j][k] Xₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    c: [[[f64; DIM]; DIM]; DIM],
}

impl StructureConstants {
    pub fn zero() -> Self {
        Self {
            c: [[[0.0; DIM]; DIM]; DIM],
        }
    }

    /// Sets `[Xᵢ, Xⱼ]` to `value` in direction `Xₖ` and writes the antisymmetric
    /// partner `c[j][i][k] = -value`.
    pub fn set_antisymmetric(&mut self, i: usize, j: usize, k: usize, value: f64) {
        self.c[i][j][k] = value;
        self.c[j][i][k] = -value;
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..DIM).all(|i| (0..DIM).all(|j| (0..DIM).all(|k| self.c[i][j][k] == -self.c[j][i][k])))
    }

    /// `[Xᵢ, Xⱼ]` as an algebra element.
    pub fn basis_bracket(&self, i: usize, j: usize) -> AlgebraElement {
        AlgebraElement(self.c[i][j])
    }
}

pub fn bracket(c: &StructureConstants, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        if u.0[i] == 0.0 {
            continue;
        }
        for j in 0..DIM {
            let w = u.0[i] * v.0[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * c.c[i][j][k];
            }
        }
    }
    AlgebraElement(out)
}

fn pair(f: &Covector, x: &[f64; DIM]) -> f64 {
    f.0.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Kirillov form `B_F(Xᵢ, Xⱼ) = ⟨F, [Xᵢ, Xⱼ]⟩`.
///
/// Only the upper triangle is evaluated; the lower one is its exact negation.
pub fn kirillov_form(c: &StructureConstants, f: &Covector) -> Matrix5<f64> {
    let mut m = Matrix5::zeros();
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let v = pair(f, &c.c[i][j]);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

/// Result of [`rank_skew`]. `odd_count` flags that the raw singular value count
/// was odd before being rounded down, which a skew matrix should never produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkewRank {
    pub rank: usize,
    pub odd_count: bool,
}

/// Numerical rank of a skew matrix: singular values above
/// `tol * max(σ_max)` (or above `tol` when the matrix is zero), rounded down
/// to an even number.
pub fn rank_skew(m: &Matrix5<f64>, tol: f64) -> Result<SkewRank, LieError> {
    if !(tol > 0.0) {
        return Err(LieError::NonPositiveTolerance(tol));
    }
    let sv = SVD::new(*m, false, false).singular_values;
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    let scale = if largest == 0.0 { 1.0 } else { largest };
    let count = sv.iter().filter(|&&s| s > tol * scale).count();
    Ok(SkewRank {
        rank: count - count % 2,
        odd_count: count % 2 == 1,
    })
}

/// Infinitesimal coadjoint generator `Yᵢ(F)` with `⟨Yᵢ(F), Xⱼ⟩ = ⟨F, [Xⱼ, Xᵢ]⟩`.
pub fn coad_field(c: &StructureConstants, i: usize, f: &Covector) -> Result<Covector, LieError> {
    if i >= DIM {
        return Err(LieError::IndexOutOfRange(i));
    }
    let mut out = [0.0; DIM];
    for (j, o) in out.iter_mut().enumerate() {
        *o = pair(f, &c.c[j][i]);
    }
    Ok(Covector(out))
}

/// Matrix `A` of the linear field `F ↦ Σᵢ uᵢ Yᵢ(F)`, so that `Y_u(F) = A F`.
pub fn coad_generator_matrix(c: &StructureConstants, u: &AlgebraElement) -> Matrix5<f64> {
    // ⟨Y_u(F), Xⱼ⟩ = Σᵢ uᵢ Σₖ F_k c[j][i][k]
    let mut a = Matrix5::zeros();
    for j in 0..DIM {
        for k in 0..DIM {
            a[(j, k)] = (0..DIM).map(|i| u.0[i] * c.c[j][i][k]).sum();
        }
    }
    a
}

/// Matrix whose columns are `Y₁(F)..Y₅(F)`.
pub fn coad_span_matrix(c: &StructureConstants, f: &Covector) -> Matrix5<f64> {
    let mut m = Matrix5::zeros();
    for i in 0..DIM {
        for j in 0..DIM {
            m[(j, i)] = pair(f, &c.c[j][i]);
        }
    }
    m
}

/// Largest absolute Jacobiator entry over all basis triples.
pub fn jacobi_defect(c: &StructureConstants) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            for k in (j + 1)..DIM {
                let xi = AlgebraElement::basis(i);
                let xj = AlgebraElement::basis(j);
                let xk = AlgebraElement::basis(k);
                let a = bracket(c, &xi, &c.basis_bracket(j, k));
                let b = bracket(c, &xj, &c.basis_bracket(k, i));
                let d = bracket(c, &xk, &c.basis_bracket(i, j));
                for n in 0..DIM {
                    worst = worst.max((a.0[n] + b.0[n] + d.0[n]).abs());
                }
            }
        }
    }
    worst
}

pub fn verify_jacobi(c: &StructureConstants) -> bool {
    jacobi_defect(c) <= JACOBI_TOL
}
