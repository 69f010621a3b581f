//! Seeded sampling of parameters and covectors for the verification suites.
//!
//! Each sample gets its own generator derived from `(seed, family, suite,
//! index)`, so results do not depend on evaluation order or thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{validate_params, FamilyDescriptor, FamilyId, FamilyParams, ParamName};
use crate::lie::Covector;

pub type SampleRng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit tag for a suite name (FNV-1a).
pub fn suite_tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn sample_rng(seed: u64, family: FamilyId, suite: u64, index: u64) -> SampleRng {
    let mut h = splitmix(seed);
    for part in [family.number() as u64, suite, index] {
        h = splitmix(h ^ part);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// λ from `±[0.1, 5]`, staying 0.05 away from 1.
pub fn draw_lambda(rng: &mut SampleRng) -> f64 {
    loop {
        let mag: f64 = rng.random_range(0.1..=5.0);
        let v = if rng.random::<bool>() { mag } else { -mag };
        if (v - 1.0).abs() >= 0.05 {
            return v;
        }
    }
}

pub fn draw_phi(rng: &mut SampleRng) -> f64 {
    rng.random_range(0.1..=PI - 0.1)
}

pub fn draw_mu(rng: &mut SampleRng) -> f64 {
    rng.random_range(0.1..=5.0)
}

/// Random valid parameters for `id`; redraws on the (measure-zero) collisions
/// that validation rejects.
pub fn draw_descriptor(id: FamilyId, rng: &mut SampleRng) -> FamilyDescriptor {
    loop {
        let mut p = FamilyParams::none();
        for name in id.param_names() {
            let v = match name {
                ParamName::Phi => draw_phi(rng),
                ParamName::Mu => draw_mu(rng),
                _ => draw_lambda(rng),
            };
            p.set(*name, v);
        }
        if let Ok(d) = validate_params(id, p) {
            return d;
        }
    }
}

/// Uniform point of `[-10, 10]⁵` with `|(β, γ, δ, σ)| ≥ 1e-3`.
pub fn draw_generic_point(rng: &mut SampleRng) -> Covector {
    loop {
        let mut c = [0.0; 5];
        for v in c.iter_mut() {
            *v = rng.random_range(-10.0..=10.0);
        }
        let f = Covector(c);
        let t = f.tail();
        if t.iter().map(|v| v * v).sum::<f64>().sqrt() >= 1e-3 {
            return f;
        }
    }
}

/// Like [`draw_generic_point`] but with the given tail slots forced to zero.
/// At least one tail slot must stay free.
pub fn draw_pinned_point(rng: &mut SampleRng, zero_slots: &[usize]) -> Covector {
    assert!(
        (1..5).any(|k| !zero_slots.contains(&k)),
        "pinning every tail slot leaves no generic point"
    );
    loop {
        let mut f = draw_generic_point(rng);
        for &k in zero_slots {
            f.0[k] = 0.0;
        }
        if f.tail().iter().map(|v| v * v).sum::<f64>().sqrt() >= 1e-3 {
            return f;
        }
    }
}

/// Uniform point with probability `1 - fixed_fraction`, otherwise `(α, 0, 0, 0, 0)`.
pub fn draw_any_point(rng: &mut SampleRng, fixed_fraction: f64) -> Covector {
    if rng.random::<f64>() < fixed_fraction {
        Covector::new(rng.random_range(-10.0..=10.0), 0.0, 0.0, 0.0, 0.0)
    } else {
        draw_generic_point(rng)
    }
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    if lo >= hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}
