//! Randomized certification suites and the combined verification report.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix5, SVD};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_algebra, CatalogError, FamilyId};
use crate::foliation::{
    action_suite, fibration_suite, leaf_strata, leaf_to_leaf_suite, round_trip_suite, ParamSource,
    Stratum, TopologicalType,
};
use crate::lie::{coad_span_matrix, kirillov_form, AlgebraElement};
use crate::orbit::{
    is_generic, leaf_residual, numeric_flow, orbit_dimension, tangent_residual, ToleranceConfig,
};
use crate::report::{fmt_f64, Counterexample, PropertyReport, SampleOutcome};
use crate::sampling::{
    draw_any_point, draw_descriptor, draw_generic_point, sample_rng, suite_tag, uniform,
};

/// Parameter draws per family in the rank suite; each draw sees `n_samples` points.
pub const RANK_PARAM_DRAWS: usize = 100;

/// Share of rank-suite points placed on the fixed-point locus.
pub const FIXED_POINT_FRACTION: f64 = 0.1;

pub const FLOW_STEPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    Family(FamilyId),
}

impl Scope {
    pub fn families(&self) -> Vec<FamilyId> {
        match self {
            Scope::All => FamilyId::ALL.to_vec(),
            Scope::Family(id) => vec![*id],
        }
    }
}

impl FromStr for Scope {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(Scope::All)
        } else {
            s.parse().map(Scope::Family)
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::All => f.write_str("all"),
            Scope::Family(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub n_samples: usize,
    pub tolerances: ToleranceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_samples: 1000,
            tolerances: ToleranceConfig::default(),
        }
    }
}

/// Ratio `σ₃/σ₁` of a matrix expected to have rank 2, or the largest entry of
/// one expected to vanish.
fn rank_two_defect(m: &Matrix5<f64>, expect_zero: bool) -> f64 {
    if expect_zero {
        return m.amax();
    }
    let mut s: Vec<f64> = SVD::new(*m, false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    if s[0] == 0.0 {
        f64::INFINITY
    } else {
        s[2] / s[0]
    }
}

/// Orbit dimension in `{0, 2}` with the right locus, and rank 2 of the leaf
/// distribution on generic points.
pub fn md_rank_suite(
    id: FamilyId,
    seed: u64,
    n_draws: usize,
    n_points: usize,
    tol: &ToleranceConfig,
) -> PropertyReport {
    let param_tag = suite_tag("md_rank/params");
    let point_tag = suite_tag("md_rank");
    let descriptors: Vec<_> = (0..n_draws)
        .map(|j| draw_descriptor(id, &mut sample_rng(seed, id, param_tag, j as u64)))
        .collect();
    let outcomes: Vec<SampleOutcome> = (0..n_draws * n_points)
        .into_par_iter()
        .map(|k| {
            let d = &descriptors[k / n_points];
            let mut rng = sample_rng(seed, id, point_tag, k as u64);
            let f = draw_any_point(&mut rng, FIXED_POINT_FRACTION);
            let generic = is_generic(&f);
            let expected = if generic { 2 } else { 0 };
            let c = build_algebra(d);
            let dim = orbit_dimension(d, &f, tol);
            let residual = rank_two_defect(&kirillov_form(&c, &f), !generic)
                .max(rank_two_defect(&coad_span_matrix(&c, &f), !generic));
            let pass = matches!(dim, Ok(n) if n == expected) && residual <= tol.rank_tol;
            SampleOutcome {
                residual,
                secondary: 0.0,
                pass,
                counterexample: (!pass).then(|| Counterexample {
                    sample: k,
                    family: d.label(),
                    point: f.0,
                    x: f.alpha(),
                    a: 0.0,
                    residual,
                    detail: match dim {
                        Ok(n) => format!("orbit_dim={n} expected={expected}"),
                        Err(e) => e.to_string(),
                    },
                }),
            }
        })
        .collect();
    PropertyReport::collect(
        "md_rank",
        format!("{id}(random)"),
        tol.rank_tol,
        None,
        outcomes,
    )
}

/// Closed-form tangent plane lies in the span of the coadjoint generators.
pub fn tangency_suite(
    source: ParamSource,
    seed: u64,
    n_samples: usize,
    tol: &ToleranceConfig,
) -> PropertyReport {
    let tag = suite_tag("tangency");
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, source.id(), tag, i as u64);
            let d = source.draw(&mut rng);
            let f = draw_generic_point(&mut rng);
            let x = uniform(&mut rng, -10.0, 10.0);
            let a = uniform(&mut rng, -1.0, 1.0);
            let residual = tangent_residual(&d, &f, x, a).unwrap_or(f64::INFINITY);
            let pass = residual < tol.residual_tol;
            SampleOutcome {
                residual,
                secondary: 0.0,
                pass,
                counterexample: (!pass).then(|| Counterexample {
                    sample: i,
                    family: d.label(),
                    point: f.0,
                    x,
                    a,
                    residual,
                    detail: String::new(),
                }),
            }
        })
        .collect();
    PropertyReport::collect("tangency", source.label(), tol.residual_tol, None, outcomes)
}

/// RK4 integration of a random coadjoint field ends on the closed-form leaf.
pub fn flow_suite(
    source: ParamSource,
    seed: u64,
    n_samples: usize,
    tol: &ToleranceConfig,
) -> PropertyReport {
    let tag = suite_tag("flow");
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, source.id(), tag, i as u64);
            let d = source.draw(&mut rng);
            let f = draw_generic_point(&mut rng);
            let mut u = [1.0; 5];
            for v in u.iter_mut().skip(1) {
                *v = uniform(&mut rng, -1.0, 1.0);
            }
            let t = uniform(&mut rng, -1.0, 1.0);
            let residual = match numeric_flow(&d, &f, &AlgebraElement(u), t, FLOW_STEPS) {
                Ok(g) => leaf_residual(&d, &f, &g),
                Err(_) => f64::INFINITY,
            };
            let pass = residual <= tol.membership_tol;
            SampleOutcome {
                residual,
                secondary: 0.0,
                pass,
                counterexample: (!pass).then(|| Counterexample {
                    sample: i,
                    family: d.label(),
                    point: f.0,
                    x: f.alpha(),
                    a: -t,
                    residual,
                    detail: format!("u={u:?} T={t}"),
                }),
            }
        })
        .collect();
    PropertyReport::collect("flow", source.label(), tol.membership_tol, None, outcomes)
}

/// Every suite for one family, in a fixed order.
pub fn family_suites(id: FamilyId, config: &RunConfig) -> Vec<PropertyReport> {
    let (seed, n, tol) = (config.seed, config.n_samples, &config.tolerances);
    let source = ParamSource::Random(id);
    let mut out = vec![
        md_rank_suite(id, seed, RANK_PARAM_DRAWS, n, tol),
        tangency_suite(source, seed, n, tol),
        flow_suite(source, seed, n, tol),
        round_trip_suite(source, seed, n),
        leaf_to_leaf_suite(source, &Stratum::Open, seed, n, tol),
    ];
    let pinned = (n / 4).max(1);
    for stratum in leaf_strata(id) {
        out.push(leaf_to_leaf_suite(source, &stratum, seed, pinned, tol));
    }
    match id {
        FamilyId::G5_4_5 => out.push(fibration_suite(seed, n, tol)),
        FamilyId::G5_4_12 => out.push(action_suite(TopologicalType::F2, seed, n, tol)),
        FamilyId::G5_4_14 => out.push(action_suite(TopologicalType::F3, seed, n, tol)),
        _ => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scope: String,
    pub seed: u64,
    pub n_samples: usize,
    pub suites: Vec<PropertyReport>,
}

/// How many counterexamples each suite prints in text form.
const SHOWN_COUNTEREXAMPLES: usize = 5;

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.suites.iter().filter(|s| !s.all_passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn trailer(&self) -> String {
        format!(
            "RESULT: {} suites={} failures={}",
            if self.all_passed() { "PASS" } else { "FAIL" },
            self.suites.len(),
            self.failures()
        )
    }

    pub fn render_text(&self) -> String {
        let mut s = format!(
            "verify scope={} seed={} n_samples={}\n",
            self.scope, self.seed, self.n_samples
        );
        for suite in &self.suites {
            s.push_str(&suite.render_text(SHOWN_COUNTEREXAMPLES));
        }
        s.push_str(&self.trailer());
        s.push('\n');
        s
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s.push_str(&self.trailer());
        s.push('\n');
        s
    }

    /// One row per suite; counterexamples are left to the text and JSON forms.
    pub fn render_csv(&self) -> String {
        let mut s = String::from("family,suite,status,samples,passed,max_residual,threshold\n");
        for r in &self.suites {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.family,
                r.suite,
                r.status(),
                r.samples,
                r.passed,
                fmt_f64(r.max_residual),
                fmt_f64(r.threshold)
            ));
        }
        s.push_str(&self.trailer());
        s.push('\n');
        s
    }
}

pub fn run_verify(scope: Scope, config: &RunConfig) -> VerifyReport {
    let suites = scope
        .families()
        .into_iter()
        .flat_map(|id| family_suites(id, config))
        .collect();
    VerifyReport {
        scope: scope.to_string(),
        seed: config.seed,
        n_samples: config.n_samples,
        suites,
    }
}
