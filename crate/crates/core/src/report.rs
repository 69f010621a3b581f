//! Outcomes of randomized property suites.

use serde::{Deserialize, Serialize};

/// Renders a float with 17 significant digits, which round-trips exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sample: usize,
    /// Family label including the parameters used by this sample.
    pub family: String,
    pub point: [f64; 5],
    pub x: f64,
    pub a: f64,
    pub residual: f64,
    pub detail: String,
}

/// An additional maximum tracked alongside the main residual, with its own bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondaryMetric {
    pub name: String,
    pub max: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub suite: String,
    pub family: String,
    pub samples: usize,
    pub passed: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub secondary: Option<SecondaryMetric>,
    pub counterexamples: Vec<Counterexample>,
}

/// Per-sample result fed into [`PropertyReport::collect`].
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub residual: f64,
    pub secondary: f64,
    pub pass: bool,
    /// Only built for failing samples.
    pub counterexample: Option<Counterexample>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.samples
    }

    /// Folds outcomes in sample order; failing samples become counterexamples.
    pub fn collect(
        suite: impl Into<String>,
        family: impl Into<String>,
        threshold: f64,
        secondary: Option<(&str, f64)>,
        outcomes: Vec<SampleOutcome>,
    ) -> Self {
        let mut report = PropertyReport {
            suite: suite.into(),
            family: family.into(),
            samples: outcomes.len(),
            passed: 0,
            max_residual: 0.0,
            threshold,
            secondary: secondary.map(|(name, threshold)| SecondaryMetric {
                name: name.to_string(),
                max: 0.0,
                threshold,
            }),
            counterexamples: Vec::new(),
        };
        for o in outcomes {
            report.max_residual = nan_max(report.max_residual, o.residual);
            if let Some(s) = report.secondary.as_mut() {
                s.max = nan_max(s.max, o.secondary);
            }
            if o.pass {
                report.passed += 1;
            } else if let Some(c) = o.counterexample {
                report.counterexamples.push(c);
            }
        }
        report
    }

    pub fn status(&self) -> &'static str {
        if self.all_passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// One summary line plus one line per counterexample.
    pub fn render_text(&self, max_counterexamples: usize) -> String {
        let mut s = format!(
            "[{}] {} {} samples={} passed={} max_residual={} threshold={}",
            self.status(),
            self.family,
            self.suite,
            self.samples,
            self.passed,
            fmt_f64(self.max_residual),
            fmt_f64(self.threshold),
        );
        if let Some(m) = &self.secondary {
            s.push_str(&format!(
                " {}_max={} {}_threshold={}",
                m.name,
                fmt_f64(m.max),
                m.name,
                fmt_f64(m.threshold)
            ));
        }
        s.push('\n');
        for c in self.counterexamples.iter().take(max_counterexamples) {
            let point: Vec<String> = c.point.iter().map(|v| fmt_f64(*v)).collect();
            s.push_str(&format!(
                "  counterexample sample={} family={} point=({}) x={} a={} residual={} {}\n",
                c.sample,
                c.family,
                point.join(","),
                fmt_f64(c.x),
                fmt_f64(c.a),
                fmt_f64(c.residual),
                c.detail
            ));
        }
        if self.counterexamples.len() > max_counterexamples {
            s.push_str(&format!(
                "  ... {} more counterexamples\n",
                self.counterexamples.len() - max_counterexamples
            ));
        }
        s
    }
}

/// `max` that propagates NaN, so a NaN residual is never hidden.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}
