use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::GradedElement;
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    /// Passes iff the residual is a structural zero.
    Exact,
    /// Passes iff the largest sampled residual is within tolerance.
    Pointwise,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub name: String,
    pub mode: CheckMode,
    /// `null` in JSON when not finite.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckRecord {
    /// A structural-zero check. The residual reported is the largest sampled
    /// value, which is only informative when the check fails.
    pub fn exact(
        name: &str,
        residual: &GradedElement<Expr>,
        points: &[Vec<f64>],
        params: &BTreeMap<String, f64>,
    ) -> Self {
        if residual.is_zero() {
            return CheckRecord {
                name: name.to_string(),
                mode: CheckMode::Exact,
                max_residual: 0.0,
                tolerance: 0.0,
                pass: true,
                reason: None,
            };
        }
        let max_residual = sampled_max(residual, points, params).unwrap_or(f64::NAN);
        CheckRecord {
            name: name.to_string(),
            mode: CheckMode::Exact,
            max_residual,
            tolerance: 0.0,
            pass: false,
            reason: Some(format!(
                "residual is not a structural zero ({} terms)",
                residual.len()
            )),
        }
    }

    pub fn pointwise(name: &str, max_residual: f64, tolerance: f64) -> Self {
        let (pass, reason) = if !max_residual.is_finite() {
            (false, Some("non-finite residual".to_string()))
        } else if max_residual > tolerance {
            (false, Some("residual exceeds tolerance".to_string()))
        } else {
            (true, None)
        };
        CheckRecord {
            name: name.to_string(),
            mode: CheckMode::Pointwise,
            max_residual,
            tolerance,
            pass,
            reason,
        }
    }

    /// Pointwise check of a form: largest coefficient over `points`.
    pub fn pointwise_form(
        name: &str,
        residual: &GradedElement<Expr>,
        points: &[Vec<f64>],
        params: &BTreeMap<String, f64>,
        tolerance: f64,
    ) -> Self {
        match sampled_max(residual, points, params) {
            Ok(r) => Self::pointwise(name, r, tolerance),
            Err(e) => Self::failed(
                name,
                CheckMode::Pointwise,
                tolerance,
                format!("evaluation failed: {e}"),
            ),
        }
    }

    /// Exact on flat charts, pointwise otherwise.
    pub fn form(
        name: &str,
        exact: bool,
        residual: &GradedElement<Expr>,
        points: &[Vec<f64>],
        params: &BTreeMap<String, f64>,
        tolerance: f64,
    ) -> Self {
        if exact {
            Self::exact(name, residual, points, params)
        } else {
            Self::pointwise_form(name, residual, points, params, tolerance)
        }
    }

    pub fn failed(name: &str, mode: CheckMode, tolerance: f64, reason: String) -> Self {
        CheckRecord {
            name: name.to_string(),
            mode,
            max_residual: f64::NAN,
            tolerance,
            pass: false,
            reason: Some(reason),
        }
    }

    /// Combines records of the same check over several samples: the worst
    /// residual wins and the first failure reason is kept.
    pub fn merge(name: &str, records: Vec<CheckRecord>) -> Self {
        let mut out = CheckRecord {
            name: name.to_string(),
            mode: records.first().map_or(CheckMode::Exact, |r| r.mode),
            max_residual: 0.0,
            tolerance: records.first().map_or(0.0, |r| r.tolerance),
            pass: true,
            reason: None,
        };
        for r in records {
            if !out.max_residual.is_nan()
                && (r.max_residual.is_nan() || r.max_residual > out.max_residual)
            {
                out.max_residual = r.max_residual;
            }
            if !r.pass && out.pass {
                out.pass = false;
                out.reason = r.reason;
            }
        }
        out
    }
}

/// Largest absolute coefficient of `w` over the sample points.
pub fn sampled_max(
    w: &GradedElement<Expr>,
    points: &[Vec<f64>],
    params: &BTreeMap<String, f64>,
) -> Result<f64, crate::expr::EvalError> {
    let mut max: f64 = 0.0;
    for p in points {
        let v = w.max_abs_at(p, params)?;
        if v.is_nan() {
            return Ok(f64::NAN);
        }
        max = max.max(v);
    }
    Ok(max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub chart: String,
    pub seed: u64,
    pub points: usize,
    /// Sorted by name.
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn new(
        suite: &str,
        chart: &str,
        seed: u64,
        points: usize,
        mut checks: Vec<CheckRecord>,
    ) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        CheckReport {
            suite: suite.to_string(),
            chart: chart.to_string(),
            seed,
            points,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} on {} (seed {}, {} points)\n",
            self.suite, self.chart, self.seed, self.points
        );
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let mode = match c.mode {
                CheckMode::Exact => "exact",
                CheckMode::Pointwise => "pointwise",
            };
            out.push_str(&format!(
                "  {status} {:<40} {mode:<9} residual {:.3e} tol {:.1e}",
                c.name, c.max_residual, c.tolerance
            ));
            if let Some(r) = &c.reason {
                out.push_str(&format!("  ({r})"));
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        out
    }
}
