use std::fmt::Write as _;
use std::time::Instant;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::series_eval::BigReal;
use crate::values::Evaluator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A proven identity; a failure is a bug.
    Theorem,
    /// Numerical evidence only; never gates.
    Conjecture,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: String,
    /// `|residual|` as a short decimal.
    pub residual: String,
    /// `log10 |residual|`, `-inf` serialized as `null`.
    pub residual_log10: Option<f64>,
    pub tolerance: String,
    pub verdict: Verdict,
    pub status: Status,
    pub digits: u32,
    /// Set when the check failed once and was re-run at doubled precision.
    pub retried: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Report for `residual` with tolerance `10 *` its error estimate,
    /// floored at one unit in the last place of the working precision.
    pub fn numeric(name: &str, params: String, residual: &BigReal, status: Status) -> Self {
        let bits = residual.prec();
        let floor = Float::with_val(64, Float::i_exp(1, -(bits as i32)));
        let err = Float::with_val(64, residual.error()).max(&floor);
        let tol = Float::with_val(64, &err * 10u32);
        Self::with_tolerance(name, params, residual, tol, status)
    }

    pub fn with_tolerance(
        name: &str,
        params: String,
        residual: &BigReal,
        tolerance: Float,
        status: Status,
    ) -> Self {
        let abs = Float::with_val(64, residual.value().abs_ref());
        let pass = abs < tolerance;
        VerificationReport {
            name: name.to_string(),
            params,
            residual: short(&abs),
            residual_log10: log10(&abs),
            tolerance: short(&tolerance),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            status,
            digits: crate::series_eval::Precision { bits: residual.prec(), terms: 0 }.digits(),
            retried: false,
            wall_time_ms: None,
            note: None,
        }
    }

    /// Report for an exact symbolic comparison.
    pub fn exact(name: &str, params: String, equal: bool, status: Status) -> Self {
        VerificationReport {
            name: name.to_string(),
            params,
            residual: if equal { "0".into() } else { "nonzero".into() },
            residual_log10: None,
            tolerance: "exact".into(),
            verdict: if equal { Verdict::Pass } else { Verdict::Fail },
            status,
            digits: 0,
            retried: false,
            wall_time_ms: None,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Whether the report should fail a verification run.
    pub fn gates(&self) -> bool {
        self.status == Status::Theorem && self.verdict == Verdict::Fail
    }

    /// `|residual| < 10^-digits`, for checks against fixed thresholds.
    pub fn residual_below(&self, digits: f64) -> bool {
        match self.residual_log10 {
            None => self.residual == "0",
            Some(l) => l < -digits,
        }
    }
}

fn short(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(4))
}

fn log10(x: &Float) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let (m, e) = x.to_f64_exp();
    Some(m.abs().log10() + e as f64 * std::f64::consts::LOG10_2)
}

/// Run `check`; if a theorem-status report fails, re-run it on a
/// doubled-precision evaluator and keep that outcome.
pub fn with_retry<F>(ev: &Evaluator, check: F) -> Result<VerificationReport>
where
    F: Fn(&Evaluator) -> Result<VerificationReport>,
{
    let r = check(ev)?;
    if r.passed() || r.status == Status::Conjecture || r.tolerance == "exact" {
        return Ok(r);
    }
    log::warn!("{} {} failed at {} digits, retrying at doubled precision", r.name, r.params, r.digits);
    let mut again = check(&ev.doubled())?;
    again.retried = true;
    Ok(again)
}

/// As [`with_retry`], also recording the wall time.
pub fn timed<F>(ev: &Evaluator, check: F) -> Result<VerificationReport>
where
    F: Fn(&Evaluator) -> Result<VerificationReport>,
{
    let start = Instant::now();
    let mut r = with_retry(ev, check)?;
    r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(r)
}

pub fn format_reports_table(reports: &[VerificationReport]) -> String {
    let header = ["identity", "params", "residual", "tolerance", "verdict", "status"];
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.name.clone(),
                r.params.clone(),
                r.residual.clone(),
                r.tolerance.clone(),
                format!("{:?}", r.verdict).to_lowercase(),
                format!("{:?}", r.status).to_lowercase(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let padded: Vec<String> =
            cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&mut out, &header.map(String::from));
    for row in &rows {
        line(&mut out, row);
    }
    out
}
