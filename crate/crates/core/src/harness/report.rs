//! Verification reports and their JSON / CSV encodings.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::harness::SuiteConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceMode {
    /// `|lhs - rhs| / |rhs| <= tolerance`, falling back to the absolute
    /// error when the reference is zero.
    Relative,
    Absolute,
}

/// How `abs_err` is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorNorm {
    /// Euclidean norm of the difference in R^8.
    L2,
    /// Largest component of the difference.
    Max,
}

/// How a row's left-hand side was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Algebra,
    ClosedForm,
    FiniteDifference,
    Exact,
    Mc,
    Qmc,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Algebra => "algebra",
            Method::ClosedForm => "closed_form",
            Method::FiniteDifference => "finite_difference",
            Method::Exact => "exact",
            Method::Mc => "mc",
            Method::Qmc => "qmc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub id: String,
    /// The identity being checked, written as a formula.
    pub reference: String,
    pub method: Method,
    /// `None` when the value could not be computed (see `error`).
    pub lhs: Option<Octonion>,
    pub rhs: Octonion,
    pub abs_err: Option<f64>,
    /// `None` when the reference is zero.
    pub rel_err: Option<f64>,
    pub norm: ErrorNorm,
    pub tolerance: f64,
    pub mode: ToleranceMode,
    pub std_error: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

fn max_abs(v: &Octonion) -> f64 {
    v.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
}

impl CheckRow {
    /// Compare `lhs` to `rhs` in the Euclidean norm.
    pub fn compare(
        id: impl Into<String>,
        reference: impl Into<String>,
        method: Method,
        lhs: Octonion,
        rhs: Octonion,
        tolerance: f64,
        mode: ToleranceMode,
    ) -> CheckRow {
        Self::build(id.into(), reference.into(), method, lhs, rhs, tolerance, mode, ErrorNorm::L2, None)
    }

    /// A real scalar compared against `rhs`.
    pub fn scalar(
        id: impl Into<String>,
        reference: impl Into<String>,
        method: Method,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        mode: ToleranceMode,
    ) -> CheckRow {
        Self::compare(id, reference, method, Octonion::real(lhs), Octonion::real(rhs), tolerance, mode)
    }

    /// A sampled estimate: largest component error at most `k` times the
    /// largest component standard error.
    pub fn statistical(
        id: impl Into<String>,
        reference: impl Into<String>,
        method: Method,
        lhs: Octonion,
        std_error_components: &[f64; 8],
        rhs: Octonion,
        k: f64,
    ) -> CheckRow {
        let s = std_error_components.iter().copied().fold(0.0, f64::max);
        Self::build(
            id.into(),
            reference.into(),
            method,
            lhs,
            rhs,
            k * s,
            ToleranceMode::Absolute,
            ErrorNorm::Max,
            Some(s),
        )
    }

    /// Widen an absolute tolerance by `extra` and re-evaluate `pass`.
    pub fn with_allowance(mut self, extra: f64) -> CheckRow {
        self.tolerance += extra;
        if self.error.is_none() && self.mode == ToleranceMode::Absolute {
            self.pass = self.abs_err.is_some_and(|e| e <= self.tolerance);
        }
        self
    }

    /// A check whose left-hand side failed to evaluate.
    pub fn failed(
        id: impl Into<String>,
        reference: impl Into<String>,
        method: Method,
        rhs: Octonion,
        tolerance: f64,
        mode: ToleranceMode,
        err: &Error,
    ) -> CheckRow {
        CheckRow {
            id: id.into(),
            reference: reference.into(),
            method,
            lhs: None,
            rhs,
            abs_err: None,
            rel_err: None,
            norm: ErrorNorm::L2,
            tolerance,
            mode,
            std_error: None,
            pass: false,
            error: Some(err.to_string()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        id: String,
        reference: String,
        method: Method,
        lhs: Octonion,
        rhs: Octonion,
        tolerance: f64,
        mode: ToleranceMode,
        norm: ErrorNorm,
        std_error: Option<f64>,
    ) -> CheckRow {
        if !lhs.is_finite() {
            return CheckRow {
                norm,
                std_error,
                ..Self::failed(
                    id,
                    reference,
                    method,
                    rhs,
                    tolerance,
                    mode,
                    &Error::Domain("non-finite value".into()),
                )
            };
        }
        let diff = lhs - rhs;
        let (abs_err, ref_size) = match norm {
            ErrorNorm::L2 => (diff.norm(), rhs.norm()),
            ErrorNorm::Max => (max_abs(&diff), max_abs(&rhs)),
        };
        let rel_err = (ref_size > 0.0).then(|| abs_err / ref_size);
        let pass = match (mode, rel_err) {
            (ToleranceMode::Relative, Some(r)) => r <= tolerance,
            _ => abs_err <= tolerance,
        };
        CheckRow {
            id,
            reference,
            method,
            lhs: Some(lhs),
            rhs,
            abs_err: Some(abs_err),
            rel_err,
            norm,
            tolerance,
            mode,
            std_error,
            pass,
            error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub version: String,
    pub config: SuiteConfig,
    pub passed: bool,
    pub checks: Vec<CheckRow>,
    /// Wall-clock time; only recorded on request so that reports stay
    /// byte-reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, config: SuiteConfig, checks: Vec<CheckRow>) -> Self {
        let passed = checks.iter().all(|c| c.pass);
        VerificationReport {
            suite: suite.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            passed,
            checks,
            runtime_ms: None,
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRow> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for c in &self.checks {
            let mut rec = vec![
                self.suite.clone(),
                c.id.clone(),
                c.reference.clone(),
                c.method.as_str().to_string(),
                match c.mode {
                    ToleranceMode::Relative => "relative".into(),
                    ToleranceMode::Absolute => "absolute".into(),
                },
                match c.norm {
                    ErrorNorm::L2 => "l2".into(),
                    ErrorNorm::Max => "max".into(),
                },
                c.tolerance.to_string(),
                opt(c.abs_err),
                opt(c.rel_err),
                opt(c.std_error),
                c.pass.to_string(),
            ];
            for i in 0..8 {
                rec.push(c.lhs.map(|v| v[i].to_string()).unwrap_or_default());
            }
            for i in 0..8 {
                rec.push(c.rhs[i].to_string());
            }
            rec.push(c.error.clone().unwrap_or_default());
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Write in `format` to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let mut text = match format {
            Format::Json => self.to_json()?,
            Format::Csv => self.to_csv()?,
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match path {
            Some(p) => fs::write(p, text).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            }),
            None => std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    }
}

pub const CSV_HEADER: [&str; 28] = [
    "suite", "id", "reference", "method", "mode", "norm", "tolerance", "abs_err", "rel_err", "std_error", "pass",
    "lhs_0", "lhs_1", "lhs_2", "lhs_3", "lhs_4", "lhs_5", "lhs_6", "lhs_7",
    "rhs_0", "rhs_1", "rhs_2", "rhs_3", "rhs_4", "rhs_5", "rhs_6", "rhs_7", "error",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Serialization(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format `{other}` (expected json or csv)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}
