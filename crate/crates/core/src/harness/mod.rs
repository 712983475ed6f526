//! Verification suites and their reports.
//!
//! Each suite evaluates a group of identities and returns one
//! [`CheckRow`] per comparison. Sampled checks share one deterministic
//! sample set per suite, so a report depends only on its [`SuiteConfig`].

mod report;
mod suites;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::quadrature::{QuadratureSpec, Strategy};

pub use report::{CheckRow, ErrorNorm, Format, Method, ToleranceMode, VerificationReport, CSV_HEADER};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Environment variable that overrides [`DEFAULT_SEED`] in the CLI.
pub const SEED_ENV: &str = "OCTOKERNEL_SEED";

/// Run parameters shared by every suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub n_samples: u64,
    pub strategy: Strategy,
    pub h: f64,
    pub richardson: bool,
    pub max_degree: usize,
    /// Kernel base points `a`.
    pub points: Vec<Octonion>,
}

/// `{0, 0.3 e1, 0.5 (e1 + e2)/sqrt(2), 0.7 e7}`.
pub fn default_points() -> Vec<Octonion> {
    let s = 0.5 / 2f64.sqrt();
    vec![
        Octonion::ZERO,
        Octonion::basis(1) * 0.3,
        Octonion::new([0.0, s, s, 0.0, 0.0, 0.0, 0.0, 0.0]),
        Octonion::basis(7) * 0.7,
    ]
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            n_samples: DEFAULT_SAMPLES,
            strategy: Strategy::MonteCarlo,
            h: 1e-4,
            richardson: true,
            max_degree: 8,
            points: default_points(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Config(format!("h must be positive, got {}", self.h)));
        }
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.points.is_empty() {
            return Err(Error::Config("at least one point a is required".into()));
        }
        if let Some(a) = self.points.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::Config(format!("point a = {a} must lie in the open unit ball")));
        }
        if self.max_degree > 16 {
            return Err(Error::Config("max degree above 16 is not supported".into()));
        }
        QuadratureSpec {
            strategy: self.strategy,
            n_samples: self.n_samples,
            seed: self.seed,
            antithetic: false,
        }
        .validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Algebra,
    Analyticity,
    Szego,
    Bergman,
    Parseval,
    Counterexample,
    Unified,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Algebra,
        Suite::Analyticity,
        Suite::Szego,
        Suite::Bergman,
        Suite::Parseval,
        Suite::Counterexample,
        Suite::Unified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Analyticity => "analyticity",
            Suite::Szego => "szego",
            Suite::Bergman => "bergman",
            Suite::Parseval => "parseval",
            Suite::Counterexample => "counterexample",
            Suite::Unified => "unified",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite `{s}` (expected one of algebra, analyticity, szego, bergman, parseval, counterexample, unified, all)"
                ))
            })
    }
}

/// Run `suite` under `config`.
///
/// Configuration problems are errors; a failing identity is reported as a
/// row with `pass = false`.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let ctx = suites::Ctx::new(config);
    let checks = match suite {
        Suite::All => {
            let mut rows = Vec::new();
            for s in Suite::INDIVIDUAL {
                rows.extend(suites::run(s, &ctx));
            }
            rows
        }
        s => suites::run(s, &ctx),
    };
    Ok(VerificationReport::new(suite.name(), config.clone(), checks))
}
