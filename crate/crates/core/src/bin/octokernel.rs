use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use octokernel::harness::{run_suite, Format, Suite, SuiteConfig, DEFAULT_SAMPLES, DEFAULT_SEED, SEED_ENV};
use octokernel::{Error, Octonion, Strategy};

/// Run octonionic kernel verification suites and print a report.
#[derive(Debug, Parser)]
#[command(name = "octokernel", version, about)]
struct Cli {
    /// algebra, analyticity, szego, bergman, parseval, counterexample, unified or all
    #[arg(long, default_value = "all")]
    suite: Suite,

    /// Sample count for Monte Carlo and quasi-Monte Carlo estimates
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,

    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// mc, qmc or exact
    #[arg(long, default_value = "mc")]
    strategy: Strategy,

    /// Finite-difference step
    #[arg(long, default_value_t = 1e-4)]
    h: f64,

    /// Richardson extrapolation of central differences
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    richardson: bool,

    /// Truncation degree of spherical expansions
    #[arg(long, default_value_t = 8)]
    max_degree: usize,

    /// Base point a as eight comma-separated reals; replaces the default set
    #[arg(long, value_parser = parse_point)]
    point_a: Option<Octonion>,

    /// json or csv
    #[arg(long, default_value = "json")]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to all cores); results do not depend on it
    #[arg(long)]
    threads: Option<usize>,

    /// Record wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

fn parse_point(s: &str) -> Result<Octonion, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let c: [f64; 8] = parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 8 comma-separated reals, got {}", v.len()))?;
    Ok(Octonion::new(c))
}

fn run(cli: Cli) -> Result<bool, Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let mut config = SuiteConfig {
        seed: cli.seed,
        n_samples: cli.samples,
        strategy: cli.strategy,
        h: cli.h,
        richardson: cli.richardson,
        max_degree: cli.max_degree,
        ..SuiteConfig::default()
    };
    if let Some(a) = cli.point_a {
        config.points = vec![a];
    }
    let start = Instant::now();
    let mut report = run_suite(cli.suite, &config)?;
    if cli.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    report.emit(cli.format, cli.out.as_deref())?;
    for row in report.failures() {
        eprintln!("FAIL {}: {}", row.id, row.error.as_deref().unwrap_or(&row.reference));
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
