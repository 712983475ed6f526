//! Acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so criteria execute one at a time and wall-clock
//! budgets are measured without competing test threads.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use octokernel::fields::{adjoint_a, DiffScheme, Point8};
use octokernel::harness::{run_suite, CheckRow, Suite, SuiteConfig, VerificationReport};
use octokernel::kernels::{bergman_b, cauchy_field_at};
use octokernel::quadrature::omega8;
use octokernel::{KernelParams, Octonion, Strategy};

type Verdict = Result<String, String>;

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn suite(s: Suite, cfg: &SuiteConfig) -> Result<(VerificationReport, Duration), String> {
    let (r, dt) = timed(|| run_suite(s, cfg));
    r.map(|r| (r, dt)).map_err(|e| format!("{s} suite errored: {e}"))
}

fn rows<'a>(r: &'a VerificationReport, prefix: &str) -> Vec<&'a CheckRow> {
    r.checks.iter().filter(|c| c.id.starts_with(prefix)).collect()
}

fn row<'a>(r: &'a VerificationReport, id: &str) -> Result<&'a CheckRow, String> {
    r.checks.iter().find(|c| c.id == id).ok_or_else(|| format!("row {id} missing"))
}

fn all_pass(rows: &[&CheckRow], min: usize) -> Result<(), String> {
    if rows.len() < min {
        return Err(format!("expected at least {min} rows, found {}", rows.len()));
    }
    match rows.iter().find(|c| !c.pass) {
        Some(c) => Err(format!(
            "{} failed: abs_err {:?} > tol {:e} {}",
            c.id,
            c.abs_err,
            c.tolerance,
            c.error.as_deref().unwrap_or("")
        )),
        None => Ok(()),
    }
}

fn budget(dt: Duration, secs: u64, what: &str) -> Result<(), String> {
    if dt > Duration::from_secs(secs) {
        Err(format!("{what} took {:.1} s, budget {secs} s", dt.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn close(a: Octonion, b: Octonion, tol: f64) -> bool {
    a.distance(&b) <= tol
}

fn algebra_laws(cfg: &SuiteConfig) -> Verdict {
    let (r, dt) = suite(Suite::Algebra, cfg)?;
    budget(dt, 5, "algebra")?;
    all_pass(&rows(&r, "algebra."), 9)?;
    let assoc = row(&r, "algebra.associator_e1_e2_e4")?;
    if assoc.lhs != Some(Octonion::basis(7) * 2.0) {
        return Err(format!("[e1, e2, e4] = {:?}", assoc.lhs));
    }
    Ok(format!("{} rows, {:.2} s", r.checks.len(), dt.as_secs_f64()))
}

fn left_analyticity(cfg: &SuiteConfig) -> Verdict {
    let (r, dt) = suite(Suite::Analyticity, cfg)?;
    budget(dt, 30, "analyticity")?;
    all_pass(&rows(&r, "analyticity."), 16)?;
    let order = row(&r, "analyticity.fd_order")?.lhs.ok_or("no order")?.re();
    if !(1.9..=2.1).contains(&order) {
        return Err(format!("FD order {order}"));
    }
    Ok(format!("FD order {order:.3}, {:.2} s", dt.as_secs_f64()))
}

fn worst_rel(rows: &[&CheckRow]) -> f64 {
    rows.iter()
        .filter_map(|c| Some(c.abs_err? / c.rhs.norm()))
        .fold(0.0, f64::max)
}

fn szego_reproducing(cfg: &SuiteConfig) -> Verdict {
    let (r, dt) = suite(Suite::Szego, cfg)?;
    budget(dt, 60, "szego")?;
    let rep = rows(&r, "szego.reproduce.");
    all_pass(&rep, 2 * cfg.points.len())?;
    Ok(format!(
        "{} points x 2 centers, worst relative error {:.2e}, {:.1} s",
        cfg.points.len(),
        worst_rel(&rep),
        dt.as_secs_f64()
    ))
}

fn bergman_reproducing(cfg: &SuiteConfig, r: &VerificationReport, dt: Duration) -> Verdict {
    budget(dt, 90, "bergman")?;
    let rep = rows(r, "bergman.reproduce.");
    all_pass(&rep, 2 * cfg.points.len())?;
    all_pass(&rows(r, "bergman.constant."), cfg.points.len() + 1)?;
    let a0 = row(r, "bergman.constant.a0")?;
    if !(a0.pass && a0.tolerance == 1e-3) {
        return Err("constant case at a = 0 not gated at 1e-3".into());
    }
    // Vol(B^8) / |S^7| from the Gamma function.
    let vol = PI.powi(4) / gamma(5.0);
    let area = 2.0 * PI.powi(4) / gamma(4.0);
    if ((omega8() - area) / area).abs() > 1e-13 || ((vol / area) - 0.125).abs() > 1e-13 {
        return Err(format!("measure normalization: vol/area = {}", vol / area));
    }
    let b0 = bergman_b(Octonion::new([0.1, 0.2, -0.3, 0.0, 0.4, 0.0, 0.0, 0.1]), &KernelParams::new(Octonion::ZERO))
        .map_err(|e| e.to_string())?;
    if !close(b0, Octonion::real(8.0), 1e-14) {
        return Err(format!("B(x, 0) = {b0}"));
    }
    Ok(format!(
        "worst relative error {:.2e}, constant case {:.1e} off, {:.1} s",
        worst_rel(&rep),
        a0.abs_err.unwrap_or(f64::NAN),
        dt.as_secs_f64()
    ))
}

fn random_ball(rng: &mut ChaCha8Rng, rmax: f64) -> Point8 {
    loop {
        let c: [f64; 8] = std::array::from_fn(|_| rng.random_range(-rmax..rmax));
        if c.iter().map(|v| v * v).sum::<f64>().sqrt() <= rmax {
            return Point8(c);
        }
    }
}

fn bergman_is_adjoint_of_cauchy(cfg: &SuiteConfig, r: &VerificationReport) -> Verdict {
    all_pass(&[row(r, "bergman.adjoint")?], 1)?;
    let scheme = DiffScheme::richardson(cfg.h);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xad);
    let (worst, dt) = timed(|| -> Result<f64, String> {
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x = random_ball(&mut rng, 0.8);
            let a = random_ball(&mut rng, 0.8).as_octonion();
            let closed = bergman_b(x.as_octonion(), &KernelParams::new(a)).map_err(|e| e.to_string())?;
            let fd = adjoint_a(&cauchy_field_at(a), scheme).eval(&x).map_err(|e| e.to_string())?;
            worst = worst.max(closed.distance(&fd) / closed.norm());
        }
        Ok(worst)
    });
    let worst = worst?;
    budget(dt, 30, "B = A(E) sweep")?;
    if worst > 1e-5 {
        return Err(format!("worst relative difference {worst:e}"));
    }
    Ok(format!("worst relative difference {worst:.2e} over 100 pairs, {:.2} s", dt.as_secs_f64()))
}

fn counterexample(cfg: &SuiteConfig) -> Verdict {
    let target = Octonion::basis(6) * (-1.0 / 40.0);
    let exact_cfg = SuiteConfig { strategy: Strategy::ExactMoments, ..cfg.clone() };
    let (ex, _) = suite(Suite::Counterexample, &exact_cfg)?;
    let ex = row(&ex, "counterexample.p1f_q2g")?;
    let lhs = ex.lhs.ok_or("exact value missing")?;
    if ex.rhs != target || !close(lhs, target, 1e-12) || !ex.pass {
        return Err(format!("exact moments gave {lhs}"));
    }
    let (mc, _) = suite(Suite::Counterexample, cfg)?;
    let mc = row(&mc, "counterexample.p1f_q2g")?;
    all_pass(&[mc], 1)?;
    Ok(format!(
        "exact error {:.1e}; MC {:.2e} within {:.2e}",
        lhs.distance(&target),
        mc.abs_err.unwrap_or(f64::NAN),
        mc.tolerance
    ))
}

fn parseval_blocks(cfg: &SuiteConfig) -> Verdict {
    let mut notes = Vec::new();
    for strategy in [Strategy::ExactMoments, Strategy::MonteCarlo] {
        let c = SuiteConfig { strategy, ..cfg.clone() };
        let (r, dt) = suite(Suite::Parseval, &c)?;
        all_pass(&rows(&r, "parseval."), 5)?;
        if strategy == Strategy::MonteCarlo && rows(&r, "parseval.pair.off.").is_empty() {
            return Err("no off-structure blocks checked".into());
        }
        for id in ["parseval.pair.p1_q2", "parseval.pair.norm_identity", "parseval.pair.block_sum"] {
            row(&r, id)?;
        }
        if row(&r, "parseval.pair.p1_q2")?.rhs == Octonion::ZERO {
            return Err("structural block expected to be nonzero".into());
        }
        notes.push(format!("{strategy:?} {} rows {:.1} s", r.checks.len(), dt.as_secs_f64()));
    }
    Ok(notes.join("; "))
}

fn norm_series(r: &VerificationReport) -> Verdict {
    let e0 = row(r, "bergman.norm_series.e0")?;
    let z1 = row(r, "bergman.norm_series.z1")?;
    let sz = row(r, "bergman.norm_series.szego")?;
    all_pass(&[e0, z1, sz], 3)?;
    // |e0|^2 = Vol/|S^7| and |x1 - x0 e1|^2 = 2 E[x0^2] = 2/(8 * 10).
    if (e0.rhs.re() - 0.125).abs() > 1e-15 || (z1.rhs.re() - 2.0 / 80.0).abs() > 1e-15 {
        return Err(format!("norms {} and {}", e0.rhs.re(), z1.rhs.re()));
    }
    if e0.abs_err > Some(1e-12) || z1.abs_err > Some(1e-12) {
        return Err("exact series off by more than 1e-12".into());
    }
    Ok(format!(
        "1/8 and 1/40 to {:.1e}; truncated Szego within {:.2e}",
        e0.abs_err.unwrap_or(0.0).max(z1.abs_err.unwrap_or(0.0)),
        sz.tolerance
    ))
}

fn unified_identities(cfg: &SuiteConfig) -> Verdict {
    let (r, dt) = suite(Suite::Unified, cfg)?;
    let dbar = row(&r, "unified.dbar_identity")?;
    let m2 = row(&r, "unified.m2_square")?;
    all_pass(&[dbar, m2], 2)?;
    if dbar.tolerance > 1e-5 || (m2.rhs.re() - 0.3f64.powi(2)).abs() > 1e-15 {
        return Err("wrong gate or oracle".into());
    }
    all_pass(&rows(&r, "unified."), 4)?;
    Ok(format!(
        "dbar identity {:.2e}; z^2 at 0.3 off by {:.2e}; {:.1} s",
        dbar.abs_err.unwrap_or(f64::NAN),
        m2.abs_err.unwrap_or(f64::NAN),
        dt.as_secs_f64()
    ))
}

fn determinism(cfg: &SuiteConfig) -> Verdict {
    let small = SuiteConfig { n_samples: 20_000, ..cfg.clone() };
    let mut notes = Vec::new();
    for strategy in [Strategy::MonteCarlo, Strategy::QuasiMonteCarlo] {
        let c = SuiteConfig { strategy, ..small.clone() };
        let mut outputs = Vec::new();
        for threads in [1, 3, 1] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?;
            let json = pool
                .install(|| run_suite(Suite::All, &c))
                .and_then(|r| r.to_json())
                .map_err(|e| e.to_string())?;
            outputs.push(json);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{strategy:?} reports differ across runs"));
        }
        notes.push(format!("{strategy:?} {} bytes", outputs[0].len()));
    }
    Ok(format!("identical JSON at 1, 3, 1 threads ({})", notes.join(", ")))
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut results: Vec<(u8, &str, Verdict)> = Vec::new();
    let mut record = |n: u8, name: &'static str, v: Verdict| {
        let (tag, detail) = match &v {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("criterion {n:>2} {tag} {name}: {detail}");
        results.push((n, name, v));
    };

    record(1, "algebra laws", algebra_laws(&cfg));
    record(2, "left analyticity of kernels", left_analyticity(&cfg));
    record(3, "Szego reproducing formula", szego_reproducing(&cfg));
    let bergman = suite(Suite::Bergman, &cfg);
    match &bergman {
        Ok((r, dt)) => {
            record(4, "Bergman reproducing formula", bergman_reproducing(&cfg, r, *dt));
            record(5, "B = A(E)", bergman_is_adjoint_of_cauchy(&cfg, r));
        }
        Err(e) => {
            record(4, "Bergman reproducing formula", Err(e.clone()));
            record(5, "B = A(E)", Err(e.clone()));
        }
    }
    record(6, "counterexample block", counterexample(&cfg));
    record(7, "Parseval block structure", parseval_blocks(&cfg));
    record(
        8,
        "norm-series characterization",
        bergman.as_ref().map_err(Clone::clone).and_then(|(r, _)| norm_series(r)),
    );
    record(9, "dbar identity and unified formula", unified_identities(&cfg));
    record(10, "determinism", determinism(&cfg));

    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
