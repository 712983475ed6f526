//! Inner products on the unit sphere S^7 and the unit ball B of R^8.
//!
//! Both products use the bracketed integrands
//!
//! ```text
//! (f, g)_S7 = (1/w8) int_S7 (conj(g) conj(eta)) (eta f) dS
//! (f, g)_B  = (1/w8) int_B  (conj(g) conj(x)/|x|) (x/|x| f) dV
//! ```
//!
//! and are estimated by Monte Carlo, randomized quasi-Monte Carlo, or exactly
//! from closed-form monomial moments when both fields are polynomial.
//! The `1/w8` normalization is folded into the uniform averages analytically:
//! on the sphere it cancels, on the ball it leaves `Vol(B)/w8 = 1/8`.
//!
//! Sample `i` depends only on `(seed, i)` and reductions run over fixed
//! chunks in index order, so results do not depend on the worker count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::fields::{Field, Point8};
use crate::kernels::{in_complex_line, unified_kernel};
use crate::poly::RadialPoly;

/// Radius of the ball excluded around the origin when sampling B.
pub const ORIGIN_EXCLUSION: f64 = 1e-12;

/// Number of independent random shifts used by randomized QMC.
pub const QMC_REPLICATES: u64 = 16;

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[serde(rename = "mc")]
    MonteCarlo,
    #[serde(rename = "qmc")]
    QuasiMonteCarlo,
    #[serde(rename = "exact")]
    ExactMoments,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(Strategy::MonteCarlo),
            "qmc" => Ok(Strategy::QuasiMonteCarlo),
            "exact" | "exact-moments" => Ok(Strategy::ExactMoments),
            other => Err(Error::Config(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub strategy: Strategy,
    pub n_samples: u64,
    pub seed: u64,
    /// Pair each Monte Carlo sample `x` with `-x`.
    pub antithetic: bool,
}

impl QuadratureSpec {
    pub fn mc(n_samples: u64, seed: u64) -> Self {
        QuadratureSpec {
            strategy: Strategy::MonteCarlo,
            n_samples,
            seed,
            antithetic: false,
        }
    }

    pub fn qmc(n_samples: u64, seed: u64) -> Self {
        QuadratureSpec {
            strategy: Strategy::QuasiMonteCarlo,
            ..Self::mc(n_samples, seed)
        }
    }

    pub fn exact() -> Self {
        QuadratureSpec {
            strategy: Strategy::ExactMoments,
            ..Self::mc(1, 0)
        }
    }

    pub fn with_antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.strategy == Strategy::QuasiMonteCarlo && self.n_samples < 2 * QMC_REPLICATES {
            return Err(Error::Config(format!(
                "qmc needs at least {} samples ({QMC_REPLICATES} replicates)",
                2 * QMC_REPLICATES
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerProductResult {
    pub value: Octonion,
    /// RMS over components of the per-component standard errors.
    pub std_error: f64,
    pub std_error_components: [f64; 8],
    pub n_used: u64,
}

impl InnerProductResult {
    pub fn exact(value: Octonion) -> Self {
        InnerProductResult {
            value,
            std_error: 0.0,
            std_error_components: [0.0; 8],
            n_used: 0,
        }
    }

    /// Largest per-component standard error.
    pub fn max_std_error(&self) -> f64 {
        self.std_error_components.iter().copied().fold(0.0, f64::max)
    }

    fn scaled(mut self, s: f64) -> Self {
        self.value = self.value * s;
        self.std_error *= s.abs();
        for v in &mut self.std_error_components {
            *v *= s.abs();
        }
        self
    }
}

/// Integration domains with uniform sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// The unit sphere S^7.
    Sphere,
    /// The unit ball of R^8, minus a ball of radius [`ORIGIN_EXCLUSION`].
    Ball,
    /// The unit disc in `span{e0, e1}`, minus the same tiny ball.
    Disc,
}

impl Domain {
    fn qmc_dimension(self) -> usize {
        match self {
            Domain::Sphere => 8,
            Domain::Ball => 9,
            Domain::Disc => 2,
        }
    }
}

/// Deterministic, index-addressable uniform samples of a domain.
#[derive(Clone, Debug)]
pub struct Sampler {
    domain: Domain,
    spec: QuadratureSpec,
    base: ChaCha8Rng,
    alpha: Vec<f64>,
    shifts: Vec<Vec<f64>>,
}

impl Sampler {
    pub fn new(domain: Domain, spec: QuadratureSpec) -> Result<Sampler> {
        spec.validate()?;
        let base = ChaCha8Rng::seed_from_u64(spec.seed);
        let dim = domain.qmc_dimension();
        let (alpha, shifts) = if spec.strategy == Strategy::QuasiMonteCarlo {
            let alpha = rd_generators(dim);
            let shifts = (0..QMC_REPLICATES)
                .map(|r| {
                    let mut rng = base.clone();
                    // streams above 2^63 are reserved for shifts
                    rng.set_stream((1u64 << 63) | r);
                    (0..dim).map(|_| rng.random::<f64>()).collect()
                })
                .collect();
            (alpha, shifts)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Sampler {
            domain,
            spec,
            base,
            alpha,
            shifts,
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Number of points per QMC replicate.
    fn per_replicate(&self) -> u64 {
        self.spec.n_samples / QMC_REPLICATES
    }

    /// Pseudo-random point `index`, a pure function of `(seed, index)`.
    pub fn mc_point(&self, index: u64) -> Point8 {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        loop {
            let p = match self.domain {
                Domain::Sphere => {
                    let g: [f64; 8] = std::array::from_fn(|_| rng.sample(StandardNormal));
                    normalize(g)
                }
                Domain::Ball => {
                    let g: [f64; 8] = std::array::from_fn(|_| rng.sample(StandardNormal));
                    let u: f64 = rng.random();
                    normalize(g).map(|d| d.scaled(u.powf(0.125)))
                }
                Domain::Disc => {
                    let t: f64 = rng.random();
                    let u: f64 = rng.random();
                    Some(disc_point(t, u))
                }
            };
            if let Some(p) = p {
                if self.domain == Domain::Sphere || p.radius() >= ORIGIN_EXCLUSION {
                    return p;
                }
            }
        }
    }

    /// Point `k` of QMC replicate `replicate`.
    pub fn qmc_point(&self, replicate: u64, k: u64) -> Point8 {
        let shift = &self.shifts[replicate as usize];
        let normal = Normal::standard();
        let dim = self.alpha.len();
        let mut u = [0.0f64; 9];
        for j in 0..dim {
            let v = (shift[j] + (k + 1) as f64 * self.alpha[j]).fract();
            u[j] = v.clamp(1e-15, 1.0 - 1e-15);
        }
        let p = match self.domain {
            Domain::Sphere | Domain::Ball => {
                let g: [f64; 8] = std::array::from_fn(|j| normal.inverse_cdf(u[j]));
                let dir = normalize(g).unwrap_or(Point8([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
                if self.domain == Domain::Ball {
                    dir.scaled(u[8].powf(0.125))
                } else {
                    dir
                }
            }
            Domain::Disc => disc_point(u[0], u[1]),
        };
        if self.domain != Domain::Sphere && p.radius() < ORIGIN_EXCLUSION {
            return self.mc_point(k);
        }
        p
    }

    /// The first `n` points of the sample stream, in index order.
    pub fn points(&self, n: u64) -> Vec<Point8> {
        match self.spec.strategy {
            Strategy::QuasiMonteCarlo => {
                let m = self.per_replicate().max(1);
                (0..n).map(|i| self.qmc_point((i / m) % QMC_REPLICATES, i % m)).collect()
            }
            _ => (0..n).map(|i| self.mc_point(i)).collect(),
        }
    }
}

fn normalize(g: [f64; 8]) -> Option<Point8> {
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    (n > 0.0 && n.is_finite()).then(|| Point8(g.map(|v| v / n)))
}

fn disc_point(t: f64, u: f64) -> Point8 {
    let (s, c) = (2.0 * PI * t).sin_cos();
    let r = u.sqrt();
    Point8([r * c, r * s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
}

/// Additive-recurrence generators `phi_d^{-j}` of the R_d low-discrepancy sequence.
fn rd_generators(dim: usize) -> Vec<f64> {
    // phi_d is the positive root of x^(d+1) = x + 1
    let d = dim as i32;
    let mut x = 2.0f64;
    for _ in 0..64 {
        let f = x.powi(d + 1) - x - 1.0;
        let df = f64::from(d + 1) * x.powi(d) - 1.0;
        x -= f / df;
    }
    (1..=dim).map(|j| x.powi(-(j as i32)).fract()).collect()
}

/// Sample streams on S^7.
pub fn sample_sphere(spec: &QuadratureSpec) -> Result<Vec<Point8>> {
    let s = Sampler::new(Domain::Sphere, *spec)?;
    Ok(s.points(spec.n_samples))
}

/// Uniform samples of the unit ball (direction on S^7, radius `u^(1/8)`).
pub fn sample_ball(spec: &QuadratureSpec) -> Result<Vec<Point8>> {
    let s = Sampler::new(Domain::Ball, *spec)?;
    Ok(s.points(spec.n_samples))
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.add(other.c);
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Per-output first and second moment accumulators.
#[derive(Clone, Debug)]
struct Moments {
    sum: Vec<[Compensated; 8]>,
    sq: Vec<[Compensated; 8]>,
    n: u64,
}

impl Moments {
    fn new(n_out: usize) -> Self {
        Moments {
            sum: vec![[Compensated::default(); 8]; n_out],
            sq: vec![[Compensated::default(); 8]; n_out],
            n: 0,
        }
    }

    fn push(&mut self, values: &[Octonion]) {
        for (o, v) in values.iter().enumerate() {
            for (k, &c) in v.coeffs().iter().enumerate() {
                self.sum[o][k].add(c);
                self.sq[o][k].add(c * c);
            }
        }
        self.n += 1;
    }

    fn merge(&mut self, other: &Moments) {
        for o in 0..self.sum.len() {
            for k in 0..8 {
                self.sum[o][k].merge(&other.sum[o][k]);
                self.sq[o][k].merge(&other.sq[o][k]);
            }
        }
        self.n += other.n;
    }

    fn results(&self, n_used: u64) -> Vec<InnerProductResult> {
        let n = self.n as f64;
        (0..self.sum.len())
            .map(|o| {
                let mut mean = [0.0; 8];
                let mut se = [0.0; 8];
                for k in 0..8 {
                    let m = self.sum[o][k].value() / n;
                    mean[k] = m;
                    if self.n > 1 {
                        let var = ((self.sq[o][k].value() - n * m * m) / (n - 1.0)).max(0.0);
                        se[k] = (var / n).sqrt();
                    }
                }
                let rms = (se.iter().map(|v| v * v).sum::<f64>() / 8.0).sqrt();
                InnerProductResult {
                    value: Octonion::new(mean),
                    std_error: rms,
                    std_error_components: se,
                    n_used,
                }
            })
            .collect()
    }
}

/// Uniform average over `domain` of a vector-valued integrand, with one
/// standard error per output. All outputs share the same sample points.
///
/// The integrand writes `n_out` values into the provided slice.
pub fn domain_mean<F>(
    domain: Domain,
    spec: &QuadratureSpec,
    n_out: usize,
    integrand: F,
) -> Result<Vec<InnerProductResult>>
where
    F: Fn(&Point8, &mut [Octonion]) -> Result<()> + Sync,
{
    let sampler = Sampler::new(domain, *spec)?;
    match spec.strategy {
        Strategy::ExactMoments => Err(Error::Config(
            "exact-moments strategy needs polynomial integrands; use the field-level inner products".into(),
        )),
        Strategy::MonteCarlo => {
            if spec.antithetic {
                let pairs = (spec.n_samples / 2).max(1);
                let unit = |i: u64, buf: &mut [Octonion], tmp: &mut [Octonion]| -> Result<()> {
                    let p = sampler.mc_point(i);
                    integrand(&p, buf).map_err(|e| e.at_sample(2 * i))?;
                    integrand(&p.scaled(-1.0), tmp).map_err(|e| e.at_sample(2 * i + 1))?;
                    for (b, t) in buf.iter_mut().zip(tmp.iter()) {
                        *b = (*b + *t) * 0.5;
                    }
                    Ok(())
                };
                let m = reduce_units(pairs, n_out, unit)?;
                Ok(m.results(2 * pairs))
            } else {
                let unit = |i: u64, buf: &mut [Octonion], _: &mut [Octonion]| -> Result<()> {
                    let p = sampler.mc_point(i);
                    integrand(&p, buf).map_err(|e| e.at_sample(i))
                };
                let m = reduce_units(spec.n_samples, n_out, unit)?;
                Ok(m.results(spec.n_samples))
            }
        }
        Strategy::QuasiMonteCarlo => {
            let per = sampler.per_replicate();
            let mut replicate_means = Moments::new(n_out);
            for r in 0..QMC_REPLICATES {
                let unit = |k: u64, buf: &mut [Octonion], _: &mut [Octonion]| -> Result<()> {
                    let p = sampler.qmc_point(r, k);
                    integrand(&p, buf).map_err(|e| e.at_sample(r * per + k))
                };
                let m = reduce_units(per, n_out, unit)?;
                let means: Vec<Octonion> = m.results(per).into_iter().map(|res| res.value).collect();
                replicate_means.push(&means);
            }
            Ok(replicate_means.results(per * QMC_REPLICATES))
        }
    }
}

fn reduce_units<U>(n_units: u64, n_out: usize, unit: U) -> Result<Moments>
where
    U: Fn(u64, &mut [Octonion], &mut [Octonion]) -> Result<()> + Sync,
{
    let n_chunks = n_units.div_ceil(CHUNK);
    let partials: Vec<Result<Moments>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::new(n_out);
            let mut buf = vec![Octonion::ZERO; n_out];
            let mut tmp = vec![Octonion::ZERO; n_out];
            let end = ((c + 1) * CHUNK).min(n_units);
            for i in c * CHUNK..end {
                buf.fill(Octonion::ZERO);
                unit(i, &mut buf, &mut tmp)?;
                m.push(&buf);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::new(n_out);
    for p in partials {
        total.merge(&p?);
    }
    Ok(total)
}

/// `(conj(g) conj(u)) (u f)` for a unit direction `u`.
#[inline]
fn bracketed(f: Octonion, g: Octonion, u: Octonion) -> Octonion {
    let left = g.conj().mul(&u.conj());
    let right = u.mul(&f);
    left.mul(&right)
}

/// `(f, g)_{S^7}`.
pub fn inner_sphere(f: &Field, g: &Field, spec: &QuadratureSpec) -> Result<InnerProductResult> {
    if spec.strategy == Strategy::ExactMoments {
        let integrand = sphere_integrand_poly(f, g)?;
        return Ok(InnerProductResult::exact(integrand.sphere_mean()));
    }
    let r = domain_mean(Domain::Sphere, spec, 1, |eta, out| {
        let u = eta.as_octonion();
        out[0] = bracketed(f.eval(eta)?, g.eval(eta)?, u);
        Ok(())
    })?;
    Ok(r[0])
}

/// `(f, g)_B`.
pub fn inner_ball(f: &Field, g: &Field, spec: &QuadratureSpec) -> Result<InnerProductResult> {
    if spec.strategy == Strategy::ExactMoments {
        let fp = poly_of(f)?;
        let gp = poly_of(g)?;
        let id = RadialPoly::identity();
        let integrand = gp.conj().mul(&id.conj()).mul(&id.mul(fp));
        return Ok(InnerProductResult::exact(integrand.ball_integral(-2)?));
    }
    let r = domain_mean(Domain::Ball, spec, 1, |x, out| {
        let xo = x.as_octonion();
        let u = xo / xo.norm();
        out[0] = bracketed(f.eval(x)?, g.eval(x)?, u);
        Ok(())
    })?;
    Ok(r[0].scaled(0.125))
}

/// Many sphere inner products evaluated on one shared sample set.
pub fn inner_sphere_many(pairs: &[(Field, Field)], spec: &QuadratureSpec) -> Result<Vec<InnerProductResult>> {
    if spec.strategy == Strategy::ExactMoments {
        return pairs
            .iter()
            .map(|(f, g)| inner_sphere(f, g, spec))
            .collect();
    }
    domain_mean(Domain::Sphere, spec, pairs.len(), |eta, out| {
        let u = eta.as_octonion();
        for (slot, (f, g)) in out.iter_mut().zip(pairs) {
            *slot = bracketed(f.eval(eta)?, g.eval(eta)?, u);
        }
        Ok(())
    })
}

/// Many ball inner products evaluated on one shared sample set.
pub fn inner_ball_many(pairs: &[(Field, Field)], spec: &QuadratureSpec) -> Result<Vec<InnerProductResult>> {
    if spec.strategy == Strategy::ExactMoments {
        return pairs.iter().map(|(f, g)| inner_ball(f, g, spec)).collect();
    }
    let r = domain_mean(Domain::Ball, spec, pairs.len(), |x, out| {
        let xo = x.as_octonion();
        let u = xo / xo.norm();
        for (slot, (f, g)) in out.iter_mut().zip(pairs) {
            *slot = bracketed(f.eval(x)?, g.eval(x)?, u);
        }
        Ok(())
    })?;
    Ok(r.into_iter().map(|v| v.scaled(0.125)).collect())
}

/// Dimension-unified reproducing integral
/// `(1/w_m) int_{B_m} K_m(x, a) ((x/|x|^2) f(x)) dV`, with `Vol(B_m)/w_m = 1/m`.
///
/// For `m = 2` the integration runs over the unit disc of `span{e0, e1}`.
pub fn unified_inner(f: &Field, a: Octonion, m: u32, spec: &QuadratureSpec) -> Result<InnerProductResult> {
    let domain = match m {
        8 => Domain::Ball,
        2 => {
            if !in_complex_line(&a) {
                return Err(Error::Domain("m = 2 requires a in span{e0, e1}".into()));
            }
            Domain::Disc
        }
        other => return Err(Error::UnsupportedDimension(other)),
    };
    if spec.strategy == Strategy::ExactMoments {
        return Err(Error::Config("unified reproducing integral has no exact-moment route".into()));
    }
    let r = domain_mean(domain, spec, 1, |x, out| {
        let xo = x.as_octonion();
        let k = unified_kernel(xo, a, m)?;
        let right = (xo / xo.norm_sqr()).mul(&f.eval(x)?);
        out[0] = k.mul(&right);
        Ok(())
    })?;
    Ok(r[0].scaled(1.0 / f64::from(m)))
}

fn poly_of(f: &Field) -> Result<&RadialPoly> {
    f.as_polynomial()
        .ok_or_else(|| Error::NotPolynomial(f.label().to_string()))
}

fn sphere_integrand_poly(f: &Field, g: &Field) -> Result<RadialPoly> {
    let fp = poly_of(f)?.on_sphere();
    let gp = poly_of(g)?.on_sphere();
    let id = RadialPoly::identity();
    Ok(gp.conj().mul(&id.conj()).mul(&id.mul(&fp)))
}

/// `(1/w8) int_{S^7} x^alpha dS`.
///
/// Zero when any exponent is odd; otherwise
/// `prod (alpha_i - 1)!! / (8 * 10 * ... * (8 + |alpha| - 2))`.
pub fn exact_sphere_moment(alpha: &[u32; 8]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let mut num = 1.0;
    for &a in alpha {
        let mut t = 1;
        while t < a {
            num *= f64::from(t);
            t += 2;
        }
    }
    let half: u32 = alpha.iter().sum::<u32>() / 2;
    let den: f64 = (0..half).map(|t| f64::from(8 + 2 * t)).product();
    num / den
}

/// Surface area of S^7, `pi^4 / 3`.
pub fn omega8() -> f64 {
    PI.powi(4) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn gamma_moment(alpha: &[u32; 8]) -> f64 {
        // int_{S^{n-1}} x^alpha dS = 2 prod G((a_i+1)/2) / G((|a|+n)/2); divide by w8 = 2 pi^4 / G(4)
        if alpha.iter().any(|a| a % 2 == 1) {
            return 0.0;
        }
        let s: u32 = alpha.iter().sum();
        let num: f64 = alpha.iter().map(|&a| gamma((f64::from(a) + 1.0) / 2.0)).product();
        let surface = 2.0 * num / gamma((f64::from(s) + 8.0) / 2.0);
        surface / (2.0 * PI.powi(4) / gamma(4.0))
    }

    #[test]
    fn moments_match_gamma_formula() {
        let cases: [[u32; 8]; 6] = [
            [0; 8],
            [2, 0, 0, 0, 0, 0, 0, 0],
            [2, 2, 0, 0, 0, 0, 0, 0],
            [4, 0, 0, 0, 0, 0, 0, 0],
            [2, 4, 0, 6, 0, 0, 2, 0],
            [1, 1, 0, 0, 0, 0, 0, 0],
        ];
        for a in &cases {
            let exact = exact_sphere_moment(a);
            let oracle = gamma_moment(a);
            assert!((exact - oracle).abs() <= 1e-13 * oracle.abs().max(1e-300), "{a:?}: {exact} vs {oracle}");
        }
        assert_eq!(exact_sphere_moment(&[0; 8]), 1.0);
        assert_eq!(exact_sphere_moment(&[2, 0, 0, 0, 0, 0, 0, 0]), 0.125);
        assert_eq!(exact_sphere_moment(&[2, 2, 0, 0, 0, 0, 0, 0]), 1.0 / 80.0);
        assert_eq!(exact_sphere_moment(&[0, 0, 3, 0, 0, 0, 0, 0]), 0.0);
    }

    #[test]
    fn omega8_value() {
        assert!((omega8() - 32.469_697_011_334_14).abs() < 1e-12);
        let via_gamma = 2.0 * PI.powi(4) / gamma(4.0);
        assert!((omega8() - via_gamma).abs() < 1e-12);
        assert_eq!(omega8() * exact_sphere_moment(&[0; 8]), omega8());
    }

    #[test]
    fn sphere_samples_are_deterministic_and_on_sphere() {
        let spec = QuadratureSpec::mc(100, 7);
        let a = sample_sphere(&spec).unwrap();
        let b = sample_sphere(&spec).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert!((p.radius() - 1.0).abs() < 1e-14);
        }
        let c = sample_sphere(&QuadratureSpec::mc(100, 8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampler_is_index_addressable() {
        let s = Sampler::new(Domain::Ball, QuadratureSpec::mc(10, 3)).unwrap();
        let all = s.points(10);
        assert_eq!(all[7], s.mc_point(7));
    }

    #[test]
    fn sphere_sample_moments() {
        let n = 200_000;
        let spec = QuadratureSpec::mc(n, 11);
        let r = domain_mean(Domain::Sphere, &spec, 2, |p, out| {
            out[0] = p.as_octonion();
            out[1] = Octonion::real(p.0[0] * p.0[0]);
            Ok(())
        })
        .unwrap();
        for k in 0..8 {
            assert!(r[0].value[k].abs() <= 4.0 * r[0].std_error_components[k]);
        }
        assert!((r[1].value.re() - 0.125).abs() <= 4.0 * r[1].std_error_components[0]);
    }

    #[test]
    fn ball_sample_moments() {
        let n = 200_000;
        let spec = QuadratureSpec::mc(n, 12);
        let r = domain_mean(Domain::Ball, &spec, 2, |p, out| {
            let r2 = p.radius().powi(2);
            out[0] = Octonion::real(r2);
            out[1] = Octonion::real(if p.radius() < 0.5 { 1.0 } else { 0.0 });
            Ok(())
        })
        .unwrap();
        assert!((r[0].value.re() - 0.8).abs() <= 4.0 * r[0].std_error);
        assert!((r[1].value.re() - 0.5f64.powi(8)).abs() <= 4.0 * r[1].std_error_components[0]);
        let pts = sample_ball(&QuadratureSpec::mc(20_000, 1)).unwrap();
        assert!(pts.iter().all(|p| p.radius() >= ORIGIN_EXCLUSION && p.radius() <= 1.0));
    }

    #[test]
    fn qmc_sphere_moments() {
        let spec = QuadratureSpec::qmc(64_000, 5);
        let r = domain_mean(Domain::Sphere, &spec, 1, |p, out| {
            out[0] = Octonion::real(p.0[3] * p.0[3]);
            Ok(())
        })
        .unwrap();
        assert!((r[0].value.re() - 0.125).abs() <= 4.0 * r[0].std_error_components[0]);
        assert_eq!(r[0].n_used, 64_000);
    }

    #[test]
    fn unit_constants_have_unit_sphere_product() {
        let one = Field::constant(Octonion::ONE);
        let exact = inner_sphere(&one, &one, &QuadratureSpec::exact()).unwrap();
        assert_eq!(exact.value, Octonion::ONE);
        assert_eq!(exact.std_error, 0.0);
        let mc = inner_sphere(&one, &one, &QuadratureSpec::mc(1000, 1)).unwrap();
        assert!((mc.value - Octonion::ONE).norm() < 1e-14);
    }

    #[test]
    fn unit_constants_ball_product_is_one_eighth() {
        let one = Field::constant(Octonion::ONE);
        let exact = inner_ball(&one, &one, &QuadratureSpec::exact()).unwrap();
        assert!((exact.value - Octonion::real(0.125)).norm() < 1e-15);
        let mc = inner_ball(&one, &one, &QuadratureSpec::mc(1000, 1)).unwrap();
        assert!((mc.value - Octonion::real(0.125)).norm() < 1e-14);
    }

    #[test]
    fn exact_strategy_rejects_non_polynomials() {
        let f = Field::from_octonion_fn("opaque", crate::fields::SingularSet::empty(), |x| x);
        let err = inner_sphere(&f, &f, &QuadratureSpec::exact()).unwrap_err();
        assert!(matches!(err, Error::NotPolynomial(_)));
    }

    #[test]
    fn evaluation_errors_carry_sample_index() {
        let f = Field::new("fails", crate::fields::SingularSet::empty(), |x| {
            if x.0[0] > 0.9 {
                Err(Error::Domain("boom".into()))
            } else {
                Ok(Octonion::ONE)
            }
        });
        let err = inner_sphere(&f, &f, &QuadratureSpec::mc(50_000, 1)).unwrap_err();
        match err {
            Error::Sample { index, .. } => assert!(index < 50_000),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(QuadratureSpec::mc(0, 1).validate().is_err());
        assert!(QuadratureSpec::qmc(8, 1).validate().is_err());
        assert_eq!("qmc".parse::<Strategy>().unwrap(), Strategy::QuasiMonteCarlo);
        assert!("simpson".parse::<Strategy>().is_err());
    }

    #[test]
    fn antithetic_pairs_are_counted() {
        let one = Field::constant(Octonion::ONE);
        let r = inner_ball(&one, &one, &QuadratureSpec::mc(1000, 2).with_antithetic(true)).unwrap();
        assert_eq!(r.n_used, 1000);
        assert!((r.value - Octonion::real(0.125)).norm() < 1e-14);
    }

    #[test]
    fn rd_generators_are_irrational_looking() {
        let a = rd_generators(8);
        assert_eq!(a.len(), 8);
        assert!(a.iter().all(|v| *v > 0.0 && *v < 1.0));
        // phi_1 is the golden ratio
        let g = rd_generators(1)[0];
        assert!((g - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
    }
}
