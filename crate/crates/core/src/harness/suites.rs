use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::report::{CheckRow, Method, ToleranceMode};
use super::{Suite, SuiteConfig};
use crate::algebra::{associator, Octonion};
use crate::error::{Error, Result};
use crate::fields::{adjoint_a, d_at, dbar_at, gradient_norm, kelvin, DiffScheme, Field, Point8};
use crate::kernels::{
    bergman_b, bergman_field, cauchy_e2, cauchy_field, cauchy_field_at, dbar_identity, szego_field,
    szego_r_field, szego_s, unified_kernel, KernelParams,
};
use crate::poly::RadialPoly;
use crate::quadrature::{
    inner_ball, inner_ball_many, inner_sphere, inner_sphere_many, unified_inner, InnerProductResult, QuadratureSpec,
    Strategy,
};
use crate::spherical::{
    apply_t, bergman_norm_series, linear_example, outer_example, parseval_decompose, truncate, ParsevalTable,
    PartKind, PartLabel, RadialFitSpec,
};

const ALGEBRA_TOL: f64 = 1e-13;
const FD_TOL: f64 = 1e-5;
const EXACT_TOL: f64 = 1e-12;
const MC_SIGMAS: f64 = 4.0;
const ALGEBRA_TRIALS: usize = 10_000;
const FD_POINTS: usize = 200;
const PAIR_POINTS: usize = 100;

// RNG streams for the point sets of each suite.
const STREAM_ALGEBRA: u64 = 1;
const STREAM_ANALYTIC: u64 = 2;
const STREAM_KELVIN: u64 = 3;
const STREAM_ADJOINT: u64 = 4;
const STREAM_UNIFIED: u64 = 5;
const STREAM_SYMMETRY: u64 = 6;

pub(crate) struct Ctx<'a> {
    cfg: &'a SuiteConfig,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(cfg: &'a SuiteConfig) -> Self {
        Ctx { cfg }
    }

    fn scheme(&self) -> DiffScheme {
        if self.cfg.richardson {
            DiffScheme::richardson(self.cfg.h)
        } else {
            DiffScheme::central(self.cfg.h)
        }
    }

    /// The configured quadrature.
    fn quad(&self) -> QuadratureSpec {
        QuadratureSpec {
            strategy: self.cfg.strategy,
            n_samples: self.cfg.n_samples,
            seed: self.cfg.seed,
            antithetic: false,
        }
    }

    /// Quadrature for integrands without an exact route: the configured one,
    /// or Monte Carlo when exact moments were requested.
    fn sampled(&self) -> QuadratureSpec {
        let mut q = self.quad();
        if q.strategy == Strategy::ExactMoments {
            q.strategy = Strategy::MonteCarlo;
        }
        q
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        r.set_stream(stream);
        r
    }

    fn inner_fit(&self) -> RadialFitSpec {
        RadialFitSpec::inner(self.cfg.max_degree)
    }
}

fn method_of(q: &QuadratureSpec) -> Method {
    match q.strategy {
        Strategy::MonteCarlo => Method::Mc,
        Strategy::QuasiMonteCarlo => Method::Qmc,
        Strategy::ExactMoments => Method::Exact,
    }
}

/// Row for an inner product that equals `rhs` exactly: 1e-12 for exact
/// moments, `4 sigma` for sampled estimates.
fn estimate_row(
    id: String,
    reference: String,
    q: &QuadratureSpec,
    value: Result<InnerProductResult>,
    rhs: Octonion,
) -> CheckRow {
    let method = method_of(q);
    match value {
        Ok(v) if method == Method::Exact => {
            CheckRow::compare(id, reference, method, v.value, rhs, EXACT_TOL, ToleranceMode::Absolute)
        }
        Ok(v) => CheckRow::statistical(id, reference, method, v.value, &v.std_error_components, rhs, MC_SIGMAS),
        Err(e) => CheckRow::failed(id, reference, method, rhs, EXACT_TOL, ToleranceMode::Absolute, &e),
    }
}

/// Row whose left side is the worst case of a sweep; `Err` becomes a failed row.
fn worst_row(
    id: &str,
    reference: &str,
    method: Method,
    worst: Result<f64>,
    tolerance: f64,
) -> CheckRow {
    match worst {
        Ok(w) => CheckRow::scalar(id, reference, method, w, 0.0, tolerance, ToleranceMode::Absolute),
        Err(e) => CheckRow::failed(id, reference, method, Octonion::ZERO, tolerance, ToleranceMode::Absolute, &e),
    }
}

fn random_octonion(rng: &mut ChaCha8Rng) -> Octonion {
    Octonion::new(std::array::from_fn(|_| rng.random_range(-1.0..=1.0)))
}

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 8] {
    loop {
        let v: [f64; 8] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.map(|x| x / n);
        }
    }
}

/// Uniform in the shell `rmin <= |x| <= rmax`.
fn random_in_shell(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Point8 {
    let u: f64 = rng.random();
    let r = (rmin.powi(8) + u * (rmax.powi(8) - rmin.powi(8))).powf(0.125);
    Point8(random_direction(rng)).scaled(r)
}

fn max_over<I, F>(items: I, mut f: F) -> Result<f64>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Result<f64>,
{
    let mut worst = 0.0f64;
    for it in items {
        let v = f(it)?;
        if v.is_nan() {
            return Err(Error::Domain("NaN in sweep".into()));
        }
        worst = worst.max(v);
    }
    Ok(worst)
}

/// Test centers `b` of `E(. - b)`: `2 e2` and `1.5 (e0 + e3)/sqrt(2)`.
fn test_centers() -> [Octonion; 2] {
    let s = 1.5 / 2f64.sqrt();
    [
        Octonion::basis(2) * 2.0,
        Octonion::new([s, 0.0, 0.0, s, 0.0, 0.0, 0.0, 0.0]),
    ]
}

/// `z1 = x1 - x0 e1` raised to the third power, inner of degree three.
fn cubic_example() -> Field {
    let z = RadialPoly::coordinate(1).sub(&RadialPoly::coordinate(0).right_mul(&Octonion::basis(1)));
    Field::polynomial("(x1 - x0 e1)^3", z.mul(&z).mul(&z))
}

/// `z^2` with `z = x0 + x1 e1`.
fn complex_square() -> Field {
    let z = RadialPoly::coordinate(0).add(&RadialPoly::coordinate(1).right_mul(&Octonion::basis(1)));
    Field::polynomial("(x0 + x1 e1)^2", z.mul(&z))
}

pub(crate) fn run(suite: Suite, ctx: &Ctx<'_>) -> Vec<CheckRow> {
    match suite {
        Suite::Algebra => algebra(ctx),
        Suite::Analyticity => analyticity(ctx),
        Suite::Szego => szego(ctx),
        Suite::Bergman => bergman(ctx),
        Suite::Parseval => parseval(ctx),
        Suite::Counterexample => counterexample(ctx),
        Suite::Unified => unified(ctx),
        Suite::All => Suite::INDIVIDUAL.iter().flat_map(|s| run(*s, ctx)).collect(),
    }
}

fn algebra(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let e = Octonion::basis;
    let mut rows = vec![
        CheckRow::compare(
            "algebra.associator_e1_e2_e4",
            "[e1, e2, e4] = 2 e7",
            Method::Algebra,
            associator(&e(1), &e(2), &e(4)),
            e(7) * 2.0,
            0.0,
            ToleranceMode::Absolute,
        ),
        CheckRow::compare(
            "algebra.e1_e6",
            "e1 e6 = -e7",
            Method::Algebra,
            e(1).mul(&e(6)),
            -e(7),
            0.0,
            ToleranceMode::Absolute,
        ),
    ];
    let squares = (1..8).map(|i| (e(i).mul(&e(i)) + Octonion::ONE).norm()).fold(0.0, f64::max);
    rows.push(CheckRow::scalar(
        "algebra.unit_squares",
        "e_i e_i = -1",
        Method::Algebra,
        squares,
        0.0,
        0.0,
        ToleranceMode::Absolute,
    ));

    let mut rng = ctx.rng(STREAM_ALGEBRA);
    let mut worst = [0.0f64; 6];
    for _ in 0..ALGEBRA_TRIALS {
        let x = random_octonion(&mut rng);
        let y = random_octonion(&mut rng);
        let z = random_octonion(&mut rng);
        let (nx, ny, nz) = (x.norm(), y.norm(), z.norm());
        let defects = [
            (x.mul(&y).norm() - nx * ny).abs() / (nx * ny),
            associator(&x, &x, &y).norm() / (nx * nx * ny),
            associator(&x.conj(), &x, &y).norm() / (nx * nx * ny),
            (associator(&x, &y, &z) + associator(&y, &x, &z)).norm() / (nx * ny * nz),
            (associator(&x, &y, &z) + associator(&x, &z, &y)).norm() / (nx * ny * nz),
            (x.mul(&y).conj() - y.conj().mul(&x.conj())).norm() / (nx * ny),
        ];
        for (w, d) in worst.iter_mut().zip(defects) {
            *w = w.max(d);
        }
    }
    let names = [
        ("algebra.multiplicativity", "|xy| = |x||y|"),
        ("algebra.left_alternative", "[x, x, y] = 0"),
        ("algebra.conjugate_alternative", "[conj(x), x, y] = 0"),
        ("algebra.associator_swap_12", "[x, y, z] = -[y, x, z]"),
        ("algebra.associator_swap_23", "[x, y, z] = -[x, z, y]"),
        ("algebra.conjugation_anti_automorphism", "conj(xy) = conj(y) conj(x)"),
    ];
    for ((id, reference), w) in names.iter().zip(worst) {
        rows.push(CheckRow::scalar(
            *id,
            format!("{reference}, worst relative defect over {ALGEBRA_TRIALS} random triples"),
            Method::Algebra,
            w,
            0.0,
            ALGEBRA_TOL,
            ToleranceMode::Absolute,
        ));
    }
    rows
}

/// Worst `|D f(x)| / |grad f(x)|` over `points`.
fn analyticity_ratio(f: &Field, points: &[Point8], scheme: &DiffScheme) -> Result<f64> {
    max_over(points, |x| {
        let d = d_at(f, x, scheme)?.norm();
        let scale = gradient_norm(f, x, scheme)?;
        Ok(if scale > 0.0 { d / scale } else { d })
    })
}

/// Observed order of central differences for `D E` at unit points.
fn fd_order(points: &[Point8]) -> Result<f64> {
    let f = cauchy_field();
    let (h1, h2) = (2e-2, 1e-2);
    let mut orders = Vec::with_capacity(points.len());
    for x in points {
        let x = x.scaled(1.0 / x.radius());
        let e1 = d_at(&f, &x, &DiffScheme::central(h1))?.norm();
        let e2 = d_at(&f, &x, &DiffScheme::central(h2))?.norm();
        orders.push((e1 / e2).log2());
    }
    orders.sort_by(|a, b| a.total_cmp(b));
    Ok(orders[orders.len() / 2])
}

fn analyticity(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let scheme = ctx.scheme();
    let mut rng = ctx.rng(STREAM_ANALYTIC);
    let shell: Vec<Point8> = (0..FD_POINTS).map(|_| random_in_shell(&mut rng, 0.5, 2.0)).collect();
    let ball: Vec<Point8> = (0..FD_POINTS).map(|_| random_in_shell(&mut rng, 0.0, 0.9)).collect();
    let mut rows = vec![worst_row(
        "analyticity.cauchy",
        "D E = 0 on 0.5 <= |x| <= 2, worst |D E| / |grad E|",
        Method::FiniteDifference,
        analyticity_ratio(&cauchy_field(), &shell, &scheme),
        FD_TOL,
    )];
    for (i, a) in ctx.cfg.points.iter().enumerate() {
        let kernels = [
            ("szego", "S", szego_field(*a)),
            ("szego_r", "S^0.9", szego_r_field(*a, 0.9)),
            ("bergman", "B", bergman_field(*a)),
        ];
        for (tag, name, f) in kernels {
            rows.push(worst_row(
                &format!("analyticity.{tag}.a{i}"),
                &format!("D {name}(., a) = 0 on |x| <= 0.9 with a = {a}, worst |D f| / |grad f|"),
                Method::FiniteDifference,
                analyticity_ratio(&f, &ball, &scheme),
                FD_TOL,
            ));
        }
    }
    let harmonic = max_over(&shell[..50], |x| {
        Ok(scheme.laplacian_at(&cauchy_field(), x)?.norm() * x.radius().powi(8))
    });
    rows.push(worst_row(
        "analyticity.cauchy_harmonic",
        "Lap E = 0, worst |Lap E(x)| |x|^8",
        Method::FiniteDifference,
        harmonic,
        1e-4,
    ));
    let x = Point8([0.3, -0.2, 0.5, 0.1, -0.4, 0.25, 0.15, -0.35]);
    let id = Field::identity();
    for (rid, reference, value, rhs) in [
        ("analyticity.d_identity", "D x = -6", d_at(&id, &x, &scheme), -6.0),
        ("analyticity.dbar_identity", "Dbar x = 8", dbar_at(&id, &x, &scheme), 8.0),
    ] {
        rows.push(match value {
            Ok(v) => CheckRow::compare(
                rid,
                reference,
                Method::FiniteDifference,
                v,
                Octonion::real(rhs),
                FD_TOL,
                ToleranceMode::Relative,
            ),
            Err(e) => CheckRow::failed(
                rid,
                reference,
                Method::FiniteDifference,
                Octonion::real(rhs),
                FD_TOL,
                ToleranceMode::Relative,
                &e,
            ),
        });
    }
    let order = fd_order(&shell[..20]);
    rows.push(match order {
        Ok(p) => CheckRow::scalar(
            "analyticity.fd_order",
            "central differences converge at order 2 (median over 20 points, h = 0.02, 0.01)",
            Method::FiniteDifference,
            p,
            2.0,
            0.1,
            ToleranceMode::Absolute,
        ),
        Err(e) => CheckRow::failed(
            "analyticity.fd_order",
            "central differences converge at order 2",
            Method::FiniteDifference,
            Octonion::real(2.0),
            0.1,
            ToleranceMode::Absolute,
            &e,
        ),
    });
    rows
}

type BatchInner = fn(&[(Field, Field)], &QuadratureSpec) -> Result<Vec<InnerProductResult>>;

/// Reproducing rows `f(a) = (f, K(., a))` for every test center and point.
fn reproducing_rows(
    ctx: &Ctx<'_>,
    prefix: &str,
    kernel_name: &str,
    space: &str,
    kernel: fn(Octonion) -> Field,
    many: BatchInner,
) -> Vec<CheckRow> {
    let q = ctx.sampled();
    let mut pairs = Vec::new();
    let mut meta = Vec::new();
    for (j, b) in test_centers().iter().enumerate() {
        for (i, a) in ctx.cfg.points.iter().enumerate() {
            pairs.push((cauchy_field_at(*b), kernel(*a)));
            meta.push((
                format!("{prefix}.reproduce.b{j}.a{i}"),
                format!("f(a) = (f, {kernel_name}(., a))_{space} for f = E(. - b), b = {b}, a = {a}"),
                cauchy_e2(*a, *b),
            ));
        }
    }
    match many(&pairs, &q) {
        Ok(values) => meta
            .into_iter()
            .zip(values)
            .map(|((id, reference, rhs), v)| match rhs {
                Ok(rhs) => estimate_row(id, reference, &q, Ok(v), rhs),
                Err(e) => estimate_row(id, reference, &q, Err(e), Octonion::ZERO),
            })
            .collect(),
        Err(e) => meta
            .into_iter()
            .map(|(id, reference, _)| {
                estimate_row(id, reference, &q, Err(Error::Domain(e.to_string())), Octonion::ZERO)
            })
            .collect(),
    }
}

fn szego(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let mut rows = reproducing_rows(ctx, "szego", "S", "S7", szego_field, inner_sphere_many);
    let q = ctx.quad();
    let one = Field::constant(Octonion::ONE);
    for (tag, f, at0) in [
        ("e0", Field::constant(Octonion::ONE), Octonion::ONE),
        ("z1", linear_example(), Octonion::ZERO),
    ] {
        rows.push(estimate_row(
            format!("szego.polynomial.{tag}"),
            format!("f(0) = (f, S(., 0))_S7 = (f, 1)_S7 for f = {}", f.label()),
            &q,
            inner_sphere(&f, &one, &q),
            at0,
        ));
    }
    let mut rng = ctx.rng(STREAM_KELVIN);
    let kelvin_err = max_over(0..PAIR_POINTS, |_| {
        let x = random_in_shell(&mut rng, 0.1, 0.95);
        let a = random_in_shell(&mut rng, 0.0, 0.9).as_octonion();
        let direct = szego_s(x.as_octonion(), &KernelParams::new(a))?;
        let via = kelvin(&cauchy_field_at(a.conj())).eval(&x)?;
        Ok((direct - via).norm() / direct.norm())
    });
    rows.push(worst_row(
        "szego.kelvin",
        "S(x, a) = K(E(., conj(a)))(x), worst relative difference",
        Method::ClosedForm,
        kelvin_err,
        EXACT_TOL,
    ));
    rows
}

fn bergman(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let mut rows = reproducing_rows(ctx, "bergman", "B", "B", bergman_field, inner_ball_many);
    let q = ctx.sampled();
    let method = method_of(&q);
    let one = Field::constant(Octonion::ONE);

    let consts: Vec<(Field, Field)> = ctx.cfg.points.iter().map(|a| (one.clone(), bergman_field(*a))).collect();
    match inner_ball_many(&consts, &q) {
        Ok(values) => {
            for (i, (a, v)) in ctx.cfg.points.iter().zip(values).enumerate() {
                let id = format!("bergman.constant.a{i}");
                let reference = format!("e0 = (e0, B(., a))_B with a = {a}");
                rows.push(if a.norm_sqr() == 0.0 {
                    CheckRow::compare(id, reference, method, v.value, Octonion::ONE, 1e-3, ToleranceMode::Absolute)
                } else {
                    estimate_row(id, reference, &q, Ok(v), Octonion::ONE)
                });
            }
        }
        Err(e) => rows.push(CheckRow::failed(
            "bergman.constant",
            "e0 = (e0, B(., a))_B",
            method,
            Octonion::ONE,
            1e-3,
            ToleranceMode::Absolute,
            &e,
        )),
    }

    let analytic = RadialPoly::constant(Octonion::ONE)
        .ball_integral(0)
        .and_then(|vol| Ok(bergman_b(Octonion::basis(2) * 0.3, &KernelParams::new(Octonion::ZERO))? * vol.re()));
    rows.push(match analytic {
        Ok(v) => CheckRow::compare(
            "bergman.constant.analytic",
            "(e0, B(., 0))_B = B(x, 0) Vol(B)/w8 = 8 * 1/8",
            Method::Exact,
            v,
            Octonion::ONE,
            EXACT_TOL,
            ToleranceMode::Absolute,
        ),
        Err(e) => CheckRow::failed(
            "bergman.constant.analytic",
            "(e0, B(., 0))_B = 8 * 1/8",
            Method::Exact,
            Octonion::ONE,
            EXACT_TOL,
            ToleranceMode::Absolute,
            &e,
        ),
    });

    let scheme = ctx.scheme();
    let mut rng = ctx.rng(STREAM_ADJOINT);
    let adjoint_err = max_over(0..PAIR_POINTS, |_| {
        let x = random_in_shell(&mut rng, 0.0, 0.8);
        let a = random_in_shell(&mut rng, 0.0, 0.8).as_octonion();
        let closed = bergman_b(x.as_octonion(), &KernelParams::new(a))?;
        let fd = adjoint_a(&cauchy_field_at(a), scheme).eval(&x)?;
        Ok((closed - fd).norm() / closed.norm())
    });
    rows.push(worst_row(
        "bergman.adjoint",
        "B(x, a) = A(E(., a))(x) for |x|, |a| <= 0.8, worst relative difference",
        Method::FiniteDifference,
        adjoint_err,
        FD_TOL,
    ));

    let mut rng = ctx.rng(STREAM_SYMMETRY);
    let sym = max_over(0..PAIR_POINTS, |_| {
        let x = random_in_shell(&mut rng, 0.0, 0.9).as_octonion();
        let a = random_in_shell(&mut rng, 0.0, 0.9).as_octonion();
        let bxa = bergman_b(x, &KernelParams::new(a))?.norm();
        let bax = bergman_b(a, &KernelParams::new(x))?.norm();
        Ok((bxa - bax).abs() / bxa)
    });
    rows.push(worst_row(
        "bergman.modulus_symmetry",
        "|B(x, a)| = |B(a, x)|, worst relative difference",
        Method::ClosedForm,
        sym,
        EXACT_TOL,
    ));

    rows.extend(norm_series_rows(ctx));
    rows.push(t_szego_row(ctx));
    rows
}

fn norm_series_rows(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let exact = QuadratureSpec::exact();
    let fit = ctx.inner_fit();
    let mut rows = Vec::new();
    for (tag, f, closed) in [
        ("e0", Field::constant(Octonion::ONE), 0.125),
        ("z1", linear_example(), 1.0 / 40.0),
    ] {
        let series = bergman_norm_series(&f, &fit, &exact);
        let direct = inner_ball(&f, &f, &exact);
        let id = format!("bergman.norm_series.{tag}");
        let reference = format!("sum (2k + 8)^-1 |P_k f|^2_S7 = |f|^2_B = {closed} for f = {}", f.label());
        rows.push(match (series, direct) {
            (Ok(s), Ok(d)) => {
                let mut row = CheckRow::scalar(
                    id,
                    reference,
                    Method::Exact,
                    s.total,
                    d.value.re(),
                    EXACT_TOL,
                    ToleranceMode::Absolute,
                );
                row.pass &= (d.value - Octonion::real(closed)).norm() <= EXACT_TOL;
                row
            }
            (Err(e), _) | (_, Err(e)) => CheckRow::failed(
                id,
                reference,
                Method::Exact,
                Octonion::real(closed),
                EXACT_TOL,
                ToleranceMode::Absolute,
                &e,
            ),
        });
    }

    let q = ctx.sampled();
    let method = method_of(&q);
    let a = Octonion::new([0.1, 0.0, 0.1, 0.0, 0.0, -0.1, 0.0, 0.0]);
    let s = szego_field(a);
    let id = "bergman.norm_series.szego";
    let reference = format!(
        "sum_(k <= {}) (2k + 8)^-1 |P_k f|^2_S7 = |f|^2_B for f the truncated S(., a), a = {a}",
        fit.max_degree
    );
    let row = truncate(&s, &fit).and_then(|t| {
        let series = bergman_norm_series(&s, &fit, &q)?;
        let direct = inner_ball(&t, &t, &q)?;
        let sigma = series.std_error.hypot(direct.std_error_components[0]);
        Ok(CheckRow::statistical(
            id,
            reference.clone(),
            method,
            Octonion::real(series.total),
            &[sigma; 8],
            Octonion::real(direct.value.re()),
            MC_SIGMAS,
        ))
    });
    rows.push(row.unwrap_or_else(|e| {
        CheckRow::failed(id, reference, method, Octonion::ZERO, 0.0, ToleranceMode::Absolute, &e)
    }));
    rows
}

/// `(f, T S(., a))_B = (f, S(., a))_S7` for a polynomial `f`.
fn t_szego_row(ctx: &Ctx<'_>) -> CheckRow {
    let q = ctx.sampled();
    let method = method_of(&q);
    let a = Octonion::basis(1) * 0.3;
    let f = linear_example().add(&Field::constant(Octonion::basis(4)));
    let id = "bergman.t_szego";
    let reference = format!("(f, T S(., a))_B = (f, S(., a))_S7 for f = {}, a = {a}", f.label());
    let row = apply_t(&szego_field(a), &ctx.inner_fit()).and_then(|ts| {
        let lhs = inner_ball(&f, &ts, &q)?;
        let rhs = inner_sphere(&f, &szego_field(a), &q)?;
        let sigma: [f64; 8] =
            std::array::from_fn(|i| lhs.std_error_components[i].hypot(rhs.std_error_components[i]));
        Ok(CheckRow::statistical(id, reference.clone(), method, lhs.value, &sigma, rhs.value, MC_SIGMAS))
    });
    row.unwrap_or_else(|e| CheckRow::failed(id, reference, method, Octonion::ZERO, 0.0, ToleranceMode::Absolute, &e))
}

fn p(k: usize) -> PartLabel {
    PartLabel { kind: PartKind::Inner, degree: k }
}

fn q(k: usize) -> PartLabel {
    PartLabel { kind: PartKind::Outer, degree: k }
}

/// Rows for blocks that must vanish: one row per block, exact or `4 sigma`.
fn off_structure_rows(prefix: &str, table: &ParsevalTable, method: Method) -> Vec<CheckRow> {
    table
        .blocks
        .iter()
        .filter(|b| !b.structural)
        .map(|b| {
            let id = format!("{prefix}.{}_{}", b.f_part, b.g_part);
            let reference = format!("({} f, {} g)_S7 = 0", b.f_part, b.g_part);
            if method == Method::Exact {
                CheckRow::compare(id, reference, method, b.value.value, Octonion::ZERO, EXACT_TOL, ToleranceMode::Absolute)
            } else {
                CheckRow::statistical(
                    id,
                    reference,
                    method,
                    b.value.value,
                    &b.value.std_error_components,
                    Octonion::ZERO,
                    MC_SIGMAS,
                )
                .with_allowance(table.extraction_floor())
            }
        })
        .collect()
}

/// Exact rows at 1e-12; sampled rows at `4 sigma` plus the extraction floor.
fn value_row(id: &str, reference: &str, method: Method, v: &InnerProductResult, rhs: Octonion, floor: f64) -> CheckRow {
    if method == Method::Exact {
        CheckRow::compare(id, reference, method, v.value, rhs, EXACT_TOL, ToleranceMode::Absolute)
    } else {
        CheckRow::statistical(id, reference, method, v.value, &v.std_error_components, rhs, MC_SIGMAS)
            .with_allowance(floor)
    }
}

fn parseval(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let quad = ctx.quad();
    let method = method_of(&quad);
    let mut rows = Vec::new();
    let fail = |id: &str, e: &Error| {
        CheckRow::failed(id, "Parseval decomposition", method, Octonion::ZERO, 0.0, ToleranceMode::Absolute, e)
    };

    // distinct inner degrees are orthogonal
    let fit = RadialFitSpec::inner(ctx.cfg.max_degree.max(3));
    match parseval_decompose(&linear_example(), &cubic_example(), &fit, &quad) {
        Ok(t) => {
            rows.push(value_row(
                "parseval.disjoint.direct",
                "(z1, z1^3)_S7 = 0 for z1 = x1 - x0 e1",
                method,
                &t.direct,
                Octonion::ZERO,
                0.0,
            ));
            let nonzero = t.blocks.iter().filter(|b| b.structural);
            for b in nonzero {
                let id = format!("parseval.disjoint.{}_{}", b.f_part, b.g_part);
                let reference = format!("({} z1, {} z1^3)_S7 = 0", b.f_part, b.g_part);
                rows.push(value_row(&id, &reference, method, &b.value, Octonion::ZERO, t.extraction_floor()));
            }
            rows.extend(off_structure_rows("parseval.disjoint.off", &t, method));
        }
        Err(e) => rows.push(fail("parseval.disjoint", &e)),
    }

    // the counterexample pair, decomposed as one field h = f + g
    let h = linear_example().add(&outer_example());
    let laurent = RadialFitSpec::laurent(3, 0.6, 1.6);
    match parseval_decompose(&h, &h, &laurent, &quad) {
        Ok(t) => {
            rows.extend(off_structure_rows("parseval.pair.off", &t, method));
            let target = Octonion::basis(6) * (-1.0 / 40.0);
            if let Some(b) = t.block(p(1), q(2)) {
                rows.push(value_row(
                    "parseval.pair.p1_q2",
                    "(P1 h, Q2 h)_S7 = -e6/40 for h = (x1 - x0 e1) + conj(x)|x|^-12 (x1x2 e4 + x0x2 e5 + x0x1 e6)",
                    method,
                    &b.value,
                    target,
                    t.extraction_floor(),
                ));
            }
            if let Some(b) = t.block(q(2), p(1)) {
                rows.push(value_row(
                    "parseval.pair.q2_p1",
                    "(Q2 h, P1 h)_S7 = e6/40",
                    method,
                    &b.value,
                    -target,
                    t.extraction_floor(),
                ));
            }
            // |h|^2 = |P1 h|^2 + |Q2 h|^2 + 2 Re (P1 h, Q2 h)
            let get = |a, b| t.block(a, b).map(|x| x.value);
            if let (Some(pp), Some(qq), Some(pq)) = (get(p(1), p(1)), get(q(2), q(2)), get(p(1), q(2))) {
                let series = pp.value.re() + qq.value.re() + 2.0 * pq.value.re();
                let sigma = pp.std_error_components[0]
                    .hypot(qq.std_error_components[0])
                    .hypot(2.0 * pq.std_error_components[0]);
                let reference = "|h|^2_S7 = |P1 h|^2 + |Q2 h|^2 + 2 Re (P1 h, Q2 h)";
                rows.push(if method == Method::Exact {
                    CheckRow::scalar(
                        "parseval.pair.norm_identity",
                        reference,
                        method,
                        series,
                        t.direct.value.re(),
                        EXACT_TOL,
                        ToleranceMode::Absolute,
                    )
                } else {
                    let sigma = sigma.hypot(t.direct.std_error_components[0]);
                    CheckRow::statistical(
                        "parseval.pair.norm_identity",
                        reference,
                        method,
                        Octonion::real(series),
                        &[sigma; 8],
                        Octonion::real(t.direct.value.re()),
                        MC_SIGMAS,
                    )
                    .with_allowance(4.0 * t.extraction_floor())
                });
            }
            let sigma_sum = t
                .blocks
                .iter()
                .filter(|b| b.structural)
                .map(|b| b.value.max_std_error().powi(2))
                .sum::<f64>()
                .sqrt()
                .hypot(t.direct.max_std_error());
            let reference = "(h, h)_S7 = sum of admissible blocks";
            rows.push(if method == Method::Exact {
                CheckRow::compare(
                    "parseval.pair.block_sum",
                    reference,
                    method,
                    t.block_sum,
                    t.direct.value,
                    EXACT_TOL,
                    ToleranceMode::Absolute,
                )
            } else {
                CheckRow::statistical(
                    "parseval.pair.block_sum",
                    reference,
                    method,
                    t.block_sum,
                    &[sigma_sum; 8],
                    t.direct.value,
                    MC_SIGMAS,
                )
                .with_allowance(t.blocks.len() as f64 * t.extraction_floor())
            });
        }
        Err(e) => rows.push(fail("parseval.pair", &e)),
    }
    rows
}

fn counterexample(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let q = ctx.quad();
    let target = Octonion::basis(6) * (-1.0 / 40.0);
    vec![estimate_row(
        "counterexample.p1f_q2g".into(),
        "(f, g)_S7 = -e6/40 for f = x1 - x0 e1 = P1 f, g = conj(x)|x|^-12 (x1x2 e4 + x0x2 e5 + x0x1 e6) = Q2 g".into(),
        &q,
        inner_sphere(&linear_example(), &outer_example(), &q),
        target,
    )]
}

fn unified(ctx: &Ctx<'_>) -> Vec<CheckRow> {
    let scheme = ctx.scheme();
    let mut rng = ctx.rng(STREAM_UNIFIED);
    let pairs: Vec<(Octonion, Octonion)> = (0..PAIR_POINTS)
        .map(|_| {
            let x = random_in_shell(&mut rng, 0.05, 0.8).as_octonion();
            let a = random_in_shell(&mut rng, 0.0, 0.8).as_octonion();
            (x, a)
        })
        .collect();
    let identity = max_over(&pairs, |(x, a)| {
        let (lhs, rhs) = dbar_identity(*x, *a, &scheme)?;
        Ok((lhs - rhs).norm() / lhs.norm())
    });
    let mut rows = vec![worst_row(
        "unified.dbar_identity",
        "conj(B(x, a)) conj(x) = Dbar_a[(1 - |a|^2|x|^2) / |1 - a conj(x)|^8], worst relative difference",
        Method::FiniteDifference,
        identity,
        FD_TOL,
    )];
    let m8 = max_over(&pairs, |(x, a)| {
        let k = unified_kernel(*x, *a, 8)?;
        let b = bergman_b(*x, &KernelParams::new(*a))?.conj().mul(&x.conj());
        Ok((k - b).norm() / b.norm())
    });
    rows.push(worst_row(
        "unified.m8_kernel",
        "K_8(x, a) = conj(B(x, a)) conj(x), worst relative difference",
        Method::ClosedForm,
        m8,
        EXACT_TOL,
    ));

    let q = ctx.sampled();
    let a2 = Octonion::real(0.3);
    rows.push(estimate_row(
        "unified.m2_square".into(),
        "f(a) = (1/w2) int_D K_2(z, a) (z/|z|^2) f(z) dA for f(z) = z^2, a = 0.3".into(),
        &q,
        unified_inner(&complex_square(), a2, 2, &q),
        Octonion::real(0.09),
    ));
    let b = test_centers()[0];
    for (i, a) in ctx.cfg.points.iter().enumerate() {
        let rhs = cauchy_e2(*a, b);
        let id = format!("unified.m8_reproduce.a{i}");
        let reference = format!("f(a) = (1/w8) int_B K_8(x, a) (x/|x|^2) f(x) dV for f = E(. - b), b = {b}, a = {a}");
        rows.push(match rhs {
            Ok(rhs) => estimate_row(id, reference, &q, unified_inner(&cauchy_field_at(b), *a, 8, &q), rhs),
            Err(e) => estimate_row(id, reference, &q, Err(e), Octonion::ZERO),
        });
    }
    rows
}
