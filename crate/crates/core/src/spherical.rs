//! Inner and outer spherical components of left-analytic fields.
//!
//! Along a ray `r -> f(r w)` a left-analytic field expands as
//! `sum_k r^k P_k f(w) + sum_k r^-(k+7) Q_k f(w)`. The components at a fixed
//! direction `w` are recovered by least squares on a radial power system; the
//! pseudo-inverse depends only on the radii and is computed once per fit.
//! Polynomial fields can instead be split exactly by homogeneous degree.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::fields::{Field, Point8, SingularSet};
use crate::poly::RadialPoly;
use crate::quadrature::{domain_mean, inner_sphere, Domain, InnerProductResult, QuadratureSpec, Strategy};

/// Largest condition number accepted for the radial system.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartKind {
    /// `P_k`, homogeneous of degree `k`.
    Inner,
    /// `Q_k`, homogeneous of degree `-(k + 7)`.
    Outer,
}

impl PartKind {
    /// Homogeneity exponent of a degree-`k` part.
    pub fn exponent(self, k: usize) -> i32 {
        match self {
            PartKind::Inner => k as i32,
            PartKind::Outer => -(k as i32 + 7),
        }
    }
}

/// Degree and kind of a spherical component, displayed as `P3` or `Q2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartLabel {
    pub kind: PartKind,
    pub degree: usize,
}

impl fmt::Display for PartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            PartKind::Inner => 'P',
            PartKind::Outer => 'Q',
        };
        write!(f, "{c}{}", self.degree)
    }
}

/// Degree of the spherical harmonic `x * part` restricts to on S^7.
fn harmonic_degree(label: &PartLabel) -> usize {
    match label.kind {
        PartKind::Inner => label.degree + 1,
        PartKind::Outer => label.degree,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMode {
    /// Only inner parts, radii inside the unit ball.
    Inner,
    /// Only outer parts, radii outside the unit ball.
    Outer,
    /// Both, radii spanning an annulus.
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialFitSpec {
    pub max_degree: usize,
    pub radii: Vec<f64>,
    pub mode: FitMode,
}

/// `n` Chebyshev points on `[lo, hi]`, in increasing order.
pub fn chebyshev_radii(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut r: Vec<f64> = (0..n)
        .map(|j| {
            let t = ((2 * j + 1) as f64 * PI / (2 * n) as f64).cos();
            0.5 * (lo + hi) + 0.5 * (hi - lo) * t
        })
        .collect();
    r.sort_by(|a, b| a.total_cmp(b));
    r
}

impl RadialFitSpec {
    /// `K + 3` Chebyshev radii in `[0.35, 0.85]`.
    pub fn inner(max_degree: usize) -> Self {
        RadialFitSpec {
            max_degree,
            radii: chebyshev_radii(max_degree + 3, 0.35, 0.85),
            mode: FitMode::Inner,
        }
    }

    /// `K + 3` Chebyshev radii in `[1.1, 1.9]`.
    pub fn outer(max_degree: usize) -> Self {
        RadialFitSpec {
            max_degree,
            radii: chebyshev_radii(max_degree + 3, 1.1, 1.9),
            mode: FitMode::Outer,
        }
    }

    /// Both families on `2K + 6` Chebyshev radii in `[lo, hi]`.
    pub fn laurent(max_degree: usize, lo: f64, hi: f64) -> Self {
        RadialFitSpec {
            max_degree,
            radii: chebyshev_radii(2 * max_degree + 6, lo, hi),
            mode: FitMode::Laurent,
        }
    }

    pub fn unknowns(&self) -> Vec<PartLabel> {
        let kinds: &[PartKind] = match self.mode {
            FitMode::Inner => &[PartKind::Inner],
            FitMode::Outer => &[PartKind::Outer],
            FitMode::Laurent => &[PartKind::Inner, PartKind::Outer],
        };
        kinds
            .iter()
            .flat_map(|&kind| (0..=self.max_degree).map(move |degree| PartLabel { kind, degree }))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.unknowns().len();
        if self.radii.len() < n {
            return Err(Error::Config(format!(
                "radial fit needs at least {n} radii, got {}",
                self.radii.len()
            )));
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::Config("radii must be positive".into()));
        }
        match self.mode {
            FitMode::Inner if self.radii.iter().any(|&r| r >= 1.0) => {
                Err(Error::Config("inner-mode radii must lie in (0, 1)".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A prepared radial least-squares system.
#[derive(Clone, Debug)]
pub struct RadialFit {
    spec: RadialFitSpec,
    unknowns: Vec<PartLabel>,
    design: DMatrix<f64>,
    /// Pseudo-inverse of the column-equilibrated design, rows rescaled back.
    pinv: DMatrix<f64>,
    condition: f64,
}

/// Value of one component at a direction `w` on S^7.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartValue {
    pub label: PartLabel,
    pub value: Octonion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub parts: Vec<PartValue>,
    /// `|A c - y| / |y|` over all eight components.
    pub residual: f64,
    pub condition: f64,
}

impl Extraction {
    pub fn get(&self, kind: PartKind, degree: usize) -> Option<Octonion> {
        self.parts
            .iter()
            .find(|p| p.label.kind == kind && p.label.degree == degree)
            .map(|p| p.value)
    }
}

impl RadialFit {
    pub fn new(spec: &RadialFitSpec) -> Result<RadialFit> {
        spec.validate()?;
        let unknowns = spec.unknowns();
        let rows = spec.radii.len();
        let cols = unknowns.len();
        let design = DMatrix::from_fn(rows, cols, |i, j| {
            spec.radii[i].powi(unknowns[j].kind.exponent(unknowns[j].degree))
        });
        let scale: Vec<f64> = (0..cols)
            .map(|j| design.column(j).norm())
            .collect();
        let mut scaled = design.clone();
        for (j, s) in scale.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / s);
        }
        let svd = scaled.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::IllConditioned {
                condition,
                limit: MAX_CONDITION,
            });
        }
        let mut pinv = svd
            .pseudo_inverse(0.0)
            .map_err(|e| Error::Domain(format!("pseudo-inverse failed: {e}")))?;
        for (j, s) in scale.iter().enumerate() {
            pinv.row_mut(j).scale_mut(1.0 / s);
        }
        Ok(RadialFit {
            spec: spec.clone(),
            unknowns,
            design,
            pinv,
            condition,
        })
    }

    pub fn spec(&self) -> &RadialFitSpec {
        &self.spec
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn unknowns(&self) -> &[PartLabel] {
        &self.unknowns
    }

    /// Solve for every component of `f` along the direction `w` (a unit vector).
    pub fn extract(&self, f: &Field, w: &Point8) -> Result<Extraction> {
        let rows = self.spec.radii.len();
        let mut y = DMatrix::<f64>::zeros(rows, 8);
        for (i, &r) in self.spec.radii.iter().enumerate() {
            let v = f.eval(&w.scaled(r))?;
            for k in 0..8 {
                y[(i, k)] = v[k];
            }
        }
        let coeffs = &self.pinv * &y;
        let fitted = &self.design * &coeffs;
        let residual = (&fitted - &y).norm() / y.norm().max(f64::MIN_POSITIVE);
        let parts = self
            .unknowns
            .iter()
            .enumerate()
            .map(|(j, &label)| PartValue {
                label,
                value: Octonion::new(std::array::from_fn(|k| coeffs[(j, k)])),
            })
            .collect();
        Ok(Extraction {
            parts,
            residual,
            condition: self.condition,
        })
    }
}

/// All components of `f` up to `spec.max_degree` at direction `w`.
pub fn extract_parts(f: &Field, spec: &RadialFitSpec, w: &Point8) -> Result<Extraction> {
    let r = w.radius();
    if r == 0.0 {
        return Err(Error::Domain("extraction direction must be nonzero".into()));
    }
    RadialFit::new(spec)?.extract(f, &w.scaled(1.0 / r))
}

/// One extracted component as a field, extended homogeneously off S^7.
#[derive(Clone, Debug)]
pub struct SphericalPart {
    pub label: PartLabel,
    pub field: Field,
}

impl SphericalPart {
    pub fn degree(&self) -> usize {
        self.label.degree
    }

    pub fn kind(&self) -> PartKind {
        self.label.kind
    }
}

/// Evaluate `sum_k weight(label) * r^e(label) * part(w)` at `x = r w`.
fn part_sum_field(
    f: &Field,
    fit: Arc<RadialFit>,
    label: String,
    weight: impl Fn(&PartLabel) -> f64 + Send + Sync + 'static,
) -> Field {
    let g = f.clone();
    let has_outer = fit.unknowns.iter().any(|u| u.kind == PartKind::Outer);
    let singular = if has_outer {
        SingularSet::origin()
    } else {
        SingularSet::empty()
    };
    Field::new(label, singular, move |x| {
        let r = x.radius();
        let dir = if r > 0.0 {
            x.scaled(1.0 / r)
        } else {
            Point8([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
        };
        let ext = fit.extract(&g, &dir)?;
        let mut acc = Octonion::ZERO;
        for p in &ext.parts {
            let w = weight(&p.label);
            if w == 0.0 {
                continue;
            }
            let e = p.label.kind.exponent(p.label.degree);
            let s = if e == 0 {
                1.0
            } else if r == 0.0 {
                if e > 0 {
                    0.0
                } else {
                    return Err(Error::Singularity {
                        what: "outer part at the origin".into(),
                        set: "{0}".into(),
                        distance: 0.0,
                    });
                }
            } else {
                r.powi(e)
            };
            acc += p.value * (w * s);
        }
        Ok(acc)
    })
}

/// The component `label` of `f` as a field: `P_k f(r w) = r^k P_k f(w)`,
/// `Q_k f(r w) = r^-(k+7) Q_k f(w)`.
pub fn spherical_part(f: &Field, spec: &RadialFitSpec, label: PartLabel) -> Result<SphericalPart> {
    let fit = Arc::new(RadialFit::new(spec)?);
    if !fit.unknowns.contains(&label) {
        return Err(Error::Config(format!("{label} is not among the fitted components")));
    }
    let field = part_sum_field(f, fit, format!("{label}[{}]", f.label()), move |l| {
        if *l == label {
            1.0
        } else {
            0.0
        }
    });
    Ok(SphericalPart { label, field })
}

fn multiplier_field(f: &Field, spec: &RadialFitSpec, power: f64, name: &str) -> Result<Field> {
    if spec.mode != FitMode::Inner {
        return Err(Error::Config(format!("{name} acts on inner expansions; use an inner-mode fit")));
    }
    let fit = Arc::new(RadialFit::new(spec)?);
    Ok(part_sum_field(f, fit, format!("{name}[{}]", f.label()), move |l| {
        (2.0 * l.degree as f64 + 8.0).powf(power)
    }))
}

/// `sqrt(T) f = sum_k sqrt(2k + 8) P_k f`, truncated at `spec.max_degree`.
pub fn apply_sqrt_t(f: &Field, spec: &RadialFitSpec) -> Result<Field> {
    multiplier_field(f, spec, 0.5, "sqrtT")
}

/// `T f = sum_k (2k + 8) P_k f`, truncated at `spec.max_degree`.
pub fn apply_t(f: &Field, spec: &RadialFitSpec) -> Result<Field> {
    multiplier_field(f, spec, 1.0, "T")
}

/// `sum_{k <= K} P_k f`, the inner expansion truncated at `spec.max_degree`.
pub fn truncate(f: &Field, spec: &RadialFitSpec) -> Result<Field> {
    multiplier_field(f, spec, 0.0, "trunc")
}

/// Exact components of a polynomial field, split by homogeneous degree.
///
/// Degrees between -6 and -1 belong to neither family and are rejected.
pub fn exact_parts(f: &Field) -> Result<Vec<SphericalPart>> {
    let poly = f
        .as_polynomial()
        .ok_or_else(|| Error::NotPolynomial(f.label().to_string()))?;
    let mut out = Vec::new();
    for (deg, component) in poly.homogeneous_components() {
        let label = if deg >= 0 {
            PartLabel {
                kind: PartKind::Inner,
                degree: deg as usize,
            }
        } else if deg <= -7 {
            PartLabel {
                kind: PartKind::Outer,
                degree: (-deg - 7) as usize,
            }
        } else {
            return Err(Error::Domain(format!(
                "homogeneous degree {deg} is neither inner nor outer"
            )));
        };
        out.push(SphericalPart {
            label,
            field: Field::polynomial(format!("{label}[{}]", f.label()), component),
        });
    }
    Ok(out)
}

/// Whether `(label_f, label_g)` can be nonzero: the two parts times `x` must
/// restrict to spherical harmonics of the same degree.
pub fn is_structural(f: &PartLabel, g: &PartLabel) -> bool {
    harmonic_degree(f) == harmonic_degree(g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalBlock {
    pub f_part: PartLabel,
    pub g_part: PartLabel,
    pub structural: bool,
    pub value: InnerProductResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalTable {
    pub blocks: Vec<ParsevalBlock>,
    /// Sum over structural blocks.
    pub block_sum: Octonion,
    /// `(f, g)_{S^7}` computed directly on the same samples.
    pub direct: InnerProductResult,
    /// Largest fit residual over the sampled directions (0 for exact splits).
    pub max_fit_residual: f64,
    /// Condition number of the radial system (1 for exact splits).
    pub condition: f64,
    /// `|f|^2_{S^7}` and `|g|^2_{S^7}`, estimated on the same samples.
    pub f_norm_sq: f64,
    pub g_norm_sq: f64,
}

impl ParsevalTable {
    pub fn block(&self, f: PartLabel, g: PartLabel) -> Option<&ParsevalBlock> {
        self.blocks.iter().find(|b| b.f_part == f && b.g_part == g)
    }

    /// Round-off level of a block value: `condition * eps * |f| |g|`.
    pub fn extraction_floor(&self) -> f64 {
        self.condition * f64::EPSILON * (self.f_norm_sq * self.g_norm_sq).sqrt()
    }

    /// Largest `|value|` over blocks outside the admissible structure.
    pub fn max_off_structure(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| !b.structural)
            .map(|b| b.value.value.norm())
            .fold(0.0, f64::max)
    }
}

/// Every block `(X_j f, Y_k g)_{S^7}` for `X, Y` in `{P, Q}` up to the fit's
/// maximum degree, tagged by whether the Parseval structure allows it.
///
/// With the exact strategy both fields must be polynomial and are split by
/// homogeneous degree; otherwise components are extracted per sample.
pub fn parseval_decompose(
    f: &Field,
    g: &Field,
    spec: &RadialFitSpec,
    quad: &QuadratureSpec,
) -> Result<ParsevalTable> {
    if quad.strategy == Strategy::ExactMoments {
        let fp = exact_parts(f)?;
        let gp = exact_parts(g)?;
        let mut blocks = Vec::new();
        let mut sum = Octonion::ZERO;
        for a in &fp {
            for b in &gp {
                let value = inner_sphere(&a.field, &b.field, quad)?;
                let structural = is_structural(&a.label, &b.label);
                if structural {
                    sum += value.value;
                }
                blocks.push(ParsevalBlock {
                    f_part: a.label,
                    g_part: b.label,
                    structural,
                    value,
                });
            }
        }
        let direct = inner_sphere(f, g, quad)?;
        return Ok(ParsevalTable {
            blocks,
            block_sum: sum,
            direct,
            max_fit_residual: 0.0,
            condition: 1.0,
            f_norm_sq: inner_sphere(f, f, quad)?.value.re(),
            g_norm_sq: inner_sphere(g, g, quad)?.value.re(),
        });
    }

    let fit = RadialFit::new(spec)?;
    let labels = fit.unknowns().to_vec();
    let n = labels.len();
    let n_out = n * n + 3;
    let same = f.same_as(g);
    let residuals = std::sync::Mutex::new(0.0f64);
    let results = domain_mean(Domain::Sphere, quad, n_out, |eta, out| {
        let u = eta.as_octonion();
        let ef = fit.extract(f, eta)?;
        let eg = if same { ef.clone() } else { fit.extract(g, eta)? };
        {
            let mut r = residuals.lock().expect("residual lock");
            *r = r.max(ef.residual).max(eg.residual);
        }
        let left: Vec<Octonion> = eg.parts.iter().map(|p| p.value.conj().mul(&u.conj())).collect();
        let right: Vec<Octonion> = ef.parts.iter().map(|p| u.mul(&p.value)).collect();
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = left[j].mul(&right[i]);
            }
        }
        let fv = f.eval(eta)?;
        let gv = if same { fv } else { g.eval(eta)? };
        out[n * n] = gv.conj().mul(&u.conj()).mul(&u.mul(&fv));
        out[n * n + 1] = Octonion::real(fv.norm_sqr());
        out[n * n + 2] = Octonion::real(gv.norm_sqr());
        Ok(())
    })?;
    let mut blocks = Vec::with_capacity(n * n);
    let mut sum = Octonion::ZERO;
    for i in 0..n {
        for j in 0..n {
            let structural = is_structural(&labels[i], &labels[j]);
            let value = results[i * n + j];
            if structural {
                sum += value.value;
            }
            blocks.push(ParsevalBlock {
                f_part: labels[i],
                g_part: labels[j],
                structural,
                value,
            });
        }
    }
    let max_fit_residual = residuals.into_inner().expect("residual lock");
    Ok(ParsevalTable {
        blocks,
        block_sum: sum,
        direct: results[n * n],
        max_fit_residual,
        condition: fit.condition(),
        f_norm_sq: results[n * n + 1].value.re(),
        g_norm_sq: results[n * n + 2].value.re(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSeriesTerm {
    pub degree: usize,
    pub weight: f64,
    /// `|P_k f|^2_{S^7}`.
    pub sphere_norm_sq: InnerProductResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    pub terms: Vec<NormSeriesTerm>,
    /// `sum_k (2k + 8)^-1 |P_k f|^2_{S^7}`.
    pub total: f64,
    pub std_error: f64,
}

/// Bergman norm of `f` from its inner components,
/// `sum_{k <= K} (2k + 8)^-1 |P_k f|^2_{S^7}`.
pub fn bergman_norm_series(f: &Field, spec: &RadialFitSpec, quad: &QuadratureSpec) -> Result<NormSeries> {
    let mut terms = Vec::new();
    if quad.strategy == Strategy::ExactMoments {
        let mut by_degree: BTreeMap<usize, Field> = BTreeMap::new();
        for part in exact_parts(f)? {
            if part.kind() == PartKind::Outer {
                return Err(Error::Domain(format!(
                    "`{}` has an outer component and is not in the Bergman space",
                    f.label()
                )));
            }
            if part.degree() <= spec.max_degree {
                by_degree.insert(part.degree(), part.field);
            }
        }
        for (k, part) in by_degree {
            terms.push(NormSeriesTerm {
                degree: k,
                weight: 1.0 / (2.0 * k as f64 + 8.0),
                sphere_norm_sq: inner_sphere(&part, &part, quad)?,
            });
        }
    } else {
        if spec.mode != FitMode::Inner {
            return Err(Error::Config("norm series needs an inner-mode fit".into()));
        }
        let fit = RadialFit::new(spec)?;
        let n = fit.unknowns().len();
        let results = domain_mean(Domain::Sphere, quad, n, |eta, out| {
            let ext = fit.extract(f, eta)?;
            for (slot, p) in out.iter_mut().zip(&ext.parts) {
                *slot = Octonion::real(p.value.norm_sqr());
            }
            Ok(())
        })?;
        for (k, r) in results.into_iter().enumerate() {
            terms.push(NormSeriesTerm {
                degree: k,
                weight: 1.0 / (2.0 * k as f64 + 8.0),
                sphere_norm_sq: r,
            });
        }
    }
    let total = terms.iter().map(|t| t.weight * t.sphere_norm_sq.value.re()).sum();
    // terms share samples; adding their errors linearly bounds the correlation
    let std_error = terms
        .iter()
        .map(|t| t.weight * t.sphere_norm_sq.std_error_components[0])
        .sum();
    Ok(NormSeries {
        terms,
        total,
        std_error,
    })
}

/// `x1 - x0 e1`, an inner component of degree one.
pub fn linear_example() -> Field {
    Field::polynomial(
        "x1 - x0 e1",
        RadialPoly::coordinate(1).sub(&RadialPoly::coordinate(0).right_mul(&Octonion::basis(1))),
    )
}

/// `conj(x) |x|^-12 (x1 x2 e4 + x0 x2 e5 + x0 x1 e6)`, an outer component of degree two.
pub fn outer_example() -> Field {
    let mono = |i: usize, j: usize| {
        let mut a = [0u8; 8];
        a[i] += 1;
        a[j] += 1;
        a
    };
    let mut q = RadialPoly::zero();
    q.add_term(Octonion::basis(4), 0, mono(1, 2));
    q.add_term(Octonion::basis(5), 0, mono(0, 2));
    q.add_term(Octonion::basis(6), 0, mono(0, 1));
    let g = RadialPoly::identity()
        .conj()
        .mul(&RadialPoly::radial(-12))
        .mul(&q);
    Field::polynomial("conj(x)|x|^-12 (x1x2 e4 + x0x2 e5 + x0x1 e6)", g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{d_at, gradient_norm, DiffScheme};
    use crate::kernels::{cauchy_field, szego_field};

    fn dir() -> Point8 {
        let v = [0.3, -0.2, 0.5, 0.1, -0.4, 0.25, 0.15, -0.35];
        let n = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        Point8(v.map(|x| x / n))
    }

    #[test]
    fn chebyshev_radii_lie_in_interval() {
        let r = chebyshev_radii(11, 0.35, 0.85);
        assert_eq!(r.len(), 11);
        assert!(r.iter().all(|&v| v > 0.35 && v < 0.85));
        assert!(r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn default_fits_are_well_conditioned() {
        for spec in [RadialFitSpec::inner(8), RadialFitSpec::outer(6), RadialFitSpec::laurent(3, 0.6, 1.6)] {
            let fit = RadialFit::new(&spec).unwrap();
            assert!(fit.condition() < MAX_CONDITION, "{:?} cond {}", spec.mode, fit.condition());
        }
    }

    #[test]
    fn ill_conditioned_fit_is_rejected() {
        assert!(matches!(
            RadialFit::new(&RadialFitSpec::outer(8)),
            Err(Error::IllConditioned { .. })
        ));
        let short = RadialFitSpec {
            max_degree: 8,
            radii: vec![0.5; 3],
            mode: FitMode::Inner,
        };
        assert!(matches!(RadialFit::new(&short), Err(Error::Config(_))));
    }

    #[test]
    fn linear_example_is_its_own_first_part() {
        let f = linear_example();
        let ext = extract_parts(&f, &RadialFitSpec::inner(4), &dir()).unwrap();
        let fw = f.eval(&dir()).unwrap();
        for p in &ext.parts {
            let expected = if p.label.degree == 1 { fw } else { Octonion::ZERO };
            assert!((p.value - expected).norm() <= 1e-10, "{}: {}", p.label, p.value);
        }
    }

    #[test]
    fn constant_is_degree_zero() {
        let c = Octonion::new([1.0, 0.0, 2.0, 0.0, -1.0, 0.0, 0.0, 0.5]);
        let ext = extract_parts(&Field::constant(c), &RadialFitSpec::inner(4), &dir()).unwrap();
        for p in &ext.parts {
            let expected = if p.label.degree == 0 { c } else { Octonion::ZERO };
            assert!((p.value - expected).norm() <= 1e-10);
        }
    }

    #[test]
    fn outer_example_is_its_own_q2() {
        let g = outer_example();
        let ext = extract_parts(&g, &RadialFitSpec::outer(4), &dir()).unwrap();
        let gw = g.eval(&dir()).unwrap();
        for p in &ext.parts {
            let expected = if p.label.degree == 2 { gw } else { Octonion::ZERO };
            assert!((p.value - expected).norm() <= 1e-10, "{}: {}", p.label, p.value);
        }
    }

    #[test]
    fn examples_are_left_analytic() {
        let x = Point8([0.3, -0.2, 0.5, 0.1, -0.4, 0.25, 0.15, -0.35]);
        let s = DiffScheme::default();
        assert!(d_at(&linear_example(), &x, &s).unwrap().norm() < 1e-9);
        assert!(d_at(&outer_example(), &x, &s).unwrap().norm() < 1e-7);
    }

    #[test]
    fn exact_parts_split_by_degree() {
        let h = linear_example().add(&outer_example());
        let parts = exact_parts(&h).unwrap();
        let labels: Vec<String> = parts.iter().map(|p| p.label.to_string()).collect();
        assert_eq!(labels, vec!["Q2", "P1"]);
        let bad = Field::polynomial("|x|^-3", RadialPoly::radial(-3));
        assert!(exact_parts(&bad).is_err());
    }

    #[test]
    fn multiplier_operators_on_simple_fields() {
        let spec = RadialFitSpec::inner(8);
        let x = Point8([0.2, -0.1, 0.3, 0.1, -0.2, 0.15, 0.05, -0.25]);
        let c = Octonion::new([1.0, 0.5, 0.0, 0.0, 0.0, 0.0, -2.0, 0.0]);
        let tc = apply_t(&Field::constant(c), &spec).unwrap();
        assert!((tc.eval(&x).unwrap() - c * 8.0).norm() < 1e-7);
        let f = linear_example();
        let tf = apply_t(&f, &spec).unwrap();
        assert!((tf.eval(&x).unwrap() - f.eval(&x).unwrap() * 10.0).norm() < 1e-7);
        let sf = apply_sqrt_t(&f, &spec).unwrap();
        let twice = apply_sqrt_t(&sf, &spec).unwrap();
        assert!((twice.eval(&x).unwrap() - tf.eval(&x).unwrap()).norm() < 1e-6);
        assert!(apply_t(&f, &RadialFitSpec::outer(3)).is_err());
    }

    #[test]
    fn extracted_parts_are_homogeneous() {
        let s = szego_field(Octonion::new([0.2, 0.3, 0.0, -0.2, 0.0, 0.2, 0.0, 0.0]));
        let spec = RadialFitSpec::inner(8);
        for k in [0usize, 1, 2, 3] {
            let part = spherical_part(&s, &spec, PartLabel { kind: PartKind::Inner, degree: k }).unwrap();
            let at_w = part.field.eval(&dir()).unwrap();
            for r in [0.23f64, 0.61, 0.97] {
                let expected = at_w * r.powi(k as i32);
                let at_r = part.field.eval(&dir().scaled(r)).unwrap();
                assert!((at_r - expected).norm() <= 1e-8 * expected.norm(), "P{k} at r = {r}");
            }
        }
    }

    #[test]
    fn extracted_parts_are_analytic() {
        let s = szego_field(Octonion::new([0.03, 0.04, 0.0, -0.03, 0.0, 0.02, 0.0, 0.0]));
        let spec = RadialFitSpec::inner(8);
        let x = Point8([0.3, -0.2, 0.5, 0.1, -0.4, 0.25, 0.15, -0.35]);
        let scheme = DiffScheme::richardson(0.1);
        // extraction error scales with the parent field, not with the part
        let scale = gradient_norm(&s, &x, &scheme).unwrap();
        for k in [1usize, 2, 3] {
            let part = spherical_part(&s, &spec, PartLabel { kind: PartKind::Inner, degree: k }).unwrap();
            let d = d_at(&part.field, &x, &scheme).unwrap();
            assert!(d.norm() < 1e-5 * scale, "P{k}: {} vs {scale}", d.norm());
        }
    }

    #[test]
    fn cauchy_kernel_is_pure_q0() {
        let ext = extract_parts(&cauchy_field(), &RadialFitSpec::outer(4), &dir()).unwrap();
        let w = dir().as_octonion();
        for p in &ext.parts {
            let expected = if p.label.degree == 0 { w.conj() } else { Octonion::ZERO };
            assert!((p.value - expected).norm() < 1e-9, "{}", p.label);
        }
    }

    #[test]
    fn counterexample_exact_block() {
        let table = parseval_decompose(
            &linear_example(),
            &outer_example(),
            &RadialFitSpec::laurent(3, 0.6, 1.6),
            &QuadratureSpec::exact(),
        )
        .unwrap();
        let p1 = PartLabel { kind: PartKind::Inner, degree: 1 };
        let q2 = PartLabel { kind: PartKind::Outer, degree: 2 };
        let block = table.block(p1, q2).unwrap();
        assert!(block.structural);
        assert!((block.value.value - Octonion::basis(6) * (-1.0 / 40.0)).norm() <= 1e-15);
        assert!((table.direct.value - block.value.value).norm() <= 1e-15);
    }

    #[test]
    fn norm_series_exact_values() {
        let spec = RadialFitSpec::inner(8);
        let one = bergman_norm_series(&Field::constant(Octonion::ONE), &spec, &QuadratureSpec::exact()).unwrap();
        assert!((one.total - 0.125).abs() < 1e-15);
        let lin = bergman_norm_series(&linear_example(), &spec, &QuadratureSpec::exact()).unwrap();
        assert!((lin.total - 1.0 / 40.0).abs() < 1e-15);
        assert!(bergman_norm_series(&outer_example(), &spec, &QuadratureSpec::exact()).is_err());
    }

    #[test]
    fn structural_pairs() {
        let p = |k| PartLabel { kind: PartKind::Inner, degree: k };
        let q = |k| PartLabel { kind: PartKind::Outer, degree: k };
        assert!(is_structural(&p(2), &p(2)));
        assert!(is_structural(&q(2), &q(2)));
        assert!(is_structural(&p(1), &q(2)));
        assert!(is_structural(&q(3), &p(2)));
        assert!(!is_structural(&p(1), &p(3)));
        assert!(!is_structural(&p(1), &q(1)));
    }
}
