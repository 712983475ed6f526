//! Octonion-valued fields on R^8 and the differential operators acting on them.
//!
//! Differentiation is numerical: central differences, optionally improved by
//! one Richardson step. Every field declares the points it cannot be
//! evaluated at; the operators refuse to place a stencil within `2h` of them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::poly::RadialPoly;

/// A point of R^8, identified with the octonion `sum x_i e_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point8(pub [f64; 8]);

impl Point8 {
    pub const ORIGIN: Point8 = Point8([0.0; 8]);

    pub fn as_octonion(&self) -> Octonion {
        Octonion::new(self.0)
    }

    pub fn radius(&self) -> f64 {
        self.as_octonion().norm()
    }

    pub fn scaled(&self, s: f64) -> Point8 {
        Point8(self.0.map(|v| v * s))
    }

    /// `x / |x|^2`, the reflection in the unit sphere (no conjugation).
    pub fn reflected(&self) -> Point8 {
        let r2: f64 = self.0.iter().map(|v| v * v).sum();
        self.scaled(1.0 / r2)
    }

    /// Octonion inverse `conj(x) / |x|^2` as a point.
    pub fn inverted(&self) -> Point8 {
        let r2: f64 = self.0.iter().map(|v| v * v).sum();
        Point8::from(self.as_octonion().conj() / r2)
    }

    pub fn distance(&self, other: &Point8) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    fn shifted(&self, axis: usize, delta: f64) -> Point8 {
        let mut p = *self;
        p.0[axis] += delta;
        p
    }
}

impl From<Octonion> for Point8 {
    fn from(x: Octonion) -> Self {
        Point8(x.into_array())
    }
}

impl From<[f64; 8]> for Point8 {
    fn from(c: [f64; 8]) -> Self {
        Point8(c)
    }
}

/// Declared poles of a field: a finite point list with an exclusion radius.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularSet {
    points: Vec<Point8>,
    exclusion: f64,
}

impl SingularSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn points(points: impl IntoIterator<Item = Point8>) -> Self {
        SingularSet {
            points: points.into_iter().collect(),
            exclusion: 0.0,
        }
    }

    pub fn origin() -> Self {
        Self::points([Point8::ORIGIN])
    }

    pub fn with_exclusion(mut self, radius: f64) -> Self {
        self.exclusion = radius;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_slice(&self) -> &[Point8] {
        &self.points
    }

    pub fn exclusion(&self) -> f64 {
        self.exclusion
    }

    /// Distance from `x` to the nearest declared pole (infinite when empty).
    pub fn distance(&self, x: &Point8) -> f64 {
        self.points
            .iter()
            .map(|p| p.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn union(&self, other: &SingularSet) -> SingularSet {
        let mut points = self.points.clone();
        for p in &other.points {
            if !points.contains(p) {
                points.push(*p);
            }
        }
        SingularSet {
            points,
            exclusion: self.exclusion.max(other.exclusion),
        }
    }

    /// Image under `map`, dropping poles sent to infinity.
    pub fn mapped(&self, map: impl Fn(&Point8) -> Option<Point8>) -> SingularSet {
        SingularSet {
            points: self.points.iter().filter_map(map).collect(),
            exclusion: self.exclusion,
        }
    }
}

impl fmt::Display for SingularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", p.as_octonion())?;
        }
        write!(f, "}}")
    }
}

type Evaluator = dyn Fn(&Point8) -> Result<Octonion> + Send + Sync;

/// An octonion-valued map on R^8 minus its declared singular set.
///
/// Combinators record their bracketing: `f.mul(&g)` evaluates `f(x) * g(x)`
/// and nothing else.
#[derive(Clone)]
pub struct Field {
    eval: Arc<Evaluator>,
    singular: SingularSet,
    label: Arc<str>,
    poly: Option<Arc<RadialPoly>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("label", &self.label)
            .field("singular", &self.singular)
            .field("polynomial", &self.poly.is_some())
            .finish()
    }
}

impl Field {
    pub fn new<F>(label: impl Into<String>, singular: SingularSet, eval: F) -> Field
    where
        F: Fn(&Point8) -> Result<Octonion> + Send + Sync + 'static,
    {
        Field {
            eval: Arc::new(eval),
            singular,
            label: label.into().into(),
            poly: None,
        }
    }

    /// Field from an infallible octonion map.
    pub fn from_octonion_fn<F>(label: impl Into<String>, singular: SingularSet, f: F) -> Field
    where
        F: Fn(Octonion) -> Octonion + Send + Sync + 'static,
    {
        Field::new(label, singular, move |x| Ok(f(x.as_octonion())))
    }

    pub fn polynomial(label: impl Into<String>, poly: RadialPoly) -> Field {
        let singular = if poly.singular_at_origin() {
            SingularSet::origin()
        } else {
            SingularSet::empty()
        };
        let p = Arc::new(poly);
        let q = Arc::clone(&p);
        Field {
            eval: Arc::new(move |x| Ok(q.eval(&x.0))),
            singular,
            label: label.into().into(),
            poly: Some(p),
        }
    }

    pub fn constant(c: Octonion) -> Field {
        Field::polynomial(format!("{c}"), RadialPoly::constant(c))
    }

    /// `x -> x`.
    pub fn identity() -> Field {
        Field::polynomial("x", RadialPoly::identity())
    }

    /// Whether both handles share one evaluator.
    pub fn same_as(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.eval, &other.eval)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn singular_set(&self) -> &SingularSet {
        &self.singular
    }

    pub fn as_polynomial(&self) -> Option<&RadialPoly> {
        self.poly.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Field {
        self.label = label.into().into();
        self
    }

    pub fn with_singular_set(mut self, singular: SingularSet) -> Field {
        self.singular = singular;
        self
    }

    pub fn eval(&self, x: &Point8) -> Result<Octonion> {
        if !self.singular.is_empty() {
            let d = self.singular.distance(x);
            if d <= self.singular.exclusion {
                return Err(Error::Singularity {
                    what: format!("`{}` evaluated at {}", self.label, x.as_octonion()),
                    set: self.singular.to_string(),
                    distance: d,
                });
            }
        }
        (self.eval)(x)
    }

    pub fn eval_octonion(&self, x: Octonion) -> Result<Octonion> {
        self.eval(&Point8::from(x))
    }

    fn combine<F>(&self, other: &Field, label: String, poly: Option<RadialPoly>, op: F) -> Field
    where
        F: Fn(Octonion, Octonion) -> Octonion + Send + Sync + 'static,
    {
        let (f, g) = (self.clone(), other.clone());
        Field {
            eval: Arc::new(move |x| Ok(op(f.eval(x)?, g.eval(x)?))),
            singular: self.singular.union(&other.singular),
            label: label.into(),
            poly: poly.map(Arc::new),
        }
    }

    fn map<F>(&self, label: String, poly: Option<RadialPoly>, op: F) -> Field
    where
        F: Fn(Octonion) -> Octonion + Send + Sync + 'static,
    {
        let f = self.clone();
        Field {
            eval: Arc::new(move |x| Ok(op(f.eval(x)?))),
            singular: self.singular.clone(),
            label: label.into(),
            poly: poly.map(Arc::new),
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        let poly = both(self, other, |p, q| p.add(q));
        self.combine(other, format!("({} + {})", self.label, other.label), poly, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Field {
        let poly = both(self, other, |p, q| p.sub(q));
        self.combine(other, format!("({} - {})", self.label, other.label), poly, |a, b| a - b)
    }

    /// Pointwise `f(x) * g(x)`.
    pub fn mul(&self, other: &Field) -> Field {
        let poly = both(self, other, |p, q| p.mul(q));
        self.combine(other, format!("({} * {})", self.label, other.label), poly, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Field {
        let poly = self.poly.as_ref().map(|p| p.scale(s));
        self.map(format!("{s} * {}", self.label), poly, move |a| a * s)
    }

    /// `c * f(x)`.
    pub fn left_mul(&self, c: Octonion) -> Field {
        let poly = self.poly.as_ref().map(|p| p.left_mul(&c));
        self.map(format!("({c}) * {}", self.label), poly, move |a| c * a)
    }

    /// `f(x) * c`.
    pub fn right_mul(&self, c: Octonion) -> Field {
        let poly = self.poly.as_ref().map(|p| p.right_mul(&c));
        self.map(format!("{} * ({c})", self.label), poly, move |a| a * c)
    }

    pub fn conj(&self) -> Field {
        let poly = self.poly.as_ref().map(|p| p.conj());
        self.map(format!("conj({})", self.label), poly, |a| a.conj())
    }

    /// `f_r(x) = f(r x)`.
    pub fn dilate(&self, r: f64) -> Field {
        let f = self.clone();
        Field {
            eval: Arc::new(move |x| f.eval(&x.scaled(r))),
            singular: self.singular.mapped(|p| Some(p.scaled(1.0 / r))),
            label: format!("{}_{r}", self.label).into(),
            poly: None,
        }
    }
}

fn both(f: &Field, g: &Field, op: impl Fn(&RadialPoly, &RadialPoly) -> RadialPoly) -> Option<RadialPoly> {
    match (&f.poly, &g.poly) {
        (Some(p), Some(q)) => Some(op(p, q)),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffMode {
    /// Second-order central differences.
    Central,
    /// Central differences at `h` and `h/2`, combined to cancel the `h^2` term.
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffScheme {
    pub h: f64,
    pub mode: DiffMode,
    /// Use `h * (1 + |x|)` as the step at `x`.
    pub relative_scaling: bool,
}

impl Default for DiffScheme {
    fn default() -> Self {
        DiffScheme {
            h: 1e-4,
            mode: DiffMode::Richardson,
            relative_scaling: true,
        }
    }
}

impl DiffScheme {
    pub fn central(h: f64) -> Self {
        DiffScheme {
            h,
            mode: DiffMode::Central,
            relative_scaling: false,
        }
    }

    pub fn richardson(h: f64) -> Self {
        DiffScheme {
            h,
            mode: DiffMode::Richardson,
            relative_scaling: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Config(format!("step h must be positive, got {}", self.h)));
        }
        Ok(())
    }

    /// Step used at `x`.
    pub fn step_at(&self, x: &Point8) -> f64 {
        if self.relative_scaling {
            self.h * (1.0 + x.radius())
        } else {
            self.h
        }
    }

    fn check_clearance(&self, f: &Field, x: &Point8, h: f64) -> Result<()> {
        let d = f.singular.distance(x);
        if d < 2.0 * h || d <= f.singular.exclusion + h {
            return Err(Error::Singularity {
                what: format!(
                    "finite-difference stencil for `{}` at {} (h = {h:e})",
                    f.label,
                    x.as_octonion()
                ),
                set: f.singular.to_string(),
                distance: d,
            });
        }
        Ok(())
    }

    /// All eight partial derivatives of `f` at `x`.
    pub fn partials(&self, f: &Field, x: &Point8) -> Result<[Octonion; 8]> {
        self.validate()?;
        let h = self.step_at(x);
        self.check_clearance(f, x, h)?;
        let central = |axis: usize, h: f64| -> Result<Octonion> {
            let fp = f.eval(&x.shifted(axis, h))?;
            let fm = f.eval(&x.shifted(axis, -h))?;
            Ok((fp - fm) / (2.0 * h))
        };
        let mut out = [Octonion::ZERO; 8];
        for (axis, slot) in out.iter_mut().enumerate() {
            *slot = match self.mode {
                DiffMode::Central => central(axis, h)?,
                DiffMode::Richardson => {
                    let coarse = central(axis, h)?;
                    let fine = central(axis, 0.5 * h)?;
                    (fine * 4.0 - coarse) / 3.0
                }
            };
        }
        Ok(out)
    }

    /// Componentwise Laplacian of `f` at `x` by second central differences.
    pub fn laplacian_at(&self, f: &Field, x: &Point8) -> Result<Octonion> {
        self.validate()?;
        let h = self.step_at(x);
        self.check_clearance(f, x, h)?;
        let center = f.eval(x)?;
        let second = |h: f64| -> Result<Octonion> {
            let mut acc = Octonion::ZERO;
            for axis in 0..8 {
                let fp = f.eval(&x.shifted(axis, h))?;
                let fm = f.eval(&x.shifted(axis, -h))?;
                acc += fp + fm - center * 2.0;
            }
            Ok(acc / (h * h))
        };
        match self.mode {
            DiffMode::Central => second(h),
            DiffMode::Richardson => {
                let coarse = second(h)?;
                let fine = second(0.5 * h)?;
                Ok((fine * 4.0 - coarse) / 3.0)
            }
        }
    }
}

/// `sum_i e_i * d_i f(x)`.
pub fn d_at(f: &Field, x: &Point8, scheme: &DiffScheme) -> Result<Octonion> {
    let p = scheme.partials(f, x)?;
    Ok(p.iter()
        .enumerate()
        .fold(Octonion::ZERO, |acc, (i, d)| acc + Octonion::basis(i) * *d))
}

/// `sum_i conj(e_i) * d_i f(x)`.
pub fn dbar_at(f: &Field, x: &Point8, scheme: &DiffScheme) -> Result<Octonion> {
    let p = scheme.partials(f, x)?;
    Ok(p.iter()
        .enumerate()
        .fold(Octonion::ZERO, |acc, (i, d)| acc + Octonion::basis(i).conj() * *d))
}

/// Frobenius norm of the Jacobian, `sqrt(sum_i |d_i f(x)|^2)`.
pub fn gradient_norm(f: &Field, x: &Point8, scheme: &DiffScheme) -> Result<f64> {
    let p = scheme.partials(f, x)?;
    Ok(p.iter().map(Octonion::norm_sqr).sum::<f64>().sqrt())
}

/// The generalized Cauchy-Riemann operator `D = sum e_i d/dx_i`, applied on the left.
pub fn apply_d(f: &Field, scheme: DiffScheme) -> Field {
    let g = f.clone();
    Field::new(format!("D[{}]", f.label), f.singular.clone(), move |x| {
        d_at(&g, x, &scheme)
    })
}

/// The conjugate operator `Dbar = sum conj(e_i) d/dx_i`.
pub fn apply_dbar(f: &Field, scheme: DiffScheme) -> Field {
    let g = f.clone();
    Field::new(format!("Dbar[{}]", f.label), f.singular.clone(), move |x| {
        dbar_at(&g, x, &scheme)
    })
}

pub fn laplacian(f: &Field, scheme: DiffScheme) -> Field {
    let g = f.clone();
    Field::new(format!("Lap[{}]", f.label), f.singular.clone(), move |x| {
        scheme.laplacian_at(&g, x)
    })
}

/// Kelvin inversion `x -> E(x, 0) * f(x^{-1})` with `E(x, 0) = conj(x)/|x|^8`.
pub fn kelvin(f: &Field) -> Field {
    let g = f.clone();
    let singular = SingularSet::origin().union(&f.singular.mapped(|p| {
        (p.radius() > 0.0).then(|| p.inverted())
    }));
    let poly = f.poly.as_ref().map(|p| kelvin_poly(p));
    Field {
        eval: Arc::new(move |x| {
            let xo = x.as_octonion();
            let r2 = xo.norm_sqr();
            if r2 == 0.0 {
                return Err(Error::Singularity {
                    what: "Kelvin inversion evaluated at the origin".into(),
                    set: "{0}".into(),
                    distance: 0.0,
                });
            }
            let cauchy = xo.conj() / (r2 * r2 * r2 * r2);
            Ok(cauchy * g.eval(&x.inverted())?)
        }),
        singular,
        label: format!("K[{}]", f.label).into(),
        poly: poly.map(Arc::new),
    }
}

fn kelvin_poly(p: &RadialPoly) -> RadialPoly {
    // x -> conj(x)/|x|^2 sends x_0 to x_0/|x|^2 and x_i to -x_i/|x|^2.
    let mut inverted = RadialPoly::zero();
    for (power, alpha, c) in p.terms() {
        let odd: u32 = alpha[1..].iter().map(|&a| u32::from(a)).sum();
        let deg: i32 = alpha.iter().map(|&a| i32::from(a)).sum();
        let sign = if odd % 2 == 1 { -1.0 } else { 1.0 };
        inverted.add_term(c.scale(sign), -power - 2 * deg, *alpha);
    }
    let prefactor = RadialPoly::identity().conj().mul(&RadialPoly::radial(-8));
    prefactor.mul(&inverted)
}

/// The adjoint operator `(A f)(x) = Dbar( |x|^{-6} conj(f(x/|x|^2)) )`.
pub fn adjoint_a(f: &Field, scheme: DiffScheme) -> Field {
    let g = f.clone();
    let singular = SingularSet::origin().union(&f.singular.mapped(|p| {
        (p.radius() > 0.0).then(|| p.reflected())
    }));
    let inner = Field::new(format!("|x|^-6 conj({})(x/|x|^2)", f.label), singular, move |x| {
        let r2: f64 = x.0.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            return Err(Error::Singularity {
                what: "adjoint map evaluated at the origin".into(),
                set: "{0}".into(),
                distance: 0.0,
            });
        }
        Ok(g.eval(&x.reflected())?.conj() / (r2 * r2 * r2))
    });
    apply_dbar(&inner, scheme).with_label(format!("A[{}]", f.label))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    fn p(c: [f64; 8]) -> Point8 {
        Point8(c)
    }

    const X: [f64; 8] = [0.3, -0.2, 0.5, 0.1, -0.4, 0.25, 0.15, -0.35];

    fn sample_f() -> Field {
        // x1 - x0 e1
        Field::polynomial(
            "x1 - x0 e1",
            RadialPoly::coordinate(1).sub(&RadialPoly::coordinate(0).right_mul(&e(1))),
        )
    }

    #[test]
    fn d_of_identity_is_minus_six() {
        let v = d_at(&Field::identity(), &p(X), &DiffScheme::default()).unwrap();
        assert!((v - Octonion::real(-6.0)).norm() < 1e-9);
    }

    #[test]
    fn dbar_of_identity_is_eight() {
        let v = dbar_at(&Field::identity(), &p(X), &DiffScheme::default()).unwrap();
        assert!((v - Octonion::real(8.0)).norm() < 1e-9);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let c = Field::constant(e(0) + e(5) * 3.0);
        assert!(dbar_at(&c, &p(X), &DiffScheme::default()).unwrap().norm() < 1e-12);
        assert!(d_at(&c, &p(X), &DiffScheme::default()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn linear_example_is_left_analytic() {
        let v = d_at(&sample_f(), &p(X), &DiffScheme::default()).unwrap();
        assert!(v.norm() < 1e-10);
    }

    #[test]
    fn laplacian_examples() {
        let scheme = DiffScheme::richardson(1e-3);
        let r2 = Field::polynomial("|x|^2", RadialPoly::identity().conj().mul(&RadialPoly::identity()));
        let v = scheme.laplacian_at(&r2, &p(X)).unwrap();
        assert!((v - Octonion::real(16.0)).norm() < 1e-7);

        let harmonic = Field::from_octonion_fn("x0^2 - x1^2", SingularSet::empty(), |x| {
            Octonion::real(x[0] * x[0] - x[1] * x[1])
        });
        assert!(scheme.laplacian_at(&harmonic, &p(X)).unwrap().norm() < 1e-7);
    }

    #[test]
    fn dbar_after_d_is_laplacian() {
        let r2 = Field::polynomial("|x|^2", RadialPoly::identity().conj().mul(&RadialPoly::identity()));
        let scheme = DiffScheme::richardson(1e-3);
        let dd = apply_dbar(&apply_d(&r2, scheme), scheme);
        let v = dd.eval(&p(X)).unwrap();
        assert!((v - Octonion::real(16.0)).norm() < 1e-6);
    }

    #[test]
    fn stencil_refuses_to_straddle_a_pole() {
        let f = Field::from_octonion_fn("1/x", SingularSet::origin(), |x| x.inverse().unwrap());
        let near = p([1e-5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let err = d_at(&f, &near, &DiffScheme::richardson(1e-4)).unwrap_err();
        assert!(matches!(err, Error::Singularity { .. }));
        assert!(err.to_string().contains("{0}"));
        assert!(f.eval(&Point8::ORIGIN).is_err());
    }

    #[test]
    fn zero_step_is_rejected() {
        let err = d_at(&Field::identity(), &p(X), &DiffScheme::central(0.0)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn kelvin_of_one_is_cauchy_kernel() {
        let k = kelvin(&Field::constant(Octonion::ONE));
        let x = Octonion::new(X);
        let expected = x.conj() / x.norm_sqr().powi(4);
        let got = k.eval(&p(X)).unwrap();
        assert!((got - expected).norm() <= 1e-14 * expected.norm());
        assert!(k.eval(&Point8::ORIGIN).is_err());
        // the polynomial shadow agrees with the evaluator
        let shadow = k.as_polynomial().unwrap().eval(&X);
        assert!((shadow - expected).norm() <= 1e-13 * expected.norm());
    }

    #[test]
    fn kelvin_twice_matches_direct_composition() {
        let f = sample_f();
        let kk = kelvin(&kelvin(&f));
        let x = Octonion::new(X);
        let xinv = x.inverse().unwrap();
        let cauchy = |y: Octonion| y.conj() / y.norm_sqr().powi(4);
        let inner = cauchy(xinv) * f.eval_octonion(xinv.inverse().unwrap()).unwrap();
        let direct = cauchy(x) * inner;
        assert!((kk.eval(&p(X)).unwrap() - direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn kelvin_polynomial_shadow_matches_evaluator() {
        let f = sample_f();
        let k = kelvin(&f);
        let got = k.eval(&p(X)).unwrap();
        let shadow = k.as_polynomial().unwrap().eval(&X);
        assert!((got - shadow).norm() <= 1e-13 * got.norm());
    }

    #[test]
    fn adjoint_of_one_is_radial_gradient() {
        let a = adjoint_a(&Field::constant(Octonion::ONE), DiffScheme::default());
        let x = Octonion::new(X);
        let expected = x.conj() * (-6.0 / x.norm_sqr().powi(4));
        let got = a.eval(&p(X)).unwrap();
        assert!((got - expected).norm() <= 1e-8 * expected.norm());
    }

    #[test]
    fn adjoint_of_identity() {
        // f(x) = x: |x|^-6 conj(x/|x|^2) = conj(x)|x|^-8 = E(x), which is left analytic
        // but Dbar E is not zero; compare with a direct finite-difference route.
        let a = adjoint_a(&Field::identity(), DiffScheme::default());
        let e_field = Field::from_octonion_fn("E", SingularSet::origin(), |x| {
            x.conj() / x.norm_sqr().powi(4)
        });
        let direct = dbar_at(&e_field, &p(X), &DiffScheme::default()).unwrap();
        let got = a.eval(&p(X)).unwrap();
        assert!((got - direct).norm() <= 1e-8 * direct.norm());
    }

    #[test]
    fn combinators_respect_bracketing() {
        let f = Field::constant(e(1));
        let g = Field::constant(e(2));
        let h = Field::constant(e(4));
        let left = f.mul(&g).mul(&h).eval(&p(X)).unwrap();
        let right = f.mul(&g.mul(&h)).eval(&p(X)).unwrap();
        assert_eq!(left, e(7));
        assert_eq!(right, -e(7));
        assert_eq!(f.left_mul(e(2)).eval(&p(X)).unwrap(), -e(3));
        assert_eq!(f.right_mul(e(2)).eval(&p(X)).unwrap(), e(3));
    }

    #[test]
    fn dilation_scales_argument() {
        let f = Field::identity().dilate(0.5);
        assert_eq!(f.eval(&p([2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap(), e(0));
    }
}
