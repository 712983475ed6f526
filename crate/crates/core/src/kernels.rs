//! Closed-form Cauchy, Szego and Bergman kernels of the unit ball in R^8.
//!
//! All kernels are written with the bracketing of their defining formulas.
//! They are pure functions of `(x, a)` and allocate nothing.

use serde::{Deserialize, Serialize};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::fields::{dbar_at, DiffScheme, Field, Point8, SingularSet};

/// The reproducing point and auxiliary parameters shared by the kernels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub a: Octonion,
    /// Radius of the dilated Szego kernel; `1` gives the ordinary one.
    pub r: f64,
    /// Algebra dimension for the unified formula, 2 or 8.
    pub m: u32,
}

impl KernelParams {
    pub fn new(a: Octonion) -> Self {
        KernelParams { a, r: 1.0, m: 8 }
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_dimension(mut self, m: u32) -> Self {
        self.m = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.norm() < 1.0) {
            return Err(Error::Domain(format!(
                "reproducing point must lie in the open unit ball, |a| = {}",
                self.a.norm()
            )));
        }
        if !(self.r > 0.0 && self.r <= 1.0) {
            return Err(Error::Domain(format!("radius r must lie in (0, 1], got {}", self.r)));
        }
        check_dimension(self.m)?;
        Ok(())
    }
}

fn check_dimension(m: u32) -> Result<()> {
    match m {
        2 | 8 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

fn pole(what: &str, set: String) -> Error {
    Error::Singularity {
        what: what.to_string(),
        set,
        distance: 0.0,
    }
}

/// `E(x) = conj(x) / |x|^8`.
pub fn cauchy_e(x: Octonion) -> Result<Octonion> {
    let n2 = x.norm_sqr();
    if n2 == 0.0 {
        return Err(pole("Cauchy kernel at x = 0", "{0}".into()));
    }
    Ok(x.conj() / (n2 * n2 * n2 * n2))
}

/// `E(x, a) = (conj(x) - conj(a)) / |x - a|^8`.
pub fn cauchy_e2(x: Octonion, a: Octonion) -> Result<Octonion> {
    let d = x - a;
    let n2 = d.norm_sqr();
    if n2 == 0.0 {
        return Err(pole("Cauchy kernel at x = a", format!("{{{a}}}")));
    }
    Ok(d.conj() / (n2 * n2 * n2 * n2))
}

/// `1 - conj(x) a`
#[inline]
fn one_minus_xbar_a(x: &Octonion, a: &Octonion, r: f64) -> Octonion {
    Octonion::real(r) - x.conj().mul(a)
}

/// Szego kernel `S(x, a) = (1 - conj(x) a) / |1 - conj(x) a|^8`.
pub fn szego_s(x: Octonion, p: &KernelParams) -> Result<Octonion> {
    szego_r_value(x, p.a, 1.0)
}

/// Dilated Szego kernel `S^r(x, a) = (r - conj(x) a) / |r - conj(x) a|^8`.
pub fn szego_sr(x: Octonion, p: &KernelParams) -> Result<Octonion> {
    if !(p.r > 0.0) {
        return Err(Error::Domain(format!("radius r must be positive, got {}", p.r)));
    }
    szego_r_value(x, p.a, p.r)
}

fn szego_r_value(x: Octonion, a: Octonion, r: f64) -> Result<Octonion> {
    let w = one_minus_xbar_a(&x, &a, r);
    let n2 = w.norm_sqr();
    if n2 == 0.0 {
        return Err(pole("Szego kernel where conj(x) a = r", format!("{{{}}}", szego_pole(a, r).as_octonion())));
    }
    Ok(w / (n2 * n2 * n2 * n2))
}

/// Bergman kernel
/// `B(x, a) = [(6(1 - |a|^2|x|^2) + 2(1 - conj(x) a)) (1 - conj(x) a)] / |1 - conj(x) a|^10`.
///
/// The prefactor is formed as one octonion and multiplied on the left.
pub fn bergman_b(x: Octonion, p: &KernelParams) -> Result<Octonion> {
    bergman_value(x, p.a)
}

fn bergman_value(x: Octonion, a: Octonion) -> Result<Octonion> {
    let w = one_minus_xbar_a(&x, &a, 1.0);
    let n2 = w.norm_sqr();
    if n2 == 0.0 {
        return Err(pole("Bergman kernel where conj(x) a = 1", format!("{{{}}}", szego_pole(a, 1.0).as_octonion())));
    }
    let prefactor = Octonion::real(6.0 * (1.0 - a.norm_sqr() * x.norm_sqr())) + w * 2.0;
    Ok(prefactor.mul(&w) / (n2 * n2 * n2 * n2 * n2))
}

/// The Bergman prefactor and `1 - conj(x) a`, exposed so the bracketing of
/// their product can be inspected.
pub fn bergman_factors(x: Octonion, a: Octonion) -> (Octonion, Octonion) {
    let w = one_minus_xbar_a(&x, &a, 1.0);
    let prefactor = Octonion::real(6.0 * (1.0 - a.norm_sqr() * x.norm_sqr())) + w * 2.0;
    (prefactor, w)
}

/// Integrand factor of the dimension-unified reproducing formula,
/// `((m-2)(1 - |a|^2|x|^2) + 2(1 - conj(a) x)) (conj(x) - |x|^2 conj(a)) / |1 - conj(x) a|^(m+2)`.
///
/// For `m = 2`, `x` and `a` must lie in the complex line `span{e0, e1}`.
pub fn unified_kernel(x: Octonion, a: Octonion, m: u32) -> Result<Octonion> {
    check_dimension(m)?;
    if m == 2 && !(in_complex_line(&x) && in_complex_line(&a)) {
        return Err(Error::Domain(
            "m = 2 requires x and a in span{e0, e1}".to_string(),
        ));
    }
    let w = one_minus_xbar_a(&x, &a, 1.0);
    let n2 = w.norm_sqr();
    if n2 == 0.0 {
        return Err(pole("unified kernel where conj(x) a = 1", format!("{{{}}}", szego_pole(a, 1.0).as_octonion())));
    }
    let mf = f64::from(m);
    let prefactor = Octonion::real((mf - 2.0) * (1.0 - a.norm_sqr() * x.norm_sqr()))
        + (Octonion::ONE - a.conj().mul(&x)) * 2.0;
    let tail = x.conj() - a.conj() * x.norm_sqr();
    Ok(prefactor.mul(&tail) / n2.powf(0.5 * (mf + 2.0)))
}

pub(crate) fn in_complex_line(x: &Octonion) -> bool {
    x.coeffs()[2..].iter().all(|&v| v == 0.0)
}

/// Both sides of `conj(B(x, a)) conj(x) = Dbar_a[(1 - |a|^2|x|^2) / |1 - a conj(x)|^8]`.
///
/// The left side is the closed form; the right side differentiates the real
/// scalar field in the `a` variable numerically.
pub fn dbar_identity(x: Octonion, a: Octonion, scheme: &DiffScheme) -> Result<(Octonion, Octonion)> {
    if x.norm_sqr() == 0.0 {
        return Err(Error::Domain("identity requires x != 0".into()));
    }
    if !(x.norm() < 1.0 && a.norm() < 1.0) {
        return Err(Error::Domain("identity requires |x| < 1 and |a| < 1".into()));
    }
    let lhs = bergman_value(x, a)?.conj().mul(&x.conj());
    let phi = dbar_identity_potential(x);
    let rhs = dbar_at(&phi, &Point8::from(a), scheme)?;
    Ok((lhs, rhs))
}

/// `a -> (1 - |a|^2|x|^2) / |1 - a conj(x)|^8` as a real-valued field in `a`.
pub fn dbar_identity_potential(x: Octonion) -> Field {
    let singular = if x.norm_sqr() > 0.0 {
        SingularSet::points([Point8::from(x.conj().inverse().unwrap_or(Octonion::ZERO))])
    } else {
        SingularSet::empty()
    };
    Field::new(format!("(1 - |a|^2|{x}|^2)/|1 - a conj({x})|^8"), singular, move |a| {
        let ao = a.as_octonion();
        let w = Octonion::ONE - ao.mul(&x.conj());
        let n2 = w.norm_sqr();
        if n2 == 0.0 {
            return Err(pole("potential where a conj(x) = 1", "{conj(x)^-1}".into()));
        }
        Ok(Octonion::real((1.0 - ao.norm_sqr() * x.norm_sqr()) / (n2 * n2 * n2 * n2)))
    })
}

/// Where `conj(x) a = r`, i.e. `x = r a / |a|^2`.
fn szego_pole(a: Octonion, r: f64) -> Point8 {
    let n2 = a.norm_sqr();
    if n2 == 0.0 {
        Point8([f64::INFINITY; 8])
    } else {
        Point8::from(a * (r / n2))
    }
}

fn pole_set(a: Octonion, r: f64) -> SingularSet {
    if a.norm_sqr() == 0.0 {
        SingularSet::empty()
    } else {
        SingularSet::points([szego_pole(a, r)])
    }
}

/// `x -> E(x)`.
pub fn cauchy_field() -> Field {
    Field::new("E", SingularSet::origin(), |x| cauchy_e(x.as_octonion()))
}

/// `x -> E(x, a)`, i.e. the Cauchy kernel translated to `a`.
pub fn cauchy_field_at(a: Octonion) -> Field {
    Field::new(format!("E(., {a})"), SingularSet::points([Point8::from(a)]), move |x| {
        cauchy_e2(x.as_octonion(), a)
    })
}

/// `x -> S(x, a)`.
pub fn szego_field(a: Octonion) -> Field {
    Field::new(format!("S(., {a})"), pole_set(a, 1.0), move |x| {
        szego_r_value(x.as_octonion(), a, 1.0)
    })
}

/// `x -> S^r(x, a)`.
pub fn szego_r_field(a: Octonion, r: f64) -> Field {
    Field::new(format!("S^{r}(., {a})"), pole_set(a, r), move |x| {
        szego_r_value(x.as_octonion(), a, r)
    })
}

/// `x -> B(x, a)`.
pub fn bergman_field(a: Octonion) -> Field {
    Field::new(format!("B(., {a})"), pole_set(a, 1.0), move |x| {
        bergman_value(x.as_octonion(), a)
    })
}
