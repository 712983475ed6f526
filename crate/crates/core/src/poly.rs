//! Octonion-valued polynomials in eight real variables, optionally carrying
//! a power of the radius: `sum c * |x|^p * x^alpha`.
//!
//! These are the integrands the exact-moment quadrature can handle. Every
//! algebraic operation keeps coefficient order intact, so products remain
//! honest octonion products (monomials themselves are real and commute).

use std::collections::BTreeMap;

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::quadrature::exact_sphere_moment;

pub type Multidegree = [u8; 8];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RadialPoly {
    terms: BTreeMap<(i32, Multidegree), Octonion>,
}

impl RadialPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Octonion) -> Self {
        Self::monomial(c, 0, [0; 8])
    }

    pub fn monomial(c: Octonion, radial_power: i32, alpha: Multidegree) -> Self {
        let mut p = Self::zero();
        p.add_term(c, radial_power, alpha);
        p
    }

    /// The real coordinate `x_i` (as `x_i e_0`).
    pub fn coordinate(i: usize) -> Self {
        let mut alpha = [0; 8];
        alpha[i] = 1;
        Self::monomial(Octonion::ONE, 0, alpha)
    }

    /// `x = sum x_i e_i`.
    pub fn identity() -> Self {
        let mut p = Self::zero();
        for i in 0..8 {
            let mut alpha = [0; 8];
            alpha[i] = 1;
            p.add_term(Octonion::basis(i), 0, alpha);
        }
        p
    }

    /// `|x|^p` as a real-valued term.
    pub fn radial(power: i32) -> Self {
        Self::monomial(Octonion::ONE, power, [0; 8])
    }

    pub fn add_term(&mut self, c: Octonion, radial_power: i32, alpha: Multidegree) {
        let slot = self.terms.entry((radial_power, alpha)).or_default();
        *slot += c;
        if slot.norm_sqr() == 0.0 {
            self.terms.remove(&(radial_power, alpha));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Multidegree, &Octonion)> {
        self.terms.iter().map(|((p, a), c)| (*p, a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &RadialPoly) -> RadialPoly {
        let mut out = self.clone();
        for ((p, a), c) in &other.terms {
            out.add_term(*c, *p, *a);
        }
        out
    }

    pub fn sub(&self, other: &RadialPoly) -> RadialPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> RadialPoly {
        let mut out = RadialPoly::zero();
        for ((p, a), c) in &self.terms {
            out.add_term(c.scale(s), *p, *a);
        }
        out
    }

    /// Pointwise `c * self(x)`.
    pub fn left_mul(&self, c: &Octonion) -> RadialPoly {
        RadialPoly::constant(*c).mul(self)
    }

    /// Pointwise `self(x) * c`.
    pub fn right_mul(&self, c: &Octonion) -> RadialPoly {
        self.mul(&RadialPoly::constant(*c))
    }

    /// Pointwise product `self(x) * other(x)`.
    pub fn mul(&self, other: &RadialPoly) -> RadialPoly {
        let mut out = RadialPoly::zero();
        for ((p, a), c) in &self.terms {
            for ((q, b), d) in &other.terms {
                let mut alpha = [0u8; 8];
                for i in 0..8 {
                    alpha[i] = a[i] + b[i];
                }
                out.add_term(c.mul(d), p + q, alpha);
            }
        }
        out
    }

    pub fn conj(&self) -> RadialPoly {
        let mut out = RadialPoly::zero();
        for ((p, a), c) in &self.terms {
            out.add_term(c.conj(), *p, *a);
        }
        out
    }

    pub fn eval(&self, x: &[f64; 8]) -> Octonion {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut acc = Octonion::ZERO;
        for ((p, a), c) in &self.terms {
            let mut m = if *p == 0 { 1.0 } else { r.powi(*p) };
            for i in 0..8 {
                if a[i] > 0 {
                    m *= x[i].powi(i32::from(a[i]));
                }
            }
            acc += c.scale(m);
        }
        acc
    }

    /// Whether some term carries a negative radial power (pole at 0).
    pub fn singular_at_origin(&self) -> bool {
        self.terms.keys().any(|(p, _)| *p < 0)
    }

    /// Restriction to the unit sphere, where every `|x|^p` equals one.
    pub fn on_sphere(&self) -> RadialPoly {
        let mut out = RadialPoly::zero();
        for ((_, a), c) in &self.terms {
            out.add_term(*c, 0, *a);
        }
        out
    }

    /// Split into homogeneous components keyed by degree `p + |alpha|`.
    pub fn homogeneous_components(&self) -> BTreeMap<i32, RadialPoly> {
        let mut out: BTreeMap<i32, RadialPoly> = BTreeMap::new();
        for ((p, a), c) in &self.terms {
            out.entry(p + total(a)).or_default().add_term(*c, *p, *a);
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// `(1/omega_8) * integral over S^7`, from closed-form monomial moments.
    pub fn sphere_mean(&self) -> Octonion {
        let mut acc = Octonion::ZERO;
        for ((_, a), c) in &self.terms {
            let m = exact_sphere_moment(&a.map(u32::from));
            if m != 0.0 {
                acc += c.scale(m);
            }
        }
        acc
    }

    /// `(1/omega_8) * integral over the unit ball of |x|^extra_power * self`.
    pub fn ball_integral(&self, extra_power: i32) -> Result<Octonion> {
        let mut acc = Octonion::ZERO;
        for ((p, a), c) in &self.terms {
            let m = exact_sphere_moment(&a.map(u32::from));
            if m == 0.0 {
                continue;
            }
            let exponent = p + extra_power + total(a) + 8;
            if exponent <= 0 {
                return Err(Error::DivergentMoment(exponent - 1));
            }
            acc += c.scale(m / f64::from(exponent));
        }
        Ok(acc)
    }
}

fn total(a: &Multidegree) -> i32 {
    a.iter().map(|&v| i32::from(v)).sum()
}
