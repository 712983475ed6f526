//! Numerical octonionic analysis on the unit ball of R^8.
//!
//! The crate provides octonion arithmetic ([`algebra`]), octonion-valued
//! fields with the Cauchy-Riemann operators ([`fields`]), the closed-form
//! Cauchy, Szego and Bergman kernels ([`kernels`]), bracketed sphere and ball
//! inner products ([`quadrature`]), radial extraction of inner and outer
//! spherical components ([`spherical`]), and a verification harness that
//! checks the reproducing formulas and related identities ([`harness`]).

// `!(x < bound)` rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod fields;
pub mod harness;
pub mod kernels;
pub mod poly;
pub mod quadrature;
pub mod spherical;

pub use algebra::{associator, Octonion, TripleTable};
pub use error::{Error, Result};
pub use fields::{DiffMode, DiffScheme, Field, Point8, SingularSet};
pub use kernels::KernelParams;
pub use quadrature::{InnerProductResult, QuadratureSpec, Strategy};
