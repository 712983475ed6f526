use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

use octokernel::fields::{DiffScheme, Field, Point8, SingularSet};
use octokernel::harness::{CheckRow, Method, ToleranceMode};
use octokernel::kernels::szego_field;
use octokernel::quadrature::{exact_sphere_moment, inner_sphere, QuadratureSpec};
use octokernel::spherical::{linear_example, spherical_part, PartKind, PartLabel, RadialFitSpec};
use octokernel::Octonion;

fn coeffs() -> impl Strategy<Value = [f64; 8]> {
    prop::array::uniform8(-1.0f64..1.0)
}

fn unit_point() -> impl Strategy<Value = Point8> {
    coeffs()
        .prop_filter("nonzero", |c| c.iter().map(|v| v * v).sum::<f64>() > 1e-4)
        .prop_map(|c| {
            let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            Point8(c.map(|v| v / n))
        })
}

/// Normalized sphere moment from the Gamma function.
fn moment_oracle(alpha: &[u32; 8]) -> f64 {
    let total: u32 = alpha.iter().sum();
    let num: f64 = ln_gamma(4.0) + alpha.iter().map(|&a| ln_gamma((f64::from(a) + 1.0) / 2.0)).sum::<f64>();
    let den = 4.0 * std::f64::consts::PI.ln() + ln_gamma((f64::from(total) + 8.0) / 2.0);
    (num - den).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_octonion_identification(c in coeffs()) {
        let p = Point8(c);
        let x = p.as_octonion();
        prop_assert_eq!(*x.coeffs(), c);
        prop_assert!((p.radius() - x.norm()).abs() <= 1e-15 * x.norm().max(1.0));
    }

    #[test]
    fn field_products_keep_their_bracketing(c in coeffs(), d in coeffs(), p in coeffs()) {
        let (c, d, x) = (Octonion::new(c), Octonion::new(d), Point8(p));
        let id = Field::identity();
        let left = id.mul(&Field::constant(c)).mul(&Field::constant(d));
        let right = id.mul(&Field::constant(c).mul(&Field::constant(d)));
        let xo = x.as_octonion();
        prop_assert_eq!(left.eval(&x).unwrap(), (xo * c) * d);
        prop_assert_eq!(right.eval(&x).unwrap(), xo * (c * d));
        prop_assert_eq!(id.left_mul(c).eval(&x).unwrap(), c * xo);
        prop_assert_eq!(id.right_mul(c).eval(&x).unwrap(), xo * c);
    }

    #[test]
    fn evaluation_is_deterministic(p in unit_point(), a in 0.0f64..0.9) {
        let f = szego_field(Octonion::basis(3) * a);
        let x = p.scaled(0.5);
        prop_assert_eq!(f.eval(&x).unwrap(), f.eval(&x).unwrap());
    }

    #[test]
    fn excluded_points_fail_to_evaluate(p in unit_point()) {
        let f = Field::new("1/|x|", SingularSet::origin().with_exclusion(1e-3), |x| Ok(Octonion::real(1.0 / x.radius())));
        prop_assert!(f.eval(&p.scaled(1e-4)).is_err());
        prop_assert!(f.eval(&p).is_ok());
    }

    #[test]
    fn step_must_be_positive(h in -1.0f64..=0.0) {
        prop_assert!(DiffScheme::central(h).validate().is_err());
        prop_assert!(DiffScheme::richardson(h.abs() + 1e-6).validate().is_ok());
    }

    #[test]
    fn sphere_moments(alpha in prop::array::uniform8(0u32..5)) {
        let m = exact_sphere_moment(&alpha);
        if alpha.iter().any(|a| a % 2 == 1) {
            prop_assert_eq!(m, 0.0);
        } else {
            prop_assert!(m > 0.0);
            prop_assert!((m - moment_oracle(&alpha)).abs() <= 1e-12 * m);
        }
    }

    #[test]
    fn std_error_is_nonnegative_and_zero_when_exact(seed in any::<u64>()) {
        let f = linear_example();
        let g = Field::identity();
        let mc = inner_sphere(&f, &g, &QuadratureSpec::mc(256, seed)).unwrap();
        prop_assert!(mc.std_error >= 0.0 && mc.std_error_components.iter().all(|s| *s >= 0.0));
        let ex = inner_sphere(&f, &g, &QuadratureSpec::exact()).unwrap();
        prop_assert_eq!(ex.std_error, 0.0);
    }

    #[test]
    fn pass_rule(lhs in -2.0f64..2.0, rhs in prop_oneof![Just(0.0), -2.0f64..2.0], tol in 1e-6f64..1.0) {
        let row = CheckRow::scalar("p", "", Method::ClosedForm, lhs, rhs, tol, ToleranceMode::Relative);
        let abs = (lhs - rhs).abs();
        let expected = if rhs == 0.0 { abs <= tol } else { abs / rhs.abs() <= tol };
        prop_assert_eq!(row.pass, expected);
        prop_assert_eq!(row.rel_err.is_none(), rhs == 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn inner_parts_are_homogeneous(w in unit_point(), r in 0.2f64..0.95, k in 0usize..3) {
        let f = szego_field(Octonion::basis(1) * 0.3);
        let label = PartLabel { kind: PartKind::Inner, degree: k };
        let part = spherical_part(&f, &RadialFitSpec::inner(4), label).unwrap().field;
        let on_sphere = part.eval(&w).unwrap();
        let inside = part.eval(&w.scaled(r)).unwrap();
        let want = on_sphere * r.powi(k as i32);
        prop_assert!(inside.distance(&want) <= 1e-9 * on_sphere.norm().max(1.0));
    }
}
