use chebdeg::regions::{self, EllipseRho, NewtonEllipse};
use chebdeg::MultiIndex;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

// point at parameter t on the Newton ellipse, scaled by r (r < 1 is inside)
fn newton_point(e: &NewtonEllipse, t: f64, r: f64) -> Complex64 {
    let (center, semi_major, semi_minor) = e.semi_axes();
    Complex64::new(center + r * semi_major * t.cos(), r * semi_minor * t.sin())
}

proptest! {
    #[test]
    fn rho_and_h_round_trip(h in 1e-3f64..50.0) {
        let rho = regions::rho_from_h(h).unwrap();
        prop_assert!(rho > 1.0);
        prop_assert!((regions::h_from_rho(rho).unwrap() - h).abs() <= 1e-12 * h.max(1.0));
    }

    #[test]
    fn bernstein_parametrization_has_level_rho(h in 0.05f64..3.0, t in 0.0f64..(2.0 * PI), r in 0.0f64..0.999) {
        let e = EllipseRho::from_h(h).unwrap();
        let rho = e.rho();
        let z = Complex64::from_polar(rho, t);
        let x = 0.5 * (z + 1.0 / z);
        prop_assert!((regions::bernstein_level(x) - rho).abs() < 1e-10 * rho);
        let inner = Complex64::from_polar(1.0 + r * (rho - 1.0), t);
        prop_assert!(regions::in_bernstein_ellipse(0.5 * (inner + 1.0 / inner), &e));
    }

    #[test]
    fn squares_of_bernstein_points_land_in_newton_ellipse(h in 0.05f64..3.0, t in 0.0f64..(2.0 * PI), r in 0.0f64..0.99) {
        let e = EllipseRho::from_h(h).unwrap();
        let z = Complex64::from_polar(1.0 + r * (e.rho() - 1.0), t);
        let x = 0.5 * (z + 1.0 / z);
        prop_assert!(e.squared_image().contains(x * x));
    }

    #[test]
    fn focal_and_axis_forms_agree(span in 0.5f64..6.0, reach in 0.01f64..4.0, t in 0.0f64..(2.0 * PI), r in 0.0f64..2.0) {
        prop_assume!((r - 1.0).abs() > 1e-6);
        let e = NewtonEllipse::new(span, reach).unwrap();
        let x = newton_point(&e, t, r);
        prop_assert_eq!(e.contains(x), e.contains_by_axes(x));
        prop_assert_eq!(e.contains(x), r < 1.0);
    }

    #[test]
    fn minkowski_sum_stays_inside(
        s in 0.5f64..4.0, a in 0.01f64..2.0, t in 0.5f64..4.0, b in 0.01f64..2.0,
        u in 0.0f64..(2.0 * PI), v in 0.0f64..(2.0 * PI), r1 in 0.0f64..0.999, r2 in 0.0f64..0.999,
    ) {
        let e1 = NewtonEllipse::new(s, a).unwrap();
        let e2 = NewtonEllipse::new(t, b).unwrap();
        let x = newton_point(&e1, u, r1);
        let y = newton_point(&e2, v, r2);
        prop_assert!(regions::minkowski_contained(&e1, &e2, x, y).unwrap());
    }

    #[test]
    fn halfplane_condition_holds_for_members(
        re in prop::collection::vec(-1.5f64..1.5, 2),
        im in prop::collection::vec(-0.4f64..0.4, 2),
        h in 0.1f64..1.0,
    ) {
        let x: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        if regions::assumption_a_member(&x, 2, h).unwrap() {
            prop_assert!(regions::assumption_a_halfplane(&x, 2, h).unwrap());
        }
    }

    #[test]
    fn lemma4_gap_is_nonnegative(h in 0.0f64..20.0, c in 0.0f64..=1.0) {
        prop_assert!(regions::lemma4_gap(h, c).unwrap() >= -1e-12);
    }

    #[test]
    fn psi_is_concave(h in 0.01f64..10.0, c in 0.001f64..=1.0) {
        prop_assert!(regions::psi_second_derivative(h, c).unwrap() < 0.0);
    }

    #[test]
    fn witness_identity_holds(k in prop::collection::vec(0usize..60, 1..6), h in 0.01f64..5.0) {
        prop_assume!(k.iter().any(|&v| v > 0));
        let k = MultiIndex::new(k).unwrap();
        let w = regions::lemma2_witness(&k, h).unwrap();
        prop_assert!((w.h_axis_sum_squares() - h * h).abs() <= 1e-12 * h * h);
        prop_assert!(((w.product() - w.target()) / w.target()).abs() <= 1e-12);
    }
}
