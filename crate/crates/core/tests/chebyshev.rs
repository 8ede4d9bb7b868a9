use approx::assert_abs_diff_eq;
use chebdeg::cheb::{self, ChebTensor, GridSpec};
use chebdeg::degree::DegreeFamily;
use chebdeg::lab;
use ndarray::{ArrayD, IxDyn};
use proptest::prelude::*;

fn runge(x: &[f64]) -> f64 {
    1.0 / (1.0 + 10.0 * x.iter().map(|v| v * v).sum::<f64>())
}

fn smooth(x: &[f64]) -> f64 {
    (x[0] + 0.5 * x[1]).exp() * (2.0 * x[2]).cos()
}

#[test]
fn axis_order_does_not_matter() {
    let pts = cheb::cheb_points(12).unwrap();
    let values = cheb::sample_tensor_grid(smooth, &vec![pts; 3]).unwrap();
    let reference = cheb::transform_grid_values(values.clone(), &[0, 1, 2]).unwrap();
    for order in [[2, 1, 0], [1, 0, 2], [2, 0, 1]] {
        let t = cheb::transform_grid_values(values.clone(), &order).unwrap();
        for (a, b) in t.coeffs().iter().zip(reference.coeffs()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}

#[test]
fn interpolant_reproduces_samples() {
    let n = 16;
    let t = cheb::tensor_cheb_transform(runge, 2, n).unwrap();
    let pts = cheb::cheb_points(n).unwrap();
    for &x in &pts {
        for &y in &pts {
            let got = cheb::evaluate(&t, &[x, y]).unwrap();
            assert_abs_diff_eq!(got, runge(&[x, y]), epsilon = 1e-13);
        }
    }
}

#[test]
fn grid_l2_error_shrinks_as_index_set_grows() {
    let n = 24;
    let pts = cheb::cheb_points(n).unwrap();
    let values = cheb::sample_tensor_grid(runge, &vec![pts; 2]).unwrap();
    let t = cheb::transform_grid_values(values.clone(), &[0, 1]).unwrap();
    for family in DegreeFamily::ALL {
        let mut prev = f64::INFINITY;
        for m in 0..=n {
            let err = cheb::discrete_l2_error(&values, &cheb::truncate(&t, m as f64, family).unwrap()).unwrap();
            assert!(err <= prev * (1.0 + 1e-12), "{family} n={m}: {err} > {prev}");
            prev = err;
        }
    }
}

#[test]
fn coefficient_decay_matches_ellipse_parameter() {
    let t = cheb::tensor_cheb_transform(runge, 2, 48).unwrap();
    // keep the decaying part, away from the interpolation floor
    let kept = cheb::truncate(&t, 36.0, DegreeFamily::Euclidean).unwrap();
    let rho = lab::coefficient_decay_rate(&kept, 1e-12).unwrap();
    let want: f64 = 1.365_036_614_186_989_6;
    assert!((rho.ln() - want.ln()).abs() / want.ln() < 0.1, "fitted {rho}");
}

#[test]
fn interpolation_error_tracks_base_degree() {
    let grid = GridSpec::chebyshev(201);
    let coarse = cheb::tensor_cheb_transform(runge, 2, 48).unwrap();
    let err = cheb::max_error(runge, &coarse, &grid).unwrap();
    assert!(err < 1e-6, "N=48: {err}");
    let fine = cheb::tensor_cheb_transform(runge, 2, 96).unwrap();
    let err = cheb::max_error(runge, &fine, &grid).unwrap();
    assert!(err < 1e-10, "N=96: {err}");
}

#[test]
fn grid_evaluation_agrees_with_pointwise() {
    let t = cheb::tensor_cheb_transform(smooth, 3, 8).unwrap();
    let axes = vec![vec![-1.0, -0.3, 0.7], vec![0.1, 1.0], vec![-0.9, 0.0, 0.4, 1.0]];
    let grid = cheb::evaluate_on_tensor_grid(&t, &axes).unwrap();
    for (ix, &v) in grid.indexed_iter() {
        let p = [axes[0][ix[0]], axes[1][ix[1]], axes[2][ix[2]]];
        assert_abs_diff_eq!(v, cheb::evaluate(&t, &p).unwrap(), epsilon = 1e-13);
    }
}

proptest! {
    #[test]
    fn fast_transform_matches_direct(samples in prop::collection::vec(-1.0f64..1.0, 2..80)) {
        let fast = cheb::cheb_transform_1d(&samples).unwrap();
        let slow = cheb::cheb_transform_1d_direct(&samples).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn clenshaw_matches_cosine_form(coeffs in prop::collection::vec(-1.0f64..1.0, 1..30), x in -1.0f64..=1.0) {
        let t = ChebTensor::new(ArrayD::from_shape_vec(IxDyn(&[coeffs.len()]), coeffs.clone()).unwrap()).unwrap();
        let direct: f64 = coeffs.iter().enumerate().map(|(k, a)| a * (k as f64 * x.acos()).cos()).sum();
        prop_assert!((cheb::evaluate(&t, &[x]).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_idempotent_and_nested(n in 0.0f64..12.0) {
        let t = cheb::tensor_cheb_transform(smooth, 3, 8).unwrap();
        for family in DegreeFamily::ALL {
            let once = cheb::truncate(&t, n, family).unwrap();
            prop_assert_eq!(&cheb::truncate(&once, n, family).unwrap(), &once);
        }
        let total = cheb::truncate(&t, n, DegreeFamily::Total).unwrap();
        let euclid = cheb::truncate(&t, n, DegreeFamily::Euclidean).unwrap();
        prop_assert!(total.support().len() <= euclid.support().len());
        prop_assert_eq!(&cheb::truncate(&euclid, n, DegreeFamily::Total).unwrap(), &total);
    }
}
