use std::sync::OnceLock;

use chebdeg::cheb::GridSpec;
use chebdeg::degree::{self, DegreeFamily};
use chebdeg::lab::{self, ConvergenceReport, PreparedSweep};

const RHO: f64 = 1.365_036_614_186_989_6;

fn reports() -> &'static [ConvergenceReport] {
    static REPORTS: OnceLock<Vec<ConvergenceReport>> = OnceLock::new();
    REPORTS.get_or_init(|| {
        let tf = lab::runge_f(2).unwrap();
        let prepared = PreparedSweep::new(&tf, 48, &GridSpec::chebyshev(201)).unwrap();
        let ns: Vec<usize> = (2..=28).step_by(2).collect();
        DegreeFamily::ALL
            .iter()
            .map(|&f| prepared.report(f, &ns, (8, 24)).unwrap())
            .collect()
    })
}

fn report(family: DegreeFamily) -> &'static ConvergenceReport {
    reports().iter().find(|r| r.family == family).unwrap()
}

#[test]
fn euclidean_error_near_predicted_level() {
    let err = report(DegreeFamily::Euclidean).record(20).unwrap().max_error;
    let predicted = RHO.powi(-20);
    assert!(
        err / predicted < 10.0 && predicted / err < 10.0,
        "{err:e} vs {predicted:e}"
    );
}

#[test]
fn euclidean_beats_total() {
    let e = report(DegreeFamily::Euclidean).fitted_rate.unwrap();
    let t = report(DegreeFamily::Total).fitted_rate.unwrap();
    assert!(e / t > 1.05, "euclidean {e}, total {t}");
}

#[test]
fn max_adds_little_over_euclidean() {
    let e = report(DegreeFamily::Euclidean).fitted_rate.unwrap();
    let m = report(DegreeFamily::Max).fitted_rate.unwrap();
    assert!((m - e).abs() / e < 0.05, "euclidean {e}, max {m}");
}

#[test]
fn total_rate_scales_with_dimension() {
    let t = report(DegreeFamily::Total).fitted_rate.unwrap();
    let want = RHO.powf(1.0 / 2f64.sqrt());
    assert!((t - want).abs() / want < 0.07, "{t} vs {want}");
}

#[test]
fn dof_column_matches_counts() {
    for rep in reports() {
        for r in &rep.records {
            assert_eq!(r.dof, degree::count_index_set(2, r.n as f64, rep.family).unwrap());
        }
    }
}

#[test]
fn errors_decrease_within_window() {
    for rep in reports() {
        let window: Vec<f64> = rep
            .records
            .iter()
            .filter(|r| (8..=24).contains(&r.n))
            .map(|r| r.max_error)
            .collect();
        assert!(window.windows(2).all(|w| w[1] < w[0]), "{}: {window:?}", rep.family);
    }
}

#[test]
fn three_dimensional_sweep_separates_families() {
    let tf = lab::runge_f(3).unwrap();
    let ns: Vec<usize> = (4..=16).step_by(2).collect();
    let prepared = PreparedSweep::new(&tf, 32, &GridSpec::chebyshev(33)).unwrap();
    let t = prepared.report(DegreeFamily::Total, &ns, (4, 16)).unwrap();
    let e = prepared.report(DegreeFamily::Euclidean, &ns, (4, 16)).unwrap();
    let (t, e) = (t.fitted_rate.unwrap(), e.fitted_rate.unwrap());
    assert!(e / t > 1.05, "euclidean {e}, total {t}");
}

#[test]
fn sweep_rejects_degrees_beyond_base() {
    let tf = lab::runge_f(2).unwrap();
    assert!(lab::convergence_sweep(&tf, DegreeFamily::Max, &[4, 60], 48, &GridSpec::chebyshev(21)).is_err());
}
