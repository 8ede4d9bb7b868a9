//! Test functions, convergence sweeps and geometric rate estimates.
//!
//! A sweep transforms the target once at a base resolution, truncates the
//! coefficient tensor for each degree bound, and records the maximum error
//! on an evaluation grid together with the discrete L² error on the
//! transform grid. The fitted rate `ρ_fit = e^{-m}` comes from a least
//! squares line `log(error) ≈ m·n + b` over a window of degrees.

use std::fmt;
use std::sync::Arc;

use ndarray::{ArrayD, Dimension};
use serde::Serialize;

use crate::cheb::{self, ChebTensor, GridSpec, SampledGrid};
use crate::degree::{self, DegreeFamily};
use crate::regions::rho_from_h;
use crate::{Error, Result};

/// Fit window used when none is given: below 8 the errors are pre-asymptotic,
/// above 24 the coefficients near the base resolution start to matter.
pub const DEFAULT_FIT_WINDOW: (usize, usize) = (8, 24);

/// Errors at or below this level are treated as rounding noise by [`fit_rate`].
pub const ERROR_FLOOR: f64 = 1e-13;

/// Minimum number of records a rate fit needs.
pub const MIN_FIT_POINTS: usize = 4;

/// Largest dimension a sweep will build a dense tensor for.
pub const MAX_SWEEP_DIMS: usize = 3;

pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function on `[-1,1]^s` with a known Assumption A parameter `h²`.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    dims: usize,
    h_squared: f64,
    evaluator: Evaluator,
}

impl TestFunction {
    pub fn new(name: impl Into<String>, dims: usize, h_squared: f64, evaluator: Evaluator) -> Result<Self> {
        if dims == 0 {
            return Err(Error::invalid("test function needs s >= 1"));
        }
        if !(h_squared > 0.0) || !h_squared.is_finite() {
            return Err(Error::invalid(format!("h² must be > 0, got {h_squared}")));
        }
        Ok(TestFunction {
            name: name.into(),
            dims,
            h_squared,
            evaluator,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn h_squared(&self) -> f64 {
        self.h_squared
    }

    pub fn h(&self) -> f64 {
        self.h_squared.sqrt()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("dims", &self.dims)
            .field("h_squared", &self.h_squared)
            .finish_non_exhaustive()
    }
}

fn sum_squares(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `1 / (1 + 10 Σ x_j²)`, singular on `Σ x_j² = -0.1`.
pub fn runge_f(s: usize) -> Result<TestFunction> {
    TestFunction::new(
        "runge-f",
        s,
        0.1,
        Arc::new(|x: &[f64]| 1.0 / (1.0 + 10.0 * sum_squares(x))),
    )
}

/// `1 / (10(s + 0.1) - 10 Σ x_j²)`, singular just outside the cube corners.
pub fn runge_g(s: usize) -> Result<TestFunction> {
    let top = 10.0 * (s as f64 + 0.1);
    TestFunction::new(
        "runge-g",
        s,
        0.1,
        Arc::new(move |x: &[f64]| 1.0 / (top - 10.0 * sum_squares(x))),
    )
}

/// Looks up a registered test function (`runge-f`, `runge-g`).
pub fn test_function(name: &str, s: usize) -> Result<TestFunction> {
    match name {
        "runge-f" | "f" => runge_f(s),
        "runge-g" | "g" => runge_g(s),
        other => Err(Error::invalid(format!("unknown test function '{other}'"))),
    }
}

/// One row of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Record {
    pub n: usize,
    pub dof: u64,
    pub max_error: f64,
    pub grid_l2_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub function: String,
    pub dims: usize,
    pub family: DegreeFamily,
    pub base_n: usize,
    pub records: Vec<Record>,
    /// `None` when the window holds too few usable records.
    pub fitted_rate: Option<f64>,
    pub theoretical_rate: f64,
    pub fit_window: (usize, usize),
}

impl ConvergenceReport {
    pub fn record(&self, n: usize) -> Option<&Record> {
        self.records.iter().find(|r| r.n == n)
    }
}

/// Predicted geometric rate: `ρ^{1/√s}` for Total, `ρ` for Euclidean and Max.
pub fn theoretical_rate(h: f64, s: usize, family: DegreeFamily) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid(format!("h must be > 0, got {h}")));
    }
    if s == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let rho = rho_from_h(h)?;
    Ok(match family {
        DegreeFamily::Total => rho.powf(1.0 / (s as f64).sqrt()),
        DegreeFamily::Euclidean | DegreeFamily::Max => rho,
    })
}

/// Least-squares slope of `y` against `x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), (x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    num / den
}

/// `e^{-m}` for the least-squares slope `m` of `log(max_error)` against `n`
/// over records with `n` in the closed window.
pub fn fit_rate(records: &[Record], window: (usize, usize)) -> Result<f64> {
    let (lo, hi) = window;
    let in_window: Vec<&Record> = records.iter().filter(|r| r.n >= lo && r.n <= hi).collect();
    let usable: Vec<(f64, f64)> = in_window
        .iter()
        .filter(|r| r.max_error > ERROR_FLOOR)
        .map(|r| (r.n as f64, r.max_error.ln()))
        .collect();
    let dropped = in_window.len() - usable.len();
    if dropped > 0 {
        log::warn!("rate fit: {dropped} record(s) at the rounding floor excluded");
    }
    let distinct = {
        let mut ns: Vec<u64> = usable.iter().map(|p| p.0 as u64).collect();
        ns.dedup();
        ns.len()
    };
    if distinct < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            found: distinct,
        });
    }
    Ok((-slope(&usable)).exp())
}

/// Geometric rate `ρ` from a least-squares fit of `log|a_k|` against
/// `-‖k‖_2`, over coefficients with `|a_k| > floor`.
pub fn coefficient_decay_rate(t: &ChebTensor, floor: f64) -> Result<f64> {
    let points: Vec<(f64, f64)> = t
        .coeffs()
        .indexed_iter()
        .filter(|(_, v)| v.abs() > floor)
        .map(|(ix, v)| {
            let k2: usize = ix.slice().iter().map(|k| k * k).sum();
            (-(k2 as f64).sqrt(), v.abs().ln())
        })
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            found: points.len(),
        });
    }
    Ok(slope(&points).exp())
}

/// `ρ` from the ratio test on 1D coefficients: the reciprocal of the
/// geometric mean of `|a_{k+2}/a_k|^{1/2}` for `k` in `lo..=hi` with both
/// coefficients above `floor`. Stepping by two handles even and odd functions.
pub fn coefficient_ratio_rate(coeffs: &[f64], lo: usize, hi: usize, floor: f64) -> Result<f64> {
    let logs: Vec<f64> = (lo..=hi)
        .filter(|&k| k + 2 < coeffs.len())
        .filter(|&k| coeffs[k].abs() > floor && coeffs[k + 2].abs() > floor)
        .map(|k| 0.5 * (coeffs[k + 2] / coeffs[k]).abs().ln())
        .collect();
    if logs.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    Ok((-mean).exp())
}

/// A target transformed once at `base_n`, ready to be truncated per family.
#[derive(Clone, Debug)]
pub struct PreparedSweep {
    function: String,
    dims: usize,
    h: f64,
    base_n: usize,
    tensor: ChebTensor,
    transform_values: ArrayD<f64>,
    eval: SampledGrid,
}

impl PreparedSweep {
    pub fn new(tf: &TestFunction, base_n: usize, eval_grid: &GridSpec) -> Result<Self> {
        if tf.dims() > MAX_SWEEP_DIMS {
            return Err(Error::invalid(format!(
                "sweeps build dense tensors and support s <= {MAX_SWEEP_DIMS}, got {}",
                tf.dims()
            )));
        }
        if base_n < 2 {
            return Err(Error::invalid("base resolution must be at least 2"));
        }
        let f = |x: &[f64]| tf.eval(x);
        let pts = cheb::cheb_points(base_n)?;
        let axes = vec![pts; tf.dims()];
        let transform_values = cheb::sample_tensor_grid(f, &axes)?;
        let order: Vec<usize> = (0..tf.dims()).collect();
        let tensor = cheb::transform_grid_values(transform_values.clone(), &order)?;
        let eval = SampledGrid::new(f, tf.dims(), eval_grid)?;
        Ok(PreparedSweep {
            function: tf.name().to_string(),
            dims: tf.dims(),
            h: tf.h(),
            base_n,
            tensor,
            transform_values,
            eval,
        })
    }

    pub fn tensor(&self) -> &ChebTensor {
        &self.tensor
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    /// Truncation errors for a single degree bound.
    pub fn record(&self, family: DegreeFamily, n: usize) -> Result<Record> {
        if n > self.base_n {
            return Err(Error::Aliasing {
                n,
                base_n: self.base_n,
                required: n,
            });
        }
        let truncated = cheb::truncate(&self.tensor, n as f64, family)?;
        Ok(Record {
            n,
            dof: degree::count_index_set(self.dims, n as f64, family)?,
            max_error: self.eval.max_error(&truncated)?,
            grid_l2_error: cheb::discrete_l2_error(&self.transform_values, &truncated)?,
        })
    }

    /// Builds the report for one family.
    ///
    /// Every `n` must be at most `base_n`. Degrees inside the fit window feed
    /// the rate estimate and must also satisfy `2n ≤ base_n`, so the
    /// coefficients they keep are well resolved by the interpolant.
    pub fn report(
        &self,
        family: DegreeFamily,
        n_values: &[usize],
        window: (usize, usize),
    ) -> Result<ConvergenceReport> {
        let mut ns = n_values.to_vec();
        ns.sort_unstable();
        ns.dedup();
        if ns.is_empty() {
            return Err(Error::invalid("sweep needs at least one degree"));
        }
        if window.0 > window.1 {
            return Err(Error::invalid(format!("empty fit window {window:?}")));
        }
        for &n in &ns {
            if n > self.base_n {
                return Err(Error::Aliasing {
                    n,
                    base_n: self.base_n,
                    required: n,
                });
            }
            if n >= window.0 && n <= window.1 && 2 * n > self.base_n {
                return Err(Error::Aliasing {
                    n,
                    base_n: self.base_n,
                    required: 2 * n,
                });
            }
        }
        let records = ns.iter().map(|&n| self.record(family, n)).collect::<Result<Vec<_>>>()?;
        let fitted_rate = match fit_rate(&records, window) {
            Ok(rate) => Some(rate),
            Err(Error::TooFewPoints { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(ConvergenceReport {
            function: self.function.clone(),
            dims: self.dims,
            family,
            base_n: self.base_n,
            records,
            fitted_rate,
            theoretical_rate: theoretical_rate(self.h, self.dims, family)?,
            fit_window: window,
        })
    }
}

/// Transform at `base_n`, truncate per degree, measure errors, fit the rate
/// over [`DEFAULT_FIT_WINDOW`].
pub fn convergence_sweep(
    tf: &TestFunction,
    family: DegreeFamily,
    n_values: &[usize],
    base_n: usize,
    eval_grid: &GridSpec,
) -> Result<ConvergenceReport> {
    PreparedSweep::new(tf, base_n, eval_grid)?.report(family, n_values, DEFAULT_FIT_WINDOW)
}
