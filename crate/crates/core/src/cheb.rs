//! Chebyshev transforms on tensor-product grids of second-kind points,
//! truncation by degree family, and evaluation.
//!
//! Coefficients are the interpolation coefficients at the points
//! `x_j = cos(jπ/N)`, `j = 0..=N`, along every axis. Truncating a
//! high-resolution interpolant gives the discrete least-squares
//! approximation on the same grid, because `T_0, ..., T_N` are orthogonal
//! under the trapezoid-weighted point sum.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, ArrayD, ArrayView1, Axis, Dimension, IxDyn, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::degree::{DegreeBound, DegreeFamily};
use crate::{Error, Result};

/// Default limit on the number of entries of a sampled tensor grid.
pub const DEFAULT_MAX_TENSOR_LEN: usize = 1 << 24;

/// `cos(jπ/N)` for `j = 0..=N`, from `1` down to `-1`.
///
/// Computed as `sin(π(N - 2j)/(2N))` so the set is exactly symmetric, the
/// endpoints are exactly `±1` and the midpoint (even `N`) is exactly zero.
pub fn cheb_points(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("cheb_points needs N >= 1"));
    }
    let nf = n as f64;
    Ok((0..=n)
        .map(|j| {
            let m = n as f64 - 2.0 * j as f64;
            (PI * m / (2.0 * nf)).sin()
        })
        .collect())
}

/// Trapezoid weights in `θ = arccos x` for the points of [`cheb_points`],
/// normalized to sum to one.
pub fn cheb_point_weights(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("cheb_point_weights needs N >= 1"));
    }
    let mut w = vec![1.0 / n as f64; n + 1];
    w[0] *= 0.5;
    w[n] *= 0.5;
    Ok(w)
}

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::invalid("transform needs at least two samples"));
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite sample {bad}")));
    }
    Ok(())
}

/// Chebyshev coefficients of the interpolant through samples taken at
/// `cheb_points(N)`. FFT of the even extension (a DCT-I).
pub fn cheb_transform_1d(samples: &[f64]) -> Result<Vec<f64>> {
    check_samples(samples)?;
    let n = samples.len() - 1;
    if n == 1 {
        return cheb_transform_1d_direct(samples);
    }
    let mut buf: Vec<Complex64> = Vec::with_capacity(2 * n);
    buf.extend(samples.iter().map(|&v| Complex64::new(v, 0.0)));
    buf.extend(samples[1..n].iter().rev().map(|&v| Complex64::new(v, 0.0)));
    let fft = FftPlanner::new().plan_fft_forward(2 * n);
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    let mut coeffs: Vec<f64> = buf[..=n].iter().map(|c| c.re * scale).collect();
    coeffs[0] *= 0.5;
    coeffs[n] *= 0.5;
    Ok(coeffs)
}

/// O(N²) version of [`cheb_transform_1d`]: trapezoid-weighted cosine sums
///
/// ```text
/// a_k = (2/N) Σ''_j v_j cos(jkπ/N),   a_0 and a_N halved
/// ```
pub fn cheb_transform_1d_direct(samples: &[f64]) -> Result<Vec<f64>> {
    check_samples(samples)?;
    let n = samples.len() - 1;
    let nf = n as f64;
    let coeffs = (0..=n)
        .map(|k| {
            let mut acc = 0.0;
            for (j, &v) in samples.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                // reduce jk mod 2N before the cosine to keep the argument small
                let phase = ((j * k) % (2 * n)) as f64;
                acc += w * v * (PI * phase / nf).cos();
            }
            let a = 2.0 * acc / nf;
            if k == 0 || k == n {
                0.5 * a
            } else {
                a
            }
        })
        .collect();
    Ok(coeffs)
}

/// `T_k(x)` by the three-term recurrence.
pub fn chebyshev_t(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..k {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Clenshaw recurrence for `Σ_k c_k T_k(x)`.
pub fn clenshaw(coeffs: ArrayView1<'_, f64>, x: f64) -> f64 {
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    let (mut b1, mut b2) = (0.0, 0.0);
    for k in (1..n).rev() {
        let b0 = coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + x * b1 - b2
}

/// Dense tensor of multivariate Chebyshev coefficients `a_k`,
/// `0 ≤ k_j ≤ N_j`, stored with the last axis contiguous.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebTensor {
    coeffs: ArrayD<f64>,
}

impl ChebTensor {
    pub fn new(coeffs: ArrayD<f64>) -> Result<Self> {
        if coeffs.ndim() == 0 || coeffs.shape().contains(&0) {
            return Err(Error::invalid("coefficient tensor needs s >= 1 and non-empty axes"));
        }
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("coefficient tensor contains non-finite values"));
        }
        Ok(ChebTensor { coeffs })
    }

    pub fn zeros(axis_degrees: &[usize]) -> Result<Self> {
        let shape: Vec<usize> = axis_degrees.iter().map(|d| d + 1).collect();
        Self::new(ArrayD::zeros(IxDyn(&shape)))
    }

    pub fn dims(&self) -> usize {
        self.coeffs.ndim()
    }

    /// `N_j` for each axis.
    pub fn axis_degrees(&self) -> Vec<usize> {
        self.coeffs.shape().iter().map(|d| d - 1).collect()
    }

    pub fn coeffs(&self) -> &ArrayD<f64> {
        &self.coeffs
    }

    pub fn get(&self, k: &[usize]) -> Option<f64> {
        self.coeffs.get(IxDyn(k)).copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multi-indices of the nonzero coefficients.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.coeffs
            .indexed_iter()
            .filter(|(_, &v)| v != 0.0)
            .map(|(ix, _)| ix.slice().to_vec())
            .collect()
    }
}

fn tensor_len(s: usize, n: usize, cap: usize) -> Result<usize> {
    let s32 = u32::try_from(s).map_err(|_| Error::invalid("dimension too large"))?;
    match (n + 1).checked_pow(s32) {
        Some(len) if len <= cap => Ok(len),
        _ => Err(Error::invalid(format!(
            "tensor grid ({} points per axis, s = {s}) exceeds limit of {cap} entries",
            n + 1
        ))),
    }
}

/// Evaluates `f` on the tensor grid `axes[0] × ⋯ × axes[s-1]`, last axis fastest.
pub fn sample_tensor_grid<F>(f: F, axes: &[Vec<f64>]) -> Result<ArrayD<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
    let len: usize = shape.iter().product();
    let mut values = Vec::with_capacity(len);
    let mut point = vec![0.0; axes.len()];
    for flat in 0..len {
        let mut rem = flat;
        for axis in (0..axes.len()).rev() {
            let m = shape[axis];
            point[axis] = axes[axis][rem % m];
            rem /= m;
        }
        let v = f(&point);
        if !v.is_finite() {
            return Err(Error::Evaluator {
                point: point.clone(),
                value: v,
            });
        }
        values.push(v);
    }
    ArrayD::from_shape_vec(IxDyn(&shape), values).map_err(|e| Error::invalid(e.to_string()))
}

/// Samples `f` on `cheb_points(n)^s` and transforms along axes `0, ..., s-1`.
pub fn tensor_cheb_transform<F>(f: F, s: usize, n: usize) -> Result<ChebTensor>
where
    F: Fn(&[f64]) -> f64,
{
    tensor_cheb_transform_with_limit(f, s, n, DEFAULT_MAX_TENSOR_LEN)
}

pub fn tensor_cheb_transform_with_limit<F>(f: F, s: usize, n: usize, max_len: usize) -> Result<ChebTensor>
where
    F: Fn(&[f64]) -> f64,
{
    if s == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    tensor_len(s, n, max_len)?;
    let pts = cheb_points(n)?;
    let axes = vec![pts; s];
    let values = sample_tensor_grid(f, &axes)?;
    let order: Vec<usize> = (0..s).collect();
    transform_grid_values(values, &order)
}

/// Applies [`cheb_transform_1d`] along every axis of sampled grid values,
/// visiting the axes in `axis_order` (a permutation of `0..s`).
pub fn transform_grid_values(mut values: ArrayD<f64>, axis_order: &[usize]) -> Result<ChebTensor> {
    let s = values.ndim();
    let mut seen = vec![false; s];
    if axis_order.len() != s
        || axis_order
            .iter()
            .any(|&a| a >= s || std::mem::replace(&mut seen[a], true))
    {
        return Err(Error::invalid("axis order must be a permutation of 0..s"));
    }
    for &axis in axis_order {
        for mut lane in values.lanes_mut(Axis(axis)) {
            let samples = lane.to_vec();
            let coeffs = cheb_transform_1d(&samples)?;
            lane.assign(&Array1::from(coeffs));
        }
    }
    ChebTensor::new(values)
}

/// Zeroes every `a_k` with `degree(k, family) > n`. Boundary indices stay.
pub fn truncate(t: &ChebTensor, n: f64, family: DegreeFamily) -> Result<ChebTensor> {
    let bound = DegreeBound::new(n, family)?;
    let mut coeffs = t.coeffs.clone();
    for (ix, v) in coeffs.indexed_iter_mut() {
        if !bound.contains(ix.slice()) {
            *v = 0.0;
        }
    }
    Ok(ChebTensor { coeffs })
}

fn check_point(t: &ChebTensor, x: &[f64]) -> Result<()> {
    if x.len() != t.dims() {
        return Err(Error::invalid(format!(
            "point has {} coordinates, tensor has {} dimensions",
            x.len(),
            t.dims()
        )));
    }
    if x.iter().any(|v| !(v.abs() <= 1.0)) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    Ok(())
}

/// Value of the expansion at `x`, by Clenshaw's recurrence along the last
/// axis, then the next to last, and so on.
pub fn evaluate(t: &ChebTensor, x: &[f64]) -> Result<f64> {
    check_point(t, x)?;
    let mut acc = t.coeffs.clone();
    for axis in (0..t.dims()).rev() {
        acc = acc.map_axis(Axis(axis), |lane| clenshaw(lane, x[axis]));
    }
    Ok(acc.iter().copied().next().unwrap_or(0.0))
}

// out = mat applied to every lane of `arr` along `axis`
fn apply_along_axis(arr: &ArrayD<f64>, axis: usize, mat: &Array2<f64>) -> ArrayD<f64> {
    let mut shape = arr.shape().to_vec();
    shape[axis] = mat.nrows();
    let mut out = ArrayD::zeros(IxDyn(&shape));
    Zip::from(out.lanes_mut(Axis(axis)))
        .and(arr.lanes(Axis(axis)))
        .for_each(|mut o, i| o.assign(&mat.dot(&i)));
    out
}

fn basis_matrix(points: &[f64], degree: usize) -> Array2<f64> {
    Array2::from_shape_fn((points.len(), degree + 1), |(i, k)| chebyshev_t(k, points[i]))
}

/// Values of the expansion on the tensor grid `axes[0] × ⋯ × axes[s-1]`,
/// computed one axis at a time with `T_k` basis matrices.
pub fn evaluate_on_tensor_grid(t: &ChebTensor, axes: &[Vec<f64>]) -> Result<ArrayD<f64>> {
    if axes.len() != t.dims() {
        return Err(Error::invalid("grid and tensor dimensions differ"));
    }
    for pts in axes {
        if let Some(&bad) = pts.iter().find(|v| !(v.abs() <= 1.0)) {
            return Err(Error::OutsideDomain { point: vec![bad] });
        }
    }
    let degrees = t.axis_degrees();
    let mut acc = t.coeffs.clone();
    for (axis, pts) in axes.iter().enumerate() {
        acc = apply_along_axis(&acc, axis, &basis_matrix(pts, degrees[axis]));
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    /// Tensor grid of `cheb_points(points_per_axis - 1)`.
    ChebyshevSecondKind,
    /// `points_per_axis^s` independent uniform points, seeded.
    UniformRandom,
}

/// Where errors are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub kind: GridKind,
    pub points_per_axis: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn chebyshev(points_per_axis: usize) -> Self {
        GridSpec {
            kind: GridKind::ChebyshevSecondKind,
            points_per_axis,
            seed: 0,
        }
    }

    pub fn uniform_random(points_per_axis: usize, seed: u64) -> Self {
        GridSpec {
            kind: GridKind::UniformRandom,
            points_per_axis,
            seed,
        }
    }

    fn validate(&self, s: usize) -> Result<usize> {
        if self.points_per_axis < 2 {
            return Err(Error::invalid("grid needs at least 2 points per axis"));
        }
        tensor_len(s, self.points_per_axis - 1, DEFAULT_MAX_TENSOR_LEN)
    }
}

#[derive(Clone, Debug)]
enum GridPoints {
    Tensor(Vec<Vec<f64>>),
    Scattered(Vec<Vec<f64>>),
}

/// A measurement grid together with the target function's values on it, so
/// several approximations can be compared without re-evaluating `f`.
#[derive(Clone, Debug)]
pub struct SampledGrid {
    points: GridPoints,
    values: Vec<f64>,
}

impl SampledGrid {
    pub fn new<F>(f: F, s: usize, grid: &GridSpec) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        if s == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let count = grid.validate(s)?;
        match grid.kind {
            GridKind::ChebyshevSecondKind => {
                let axes = vec![cheb_points(grid.points_per_axis - 1)?; s];
                let values = sample_tensor_grid(f, &axes)?.into_iter().collect();
                Ok(SampledGrid {
                    points: GridPoints::Tensor(axes),
                    values,
                })
            }
            GridKind::UniformRandom => {
                let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
                let mut points = Vec::with_capacity(count);
                let mut values = Vec::with_capacity(count);
                for _ in 0..count {
                    let p: Vec<f64> = (0..s).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let v = f(&p);
                    if !v.is_finite() {
                        return Err(Error::Evaluator { point: p, value: v });
                    }
                    points.push(p);
                    values.push(v);
                }
                Ok(SampledGrid {
                    points: GridPoints::Scattered(points),
                    values,
                })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max |f(x) - t(x)|` over the grid. Reduction runs in grid order.
    pub fn max_error(&self, t: &ChebTensor) -> Result<f64> {
        let approx: Vec<f64> = match &self.points {
            GridPoints::Tensor(axes) => evaluate_on_tensor_grid(t, axes)?.into_iter().collect(),
            GridPoints::Scattered(points) => points.iter().map(|p| evaluate(t, p)).collect::<Result<_>>()?,
        };
        Ok(self
            .values
            .iter()
            .zip(&approx)
            .map(|(f, p)| (f - p).abs())
            .fold(0.0, f64::max))
    }
}

/// `max |f(x) - t(x)|` over the points of `grid`.
pub fn max_error<F>(f: F, t: &ChebTensor, grid: &GridSpec) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    SampledGrid::new(f, t.dims(), grid)?.max_error(t)
}

/// Discrete L² distance between grid values and an expansion, on the tensor
/// grid of second-kind points matching `values.shape()`, weighted by the
/// product of [`cheb_point_weights`].
pub fn discrete_l2_error(values: &ArrayD<f64>, t: &ChebTensor) -> Result<f64> {
    if values.ndim() != t.dims() {
        return Err(Error::invalid("grid values and tensor dimensions differ"));
    }
    let mut axes = Vec::with_capacity(values.ndim());
    let mut weights = Vec::with_capacity(values.ndim());
    for &m in values.shape() {
        if m < 2 {
            return Err(Error::invalid("grid needs at least 2 points per axis"));
        }
        axes.push(cheb_points(m - 1)?);
        weights.push(cheb_point_weights(m - 1)?);
    }
    let approx = evaluate_on_tensor_grid(t, &axes)?;
    let mut sum = 0.0f64;
    for ((ix, &f), &p) in values.indexed_iter().zip(approx.iter()) {
        let w: f64 = ix.slice().iter().enumerate().map(|(a, &i)| weights[a][i]).product();
        sum += w * (f - p) * (f - p);
    }
    Ok(sum.sqrt())
}
