//! Bernstein ellipses, Newton ellipses and the inequalities that turn
//! analyticity of `f` in `{x : Σ x_j² ∈ N_{s,h²}}` into coefficient decay
//! `|a_k| ≲ ρ^{-‖k‖_2}`.
//!
//! All regions are open: points on a boundary are classified as outside.
//! Membership tests use a relative margin of a few ulps, so points that are
//! on a boundary in exact arithmetic stay outside after rounding.

use num_complex::Complex64;
use serde::Serialize;

use crate::degree::MultiIndex;
use crate::{Error, Result};

// relative margin separating "inside" from rounding noise on the boundary
const BOUNDARY_MARGIN: f64 = 4.0 * f64::EPSILON;

/// `ρ = h + √(1+h²)`.
pub fn rho_from_h(h: f64) -> Result<f64> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("h must be finite and >= 0, got {h}")));
    }
    Ok(h + h.hypot(1.0))
}

/// `h = (ρ - ρ⁻¹)/2`, the height of the topmost point of `E_ρ`.
pub fn h_from_rho(rho: f64) -> Result<f64> {
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::invalid(format!("rho must be finite and >= 1, got {rho}")));
    }
    Ok(0.5 * (rho - rho.recip()))
}

/// Bernstein ellipse `E_ρ`: foci `±1`, image of `|w| = ρ` under `(w + w⁻¹)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EllipseRho {
    rho: f64,
}

impl EllipseRho {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(Error::invalid(format!("Bernstein parameter must exceed 1, got {rho}")));
        }
        Ok(EllipseRho { rho })
    }

    pub fn from_h(h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::invalid(format!("h must be > 0, got {h}")));
        }
        Self::new(rho_from_h(h)?)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn h(&self) -> f64 {
        0.5 * (self.rho - self.rho.recip())
    }

    /// `(ρ + ρ⁻¹)/2`
    pub fn semi_major(&self) -> f64 {
        0.5 * (self.rho + self.rho.recip())
    }

    /// `x² ∈ N_{1,h²}` exactly when `x ∈ E_ρ`.
    pub fn squared_image(&self) -> NewtonEllipse {
        let h = self.h();
        NewtonEllipse {
            focus_span: 1.0,
            reach: h * h,
        }
    }
}

/// `max |x ± √(x²-1)|`: the `ρ` of the Bernstein ellipse through `x`.
///
/// The two roots multiply to one, so taking the larger modulus avoids any
/// dependence on the square-root branch cut.
pub fn bernstein_level(x: Complex64) -> f64 {
    let r = (x * x - 1.0).sqrt();
    (x + r).norm().max((x - r).norm())
}

pub fn in_bernstein_ellipse(x: Complex64, e: &EllipseRho) -> bool {
    bernstein_level(x) < e.rho * (1.0 - BOUNDARY_MARGIN)
}

/// `N_{s,a} = {x : |x| + |x - s| < s + 2a}`: foci `0` and `s`, leftmost point `-a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NewtonEllipse {
    focus_span: f64,
    reach: f64,
}

impl NewtonEllipse {
    pub fn new(focus_span: f64, reach: f64) -> Result<Self> {
        if !(focus_span > 0.0 && reach > 0.0) || !focus_span.is_finite() || !reach.is_finite() {
            return Err(Error::invalid(format!(
                "Newton ellipse needs s > 0 and a > 0, got s = {focus_span}, a = {reach}"
            )));
        }
        Ok(NewtonEllipse { focus_span, reach })
    }

    pub fn focus_span(&self) -> f64 {
        self.focus_span
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// `|x| + |x - s| - (s + 2a)`; negative inside.
    pub fn focal_excess(&self, x: Complex64) -> f64 {
        let s = self.focus_span;
        x.norm() + (x - s).norm() - (s + 2.0 * self.reach)
    }

    pub fn contains(&self, x: Complex64) -> bool {
        let bound = self.focus_span + 2.0 * self.reach;
        self.focal_excess(x) < -BOUNDARY_MARGIN * bound
    }

    /// Center and semi-axes `(c, A, B)` of the boundary ellipse.
    pub fn semi_axes(&self) -> (f64, f64, f64) {
        let center = 0.5 * self.focus_span;
        let major = center + self.reach;
        let minor = (major * major - center * center).sqrt();
        (center, major, minor)
    }

    /// Membership through the axis-aligned equation of the boundary ellipse.
    pub fn contains_by_axes(&self, x: Complex64) -> bool {
        let (c, a, b) = self.semi_axes();
        let u = (x.re - c) / a;
        let v = x.im / b;
        u * u + v * v < 1.0
    }

    /// Parameters of `N_{s,a} ⊕ N_{t,b} ⊆ N_{s+t,a+b}`.
    pub fn minkowski_bound(&self, other: &NewtonEllipse) -> NewtonEllipse {
        NewtonEllipse {
            focus_span: self.focus_span + other.focus_span,
            reach: self.reach + other.reach,
        }
    }
}

pub fn in_newton_ellipse(x: Complex64, e: &NewtonEllipse) -> bool {
    e.contains(x)
}

fn check_assumption_args(x: &[Complex64], s: usize, h: f64) -> Result<()> {
    if x.len() != s || s == 0 {
        return Err(Error::invalid(format!("expected a {s}-vector, got length {}", x.len())));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("h must be > 0, got {h}")));
    }
    Ok(())
}

fn sum_of_squares(x: &[Complex64]) -> Complex64 {
    x.iter().map(|v| v * v).sum()
}

/// Whether `x_1² + ⋯ + x_s² ∈ N_{s,h²}`.
pub fn assumption_a_member(x: &[Complex64], s: usize, h: f64) -> Result<bool> {
    check_assumption_args(x, s, h)?;
    let region = NewtonEllipse::new(s as f64, h * h)?;
    Ok(region.contains(sum_of_squares(x)))
}

/// The sufficient half-plane form: `Re(x_1² + ⋯ + x_s²) > -h²`.
pub fn assumption_a_halfplane(x: &[Complex64], s: usize, h: f64) -> Result<bool> {
    check_assumption_args(x, s, h)?;
    Ok(sum_of_squares(x).re > -h * h)
}

fn check_lemma_args(h: f64, c: f64) -> Result<()> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("h must be finite and >= 0, got {h}")));
    }
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::invalid(format!("c must lie in [0, 1], got {c}")));
    }
    Ok(())
}

/// `ψ(c) = log(ch + √(1 + c²h²))`.
pub fn psi(h: f64, c: f64) -> f64 {
    (c * h).asinh()
}

/// `ch + √(1 + c²h²) - (h + √(1+h²))^c`, nonnegative for `h ≥ 0`, `c ∈ [0,1]`.
pub fn lemma4_gap(h: f64, c: f64) -> Result<f64> {
    check_lemma_args(h, c)?;
    let ch = c * h;
    let lhs = ch + ch.hypot(1.0);
    let rhs = (h + h.hypot(1.0)).powf(c);
    Ok(lhs - rhs)
}

/// `ψ''(c) = -c h³ (1 + c²h²)^{-3/2}`.
pub fn psi_second_derivative(h: f64, c: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("h must be > 0, got {h}")));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::invalid(format!("c must lie in (0, 1], got {c}")));
    }
    let ch = c * h;
    Ok(-c * h.powi(3) * (1.0 + ch * ch).powf(-1.5))
}

/// Per-axis Bernstein parameters showing that analyticity in
/// `{Σ x_j² ∈ N_{s,h²}}` covers an elliptic polycylinder adapted to `k`.
///
/// With `c_j = k_j/‖k‖_2` and `h_j = c_j h`, each coordinate may range over
/// `E_{ρ̂_j}` with `ρ̂_j = h_j + √(1+h_j²)`. The smaller `ρ_j = ρ^{c_j}`
/// satisfy `Π ρ_j^{-k_j} = ρ^{-‖k‖_2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyEllipseWitness {
    pub k: MultiIndex,
    pub h: f64,
    pub c: Vec<f64>,
    pub h_axis: Vec<f64>,
    pub rho_hat: Vec<f64>,
    pub rho_bound: Vec<f64>,
}

impl PolyEllipseWitness {
    pub fn rho(&self) -> f64 {
        self.h + self.h.hypot(1.0)
    }

    /// `Π ρ_j^{-k_j}`
    pub fn product(&self) -> f64 {
        let log: f64 = self
            .k
            .entries()
            .iter()
            .zip(&self.rho_bound)
            .map(|(&k, r)| -(k as f64) * r.ln())
            .sum();
        log.exp()
    }

    /// `ρ^{-‖k‖_2}`
    pub fn target(&self) -> f64 {
        self.rho().powf(-self.k.l2())
    }

    /// `Σ h_j²`, equal to `h²`.
    pub fn h_axis_sum_squares(&self) -> f64 {
        self.h_axis.iter().map(|v| v * v).sum()
    }
}

/// Relative tolerance for the product identity in [`lemma2_witness`].
pub const WITNESS_IDENTITY_TOL: f64 = 1e-12;

/// Builds the witness for `k` and verifies `ρ̂_j ≥ ρ_j` and the product
/// identity, failing with [`Error::Falsified`] if either breaks.
pub fn lemma2_witness(k: &MultiIndex, h: f64) -> Result<PolyEllipseWitness> {
    if k.is_zero() {
        return Err(Error::invalid("witness needs a nonzero multi-index"));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("h must be > 0, got {h}")));
    }
    let norm = k.l2();
    let rho = rho_from_h(h)?;
    let c: Vec<f64> = k.entries().iter().map(|&kj| kj as f64 / norm).collect();
    let h_axis: Vec<f64> = c.iter().map(|cj| cj * h).collect();
    let rho_hat: Vec<f64> = h_axis.iter().map(|hj| hj + hj.hypot(1.0)).collect();
    let rho_bound: Vec<f64> = c.iter().map(|&cj| rho.powf(cj)).collect();
    let w = PolyEllipseWitness {
        k: k.clone(),
        h,
        c,
        h_axis,
        rho_hat,
        rho_bound,
    };
    for (j, (hat, bound)) in w.rho_hat.iter().zip(&w.rho_bound).enumerate() {
        // one ulp of slack on each side of a true inequality
        if *hat < bound * (1.0 - 4.0 * f64::EPSILON) {
            return Err(Error::Falsified(format!(
                "rho_hat[{j}] = {hat} < rho_bound[{j}] = {bound} for k = {k}, h = {h}"
            )));
        }
    }
    let (p, t) = (w.product(), w.target());
    if ((p - t) / t).abs() > WITNESS_IDENTITY_TOL {
        return Err(Error::Falsified(format!(
            "product identity: {p} vs {t} for k = {k}, h = {h}"
        )));
    }
    Ok(w)
}

/// Checks `x + y ∈ N_{s+t,a+b}` for `x ∈ N_{s,a}`, `y ∈ N_{t,b}`.
///
/// Inputs outside their ellipses give [`Error::Precondition`]; `Ok(false)`
/// would be a counterexample to the containment.
pub fn minkowski_contained(e1: &NewtonEllipse, e2: &NewtonEllipse, x: Complex64, y: Complex64) -> Result<bool> {
    if !e1.contains(x) {
        return Err(Error::Precondition(format!(
            "{x} is not inside N_{{{}, {}}}",
            e1.focus_span, e1.reach
        )));
    }
    if !e2.contains(y) {
        return Err(Error::Precondition(format!(
            "{y} is not inside N_{{{}, {}}}",
            e2.focus_span, e2.reach
        )));
    }
    Ok(e1.minkowski_bound(e2).contains(x + y))
}
