//! Multivariate Chebyshev approximation in the hypercube `[-1, 1]^s` under
//! three notions of polynomial degree.
//!
//! For a monomial with exponent vector `k = (k_1, ..., k_s)`:
//!
//! | Degree    | Functional  |
//! |-----------|-------------|
//! | Total     | `‖k‖_1`     |
//! | Euclidean | `‖k‖_2`     |
//! | Max       | `‖k‖_∞`     |
//!
//! For functions analytic wherever `x_1² + ⋯ + x_s²` lies in the Newton
//! ellipse `N_{s,h²}`, truncating the Chebyshev series at Euclidean or max
//! degree `n` converges like `ρ^{-n}` with `ρ = h + √(1+h²)`, while total
//! degree only achieves `ρ^{-n/√s}`. The crate provides the pieces needed to
//! observe that separation numerically:
//!
//! * [`degree`]: degree functionals, index-set enumeration and counting,
//!   asymptotic degrees-of-freedom ratios.
//! * [`cheb`]: Chebyshev points, 1D and tensor-product transforms,
//!   truncation, Clenshaw evaluation and error measurement.
//! * [`regions`]: Bernstein and Newton ellipses and executable forms of the
//!   inequalities behind the coefficient decay bound.
//! * [`lab`]: Runge-type test functions, convergence sweeps and rate fits.
//! * [`checks`]: randomized and grid-based verification suites.
//! * [`cli`]: the `chebdeg` command line front end and its output formats.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cheb;
pub mod checks;
pub mod cli;
pub mod degree;
mod error;
pub mod lab;
pub mod regions;

pub use cheb::{ChebTensor, GridKind, GridSpec};
pub use degree::{DegreeFamily, MultiIndex};
pub use error::{Error, Result};
pub use lab::{ConvergenceReport, Record, TestFunction};
pub use regions::{EllipseRho, NewtonEllipse, PolyEllipseWitness};
