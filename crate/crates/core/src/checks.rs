//! Randomized and grid-based verification of the ellipse geometry and the
//! inequalities in [`crate::regions`].
//!
//! Each check returns a [`CheckOutcome`]; any failure is a counterexample to
//! a proven statement and therefore an implementation bug. Sampling uses a
//! seeded ChaCha generator so reruns are identical.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::degree::MultiIndex;
use crate::regions::{
    assumption_a_halfplane, assumption_a_member, bernstein_level, h_from_rho, in_bernstein_ellipse, lemma2_witness,
    lemma4_gap, minkowski_contained, psi, psi_second_derivative, rho_from_h, EllipseRho, NewtonEllipse,
};
use crate::Error;

pub const DEFAULT_SEED: u64 = 7;

/// Points this close to a boundary (in the level-set function) are skipped.
pub const BOUNDARY_BAND: f64 = 1e-9;

pub const LEMMA4_TOL: f64 = 1e-12;
pub const PSI_FD_STEP: f64 = 1e-4;
pub const PSI_FD_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub samples: usize,
    /// Samples skipped for lying inside the boundary band.
    pub skipped: usize,
    pub failures: usize,
    /// Largest violation measure seen (meaning depends on the check).
    pub worst: f64,
    pub tolerance: f64,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, tolerance: f64) -> Self {
        CheckOutcome {
            name,
            samples: 0,
            skipped: 0,
            failures: 0,
            worst: 0.0,
            tolerance,
            first_failure: None,
        }
    }

    fn fail(&mut self, detail: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `lemma4_gap(h, c) ≥ -1e-12` on `h ∈ {0, 0.01, …, 10}`, `c ∈ {0, 0.001, …, 1}`.
pub fn lemma4_grid() -> CheckOutcome {
    let mut out = CheckOutcome::new("lemma4-gap-grid", LEMMA4_TOL);
    for i in 0..=1000 {
        let h = i as f64 / 100.0;
        for j in 0..=1000 {
            let c = j as f64 / 1000.0;
            out.samples += 1;
            match lemma4_gap(h, c) {
                Ok(gap) => {
                    out.worst = out.worst.max(-gap);
                    if gap < -LEMMA4_TOL {
                        out.fail(|| format!("gap {gap} at h = {h}, c = {c}"));
                    }
                }
                Err(e) => out.fail(|| e.to_string()),
            }
        }
    }
    out
}

/// Closed-form `ψ''` against a centered second difference of `ψ`, relative
/// error, for `h ∈ [0.25, 4]` and `c ∈ [0.01, 1]`.
pub fn psi_finite_difference(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("psi-second-derivative", PSI_FD_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = PSI_FD_STEP;
    for _ in 0..samples {
        let h = rng.gen_range(0.25..=4.0);
        let c = rng.gen_range(0.01..=1.0);
        out.samples += 1;
        let fd = (psi(h, c + step) - 2.0 * psi(h, c) + psi(h, c - step)) / (step * step);
        match psi_second_derivative(h, c) {
            Ok(exact) => {
                let rel = ((fd - exact) / exact).abs();
                out.worst = out.worst.max(rel);
                if rel > PSI_FD_TOL || exact > 0.0 {
                    out.fail(|| format!("h = {h}, c = {c}: closed form {exact}, difference {fd}"));
                }
            }
            Err(e) => out.fail(|| e.to_string()),
        }
    }
    out
}

/// [`lemma2_witness`] on random `(k, h)`: `s ∈ 1..=6`, `k_j ∈ 0..=60`, `h ∈ (0, 10]`.
/// `worst` is the largest relative residual of the product identity.
pub fn witness_identity(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("witness-product-identity", crate::regions::WITNESS_IDENTITY_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.samples < samples {
        let s = rng.gen_range(1..=6);
        let k: Vec<usize> = (0..s).map(|_| rng.gen_range(0..=60)).collect();
        if k.iter().all(|&v| v == 0) {
            continue;
        }
        let h = rng.gen_range(1e-3..=10.0);
        out.samples += 1;
        let k = MultiIndex::new(k).expect("s >= 1");
        match lemma2_witness(&k, h) {
            Ok(w) => {
                let rel = ((w.product() - w.target()) / w.target()).abs();
                out.worst = out.worst.max(rel);
                let norm: f64 = w.c.iter().map(|v| v * v).sum();
                if (norm - 1.0).abs() > 1e-13 || (w.h_axis_sum_squares() - h * h).abs() > 1e-12 * h * h.max(1.0) {
                    out.fail(|| format!("normalization broken for k = {k}, h = {h}"));
                }
            }
            Err(e) => out.fail(|| e.to_string()),
        }
    }
    out
}

fn random_ellipse(rng: &mut ChaCha8Rng) -> NewtonEllipse {
    let s = rng.gen_range(0.1..=10.0);
    let a = rng.gen_range(0.01..=5.0);
    NewtonEllipse::new(s, a).expect("positive parameters")
}

// rejection sample from the bounding box
fn interior_point(rng: &mut ChaCha8Rng, e: &NewtonEllipse) -> Complex64 {
    let (c, a, b) = e.semi_axes();
    loop {
        let x = Complex64::new(rng.gen_range(c - a..=c + a), rng.gen_range(-b..=b));
        if e.contains(x) {
            return x;
        }
    }
}

// a boundary point pulled toward the center by a relative amount in [1e-12, 1e-6]
fn near_boundary_point(rng: &mut ChaCha8Rng, e: &NewtonEllipse, theta: f64) -> Complex64 {
    let (c, a, b) = e.semi_axes();
    loop {
        let shrink = 1.0 - 10f64.powf(rng.gen_range(-12.0..=-6.0));
        let x = Complex64::new(c + shrink * a * theta.cos(), shrink * b * theta.sin());
        if e.contains(x) {
            return x;
        }
    }
}

/// `x + y ∈ N_{s+t,a+b}` for interior `x ∈ N_{s,a}`, `y ∈ N_{t,b}`.
///
/// Four in five samples are rejection-sampled from the interior; the rest
/// are pairs of near-boundary points, half of them at the leftmost points.
pub fn minkowski_random(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("minkowski-containment", 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let e1 = random_ellipse(&mut rng);
        let e2 = random_ellipse(&mut rng);
        let (x, y) = match i % 10 {
            8 => {
                let pi = std::f64::consts::PI;
                (
                    near_boundary_point(&mut rng, &e1, pi),
                    near_boundary_point(&mut rng, &e2, pi),
                )
            }
            9 => {
                let t1 = rng.gen_range(0.0..std::f64::consts::TAU);
                let t2 = rng.gen_range(0.0..std::f64::consts::TAU);
                (
                    near_boundary_point(&mut rng, &e1, t1),
                    near_boundary_point(&mut rng, &e2, t2),
                )
            }
            _ => (interior_point(&mut rng, &e1), interior_point(&mut rng, &e2)),
        };
        out.samples += 1;
        match minkowski_contained(&e1, &e2, x, y) {
            Ok(true) => {
                let excess = e1.minkowski_bound(&e2).focal_excess(x + y);
                out.worst = out.worst.max(excess);
            }
            Ok(false) => out.fail(|| format!("{x} + {y} escapes for {e1:?} ⊕ {e2:?}")),
            Err(Error::Precondition(msg)) => out.fail(|| format!("sampler produced exterior point: {msg}")),
            Err(e) => out.fail(|| e.to_string()),
        }
    }
    out
}

/// `x ∈ E_ρ ⟺ x² ∈ N_{1,h²}` on random complex `x` around random ellipses.
pub fn hooke_newton_squaring(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("squaring-equivalence", BOUNDARY_BAND);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.samples + out.skipped < samples {
        let rho = rng.gen_range(1.01..=3.0);
        let e = EllipseRho::new(rho).expect("rho > 1");
        let newton = e.squared_image();
        let (a, b) = (e.semi_major() * 1.3, e.h() * 1.3 + 0.05);
        let x = Complex64::new(rng.gen_range(-a..=a), rng.gen_range(-b..=b));
        let level = bernstein_level(x);
        let excess = newton.focal_excess(x * x);
        if (level - rho).abs() < BOUNDARY_BAND || excess.abs() < BOUNDARY_BAND {
            out.skipped += 1;
            continue;
        }
        out.samples += 1;
        if in_bernstein_ellipse(x, &e) != newton.contains(x * x) {
            out.fail(|| format!("x = {x}, rho = {rho}: level {level}, focal excess {excess}"));
        }
    }
    out
}

/// Focal-sum membership against the axis-aligned ellipse equation.
pub fn newton_characterizations(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("newton-ellipse-characterizations", BOUNDARY_BAND);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.samples + out.skipped < samples {
        let e = random_ellipse(&mut rng);
        let (c, a, b) = e.semi_axes();
        let x = Complex64::new(
            rng.gen_range(c - 1.3 * a..=c + 1.3 * a),
            rng.gen_range(-1.3 * b..=1.3 * b),
        );
        let (u, v) = ((x.re - c) / a, x.im / b);
        let quad = u * u + v * v - 1.0;
        let excess = e.focal_excess(x);
        if quad.abs() < BOUNDARY_BAND || excess.abs() < BOUNDARY_BAND {
            out.skipped += 1;
            continue;
        }
        out.samples += 1;
        if e.contains(x) != e.contains_by_axes(x) {
            out.fail(|| format!("x = {x} for {e:?}: focal excess {excess}, quadratic {quad}"));
        }
    }
    out
}

/// Membership in `{Σ x_j² ∈ N_{s,h²}}` implies the half-plane `Re Σ x_j² > -h²`.
pub fn assumption_a_halfplane_implied(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("assumption-a-halfplane", 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let s = rng.gen_range(1..=4);
        let h = rng.gen_range(0.05..=2.0);
        let x: Vec<Complex64> = (0..s)
            .map(|_| Complex64::new(rng.gen_range(-1.5..=1.5), rng.gen_range(-0.8..=0.8)))
            .collect();
        out.samples += 1;
        let member = assumption_a_member(&x, s, h).expect("valid arguments");
        let half = assumption_a_halfplane(&x, s, h).expect("valid arguments");
        if member && !half {
            out.fail(|| format!("{x:?} with h = {h} is a member but fails the half-plane test"));
        }
    }
    out
}

/// `h_from_rho(rho_from_h(h)) = h` to `1e-14` (absolute, scaled by `max(h, 1)`).
pub fn rho_h_round_trip(seed: u64, samples: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("rho-h-round-trip", 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let h: f64 = rng.gen_range(0.0..=10.0);
        out.samples += 1;
        let back = rho_from_h(h).and_then(h_from_rho).expect("h >= 0");
        let err = (back - h).abs() / h.max(1.0);
        out.worst = out.worst.max(err);
        if err > 1e-14 {
            out.fail(|| format!("h = {h} came back as {back}"));
        }
    }
    out
}

/// Everything behind the `regions-check` command.
pub fn regions_suite(seed: u64) -> Vec<CheckOutcome> {
    vec![
        hooke_newton_squaring(seed, 10_000),
        newton_characterizations(seed.wrapping_add(1), 10_000),
        assumption_a_halfplane_implied(seed.wrapping_add(2), 10_000),
        rho_h_round_trip(seed.wrapping_add(3), 10_000),
    ]
}

/// Everything behind the `lemma-check` command.
pub fn lemma_suite(seed: u64) -> Vec<CheckOutcome> {
    vec![
        lemma4_grid(),
        minkowski_random(seed, 10_000),
        witness_identity(seed.wrapping_add(1), 1_000),
        psi_finite_difference(seed.wrapping_add(2), 1_000),
    ]
}
