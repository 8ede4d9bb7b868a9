//! Interpolate a 2D function at Chebyshev points, inspect its coefficients
//! and evaluate a truncated expansion.

use chebdeg::cheb::{self, GridSpec};
use chebdeg::degree::DegreeFamily;

fn f(x: &[f64]) -> f64 {
    (x[0] * x[1]).sin() + x[0] * x[0]
}

fn main() -> chebdeg::Result<()> {
    let t = cheb::tensor_cheb_transform(f, 2, 16)?;
    println!("largest coefficients:");
    let mut coeffs: Vec<(Vec<usize>, f64)> = t
        .coeffs()
        .indexed_iter()
        .map(|(ix, &a)| (vec![ix[0], ix[1]], a))
        .collect();
    coeffs.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    for (k, a) in coeffs.iter().take(6) {
        println!("  a{k:?} = {a:+.6e}");
    }

    let grid = GridSpec::chebyshev(101);
    for n in [2.0, 4.0, 8.0] {
        let trunc = cheb::truncate(&t, n, DegreeFamily::Euclidean)?;
        let err = cheb::max_error(f, &trunc, &grid)?;
        println!(
            "euclidean degree {n}: {} terms, max error {err:.3e}",
            trunc.support().len()
        );
    }

    let x = [0.3, -0.7];
    println!("f{x:?} = {:.12}, interpolant = {:.12}", f(&x), cheb::evaluate(&t, &x)?);
    Ok(())
}
