//! The inequalities behind the coefficient bound, checked numerically.

use chebdeg::checks;
use chebdeg::regions;
use chebdeg::MultiIndex;

fn main() -> chebdeg::Result<()> {
    for (h, c) in [(1.0, 0.5), (0.3, 0.9), (5.0, 0.2)] {
        println!(
            "h={h} c={c}: gap {:.6}, psi'' {:.6}",
            regions::lemma4_gap(h, c)?,
            regions::psi_second_derivative(h, c)?
        );
    }

    let k = MultiIndex::new(vec![3, 4])?;
    let w = regions::lemma2_witness(&k, 0.1f64.sqrt())?;
    println!("\nwitness for k = {k}");
    for j in 0..2 {
        println!(
            "  c={:.2} h_j={:.5} rho_hat={:.6} >= rho_j={:.6}",
            w.c[j], w.h_axis[j], w.rho_hat[j], w.rho_bound[j]
        );
    }
    println!("  product {:.12} = rho^-5 {:.12}", w.product(), w.target());

    println!();
    for o in checks::lemma_suite(checks::DEFAULT_SEED)
        .into_iter()
        .chain(checks::regions_suite(checks::DEFAULT_SEED))
    {
        println!(
            "{:<28} samples {:>6} worst {:.2e} {}",
            o.name,
            o.samples,
            o.worst,
            if o.passed() { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
