//! Convergence of truncated expansions of 1/(1 + 10|x|²) in two dimensions.
//! Total degree converges visibly slower than Euclidean or max degree.

use chebdeg::cheb::GridSpec;
use chebdeg::degree::DegreeFamily;
use chebdeg::lab::{self, PreparedSweep};

fn main() -> chebdeg::Result<()> {
    let tf = lab::runge_f(2)?;
    let sweep = PreparedSweep::new(&tf, 48, &GridSpec::chebyshev(201))?;
    let ns: Vec<usize> = (2..=28).step_by(2).collect();

    let reports: Vec<_> = DegreeFamily::ALL
        .iter()
        .map(|&f| sweep.report(f, &ns, lab::DEFAULT_FIT_WINDOW))
        .collect::<Result<_, _>>()?;

    println!("{:>3} {:>12} {:>12} {:>12}", "n", "total", "euclidean", "max");
    for (i, n) in ns.iter().enumerate() {
        let e: Vec<f64> = reports.iter().map(|r| r.records[i].max_error).collect();
        println!("{n:>3} {:>12.3e} {:>12.3e} {:>12.3e}", e[0], e[1], e[2]);
    }
    println!();
    for r in &reports {
        let fitted = r.fitted_rate.map_or("-".to_string(), |v| format!("{v:.5}"));
        println!(
            "{:>9}: fitted rate {fitted}, predicted {:.5}",
            r.family.name(),
            r.theoretical_rate
        );
    }
    Ok(())
}
