//! Degrees of freedom needed by total and max degree to match the accuracy
//! of Euclidean degree, as the dimension grows.

use chebdeg::degree::{self, DegreeFamily};

fn main() -> chebdeg::Result<()> {
    println!("{:>3} {:>12} {:>14}", "s", "total/eucl", "max/eucl");
    for s in 1..=12 {
        let total = degree::dof_ratio(s, DegreeFamily::Total)?;
        let max = degree::dof_ratio(s, DegreeFamily::Max)?;
        println!("{s:>3} {total:>12.4} {max:>14.4}");
    }
    Ok(())
}
