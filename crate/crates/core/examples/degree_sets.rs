//! Index sets under the three degree notions, and how fast they grow.

use chebdeg::degree::{self, DegreeFamily};

fn main() -> chebdeg::Result<()> {
    for family in DegreeFamily::ALL {
        let set = degree::enumerate_index_set(2, 3.0, family)?;
        let shown: Vec<String> = set.iter().map(|k| format!("{k}")).collect();
        println!("{:>9} n=3: {} indices  {}", family.name(), set.len(), shown.join(" "));
    }

    println!("\ncounts in s=4");
    println!("{:>4} {:>10} {:>10} {:>10}", "n", "total", "euclidean", "max");
    for n in [4, 8, 16, 32] {
        let c: Vec<u64> = DegreeFamily::ALL
            .iter()
            .map(|&f| degree::count_index_set(4, n as f64, f))
            .collect::<Result<_, _>>()?;
        println!("{n:>4} {:>10} {:>10} {:>10}", c[0], c[1], c[2]);
    }
    Ok(())
}
