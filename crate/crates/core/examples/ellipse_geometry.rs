//! Bernstein and Newton ellipses: membership, squaring and Minkowski sums.

use chebdeg::regions::{self, EllipseRho, NewtonEllipse};
use num_complex::Complex64;

fn main() -> chebdeg::Result<()> {
    let h = 0.1f64.sqrt();
    let e = EllipseRho::from_h(h)?;
    println!(
        "h = {h:.6}: rho = {:.7}, semi-axes {:.5} x {:.5}",
        e.rho(),
        e.semi_major(),
        e.h()
    );

    let newton = e.squared_image();
    for x in [
        Complex64::new(0.0, 0.3),
        Complex64::new(1.05, 0.0),
        Complex64::new(0.5, 0.2),
    ] {
        println!(
            "x = {x}: level {:.4}, in E_rho {}, x² in N_(1,h²) {}",
            regions::bernstein_level(x),
            regions::in_bernstein_ellipse(x, &e),
            newton.contains(x * x)
        );
    }

    // the region where x_1² + x_2² must stay for the Runge function to be analytic
    let region = NewtonEllipse::new(2.0, h * h)?;
    let (c, a, b) = region.semi_axes();
    println!("\nN_(2,h²): center {c}, semi-axes {a:.4} x {b:.4}");
    for x in [
        vec![Complex64::new(0.0, 0.2), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.32), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.9, 0.1), Complex64::new(-0.9, 0.1)],
    ] {
        println!(
            "({}, {}): inside {}",
            x[0],
            x[1],
            regions::assumption_a_member(&x, 2, h)?
        );
    }

    let e1 = NewtonEllipse::new(1.0, 0.1)?;
    let e2 = NewtonEllipse::new(2.0, 0.3)?;
    let (x, y) = (Complex64::new(0.5, 0.2), Complex64::new(1.9, -0.4));
    println!(
        "\nx + y in N_(3,0.4): {}",
        regions::minkowski_contained(&e1, &e2, x, y)?
    );
    Ok(())
}
