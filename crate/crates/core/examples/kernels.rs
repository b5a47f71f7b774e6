//! Closed-form kernel polynomials and their quadrature cross-check.

use wpvol::kernels::{kernel_double, kernel_f, shifted_kernel};
use wpvol::oracle;

fn main() -> wpvol::Result<()> {
    for k in 0..=3 {
        println!("F_{}(t) = {}", 2 * k + 1, kernel_f(k).to_lpoly());
    }
    println!("G_0,0(t) = {}", kernel_double(0, 0).to_lpoly());
    println!("shifted F_1(x,y) = {}", shifted_kernel(0));

    let t = 5.0;
    let q = oracle::quad_f(4, t)?;
    println!("F_9(5): closed {:.12e}, quadrature {:.12e} +- {:.1e}", kernel_f(4).eval_f64(t)?, q.value, q.error);

    for r in oracle::full_report()? {
        println!(
            "{} {:<40} dev {:.2e} tol {:.0e}",
            if r.pass { "ok  " } else { "FAIL" },
            r.check,
            r.max_abs_dev,
            r.tolerance
        );
    }
    Ok(())
}
