//! Volume polynomials for small signatures, printed and evaluated.
//!
//! ```text
//! cargo run --release --example volumes
//! ```

use wpvol::arith::rat;
use wpvol::recursion::{true_volume, Signature, VolumeTable};

fn main() -> wpvol::Result<()> {
    let mut table = VolumeTable::new();
    for (g, n) in [(0, 4), (1, 1), (1, 2), (0, 5), (2, 1)] {
        let s = Signature::new(g, n)?;
        table.ensure(s)?;
        let v = true_volume(s, &table)?;
        println!("V_{{{g},{n}}}(L) = {v}");
    }

    // V_{2,1} at L = 1/2, exactly and as a float.
    let s = Signature::new(2, 1)?;
    let x = rat(1, 2);
    let value = true_volume(s, &table)?.eval_squares(&[&x * &x])?;
    println!("V_{{2,1}}(1/2) = {value} ~ {:.6}", value.to_f64()?);
    Ok(())
}
