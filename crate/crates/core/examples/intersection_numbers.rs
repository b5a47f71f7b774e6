//! Psi and kappa intersection numbers read off volume coefficients.

use wpvol::intersection::{tau_kappa, TauTable};
use wpvol::recursion::{Signature, VolumeTable};
use wpvol::MultiIndex;

fn main() -> wpvol::Result<()> {
    let table = VolumeTable::build(4, 1)?;
    let taus = TauTable::from_volumes(&table)?;

    for (g, alpha) in [(0, vec![0, 0, 0]), (0, vec![1, 0, 0, 0]), (1, vec![1]), (2, vec![4]), (1, vec![2, 1, 0])] {
        println!("<tau{alpha:?}>_{g} = {}", taus.get(g, &alpha)?);
    }

    // Mixed classes: kappa_1^m tau_alpha with m filling the dimension.
    let mut table = table;
    table.ensure(Signature::new(2, 1)?)?;
    for alpha in [vec![0], vec![2], vec![3]] {
        let v = tau_kappa(&table, 2, &MultiIndex::new(alpha.clone()))?;
        println!(
            "<kappa_1^{} tau{alpha:?}>_2 = {}   (omega form: {})",
            v.kappa_power, v.kappa, v.omega
        );
    }
    Ok(())
}
