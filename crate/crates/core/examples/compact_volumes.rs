//! Volumes of closed moduli spaces M_g, recovered from V_{g,1}.

use std::time::Instant;

use wpvol::intersection::{compact_volume, zograf_ratio};
use wpvol::recursion::VolumeTable;

fn main() -> wpvol::Result<()> {
    let mut table = VolumeTable::new();
    for g in 2..=5 {
        let t = Instant::now();
        let v = compact_volume(&mut table, g)?;
        println!("V_{g} = {v}  ~ {:.6e}  ({:.2?})", v.to_f64()?, t.elapsed());
    }
    for g in 1..=5 {
        println!("zograf ratio g={g}: {:.6}", zograf_ratio(&table, g, 1)?);
    }
    Ok(())
}
