//! Runs the string, dilaton, DVV and Do relation suites and counts the results.

use wpvol::intersection::{self, CheckRecord, TauTable};
use wpvol::recursion::VolumeTable;

fn tally(name: &str, records: &[CheckRecord]) {
    let failed = records.iter().filter(|r| !r.pass).count();
    println!("{name:<11} {:>5} checks, {failed} failed", records.len());
}

fn main() -> wpvol::Result<()> {
    let max_dim = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let table = VolumeTable::build(max_dim, 1)?;
    let taus = TauTable::from_volumes(&table)?;
    println!("{} volumes with 3g-3+n <= {max_dim}", table.len());

    tally("string", &intersection::string_suite(&taus)?);
    tally("dilaton", &intersection::dilaton_suite(&taus)?);
    tally("dvv", &intersection::dvv_suite(&taus)?);
    tally("do-string", &intersection::do_string_suite(&table)?);
    tally("do-dilaton", &intersection::do_dilaton_suite(&table)?);

    let sample = intersection::check_dvv(&taus, 2, &[4])?;
    println!("{}", serde_json::to_string_pretty(&sample)?);
    Ok(())
}
