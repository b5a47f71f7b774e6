//! Builds a table on several threads, saves it, reloads it and checks the round trip.

use wpvol::cache::CacheFile;
use wpvol::recursion::VolumeTable;

fn main() -> wpvol::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let table = VolumeTable::build(6, threads)?;
    let file = CacheFile::from_table(&table);

    let path = std::env::temp_dir().join("wpvol-table.json");
    file.save(&path)?;
    let reloaded = CacheFile::load(&path)?.into_table()?;
    let same = CacheFile::from_table(&reloaded).to_json()? == file.to_json()?;

    println!("{} volumes on {threads} threads -> {}", table.len(), path.display());
    println!("round trip identical: {same}");
    for (s, v) in table.iter().take(6) {
        println!("  {:>4}: {} terms", s.key(), v.len());
    }
    Ok(())
}
