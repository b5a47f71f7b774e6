//! JSON forms of volumes and of the whole table.
//!
//! The cache file stores volumes in the recursion's internal convention
//! (halved `V_{1,1}`); a file stamped with any other convention is refused.
//! Entries are re-checked against the structural invariants on load.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LPoly, TermRecord};
use crate::recursion::{Signature, VolumeTable};

pub const FORMAT_VERSION: u32 = 1;
pub const CONVENTION: &str = "internal-halved-v11";
pub const TOOL: &str = "wpvol";

/// `{"g":…, "n":…, "terms":[…]}` with terms in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeRecord {
    pub g: u32,
    pub n: u32,
    pub terms: Vec<TermRecord>,
}

impl VolumeRecord {
    pub fn new(s: Signature, v: &LPoly) -> Self {
        Self { g: s.g, n: s.n, terms: v.to_records() }
    }

    pub fn to_lpoly(&self) -> Result<LPoly> {
        LPoly::from_records(self.n as usize, &self.terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub convention: String,
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            convention: CONVENTION.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub format_version: u32,
    pub provenance: Provenance,
    /// `"g,n"` → term list.
    pub volumes: BTreeMap<String, Vec<TermRecord>>,
}

impl CacheFile {
    pub fn from_table(table: &VolumeTable) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            provenance: Provenance::default(),
            volumes: table_terms(table),
        }
    }

    pub fn into_table(self) -> Result<VolumeTable> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "format version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.provenance.convention != CONVENTION {
            return Err(Error::Cache(format!(
                "convention {:?} (expected {CONVENTION:?})",
                self.provenance.convention
            )));
        }
        let mut table = VolumeTable::new();
        for (key, terms) in &self.volumes {
            let s = Signature::parse_key(key)?;
            let v = LPoly::from_records(s.n as usize, terms)?;
            table.insert(s, v)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// The table as a `"g,n"` → term-list map.
pub fn table_terms(table: &VolumeTable) -> BTreeMap<String, Vec<TermRecord>> {
    table.iter().map(|(s, v)| (s.key(), v.to_records())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let table = VolumeTable::build(3, 1).unwrap();
        let text = CacheFile::from_table(&table).to_json().unwrap();
        let back = CacheFile::from_json(&text).unwrap().into_table().unwrap();
        assert_eq!(back.len(), table.len());
        assert_eq!(CacheFile::from_table(&back).to_json().unwrap(), text);
    }

    #[test]
    fn foreign_convention_rejected() {
        let table = VolumeTable::build(1, 1).unwrap();
        let mut file = CacheFile::from_table(&table);
        file.provenance.convention = "true-volumes".into();
        assert!(matches!(file.into_table(), Err(Error::Cache(_))));
    }

    #[test]
    fn corrupted_entry_rejected() {
        let table = VolumeTable::build(1, 1).unwrap();
        let mut file = CacheFile::from_table(&table);
        let terms = file.volumes.get_mut("0,4").unwrap();
        terms[1].coeff = crate::arith::rat(1, 3);
        assert!(matches!(file.into_table(), Err(Error::Invariant { .. })));
    }

    #[test]
    fn volume_record_shape() {
        let table = VolumeTable::build(0, 1).unwrap();
        let rec = VolumeRecord::new(Signature { g: 0, n: 3 }, table.get(Signature { g: 0, n: 3 }).unwrap());
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"g":0,"n":3,"terms":[{"alpha":[0,0,0],"pi_power":0,"coeff":"1"}]}"#
        );
        assert_eq!(rec.to_lpoly().unwrap(), LPoly::one(3));
    }
}
