//! On-disk catalog of the scheme classes of one degree.

use serde::{Deserialize, Serialize};

use crate::enumeration::{burnside_count, enumerate_schemes_parallel, primitive_family, raw_pair_count};
use crate::error::{Error, Result};
use crate::scheme::LabelingScheme;

pub const CATALOG_VERSION: &str = concat!("planar-cayley ", env!("CARGO_PKG_VERSION"));

/// Reference class counts for degrees 1 to 6, from the literature.
pub fn reference_count(d: usize) -> Option<usize> {
    [0, 1, 8, 26, 64, 253].get(d.checked_sub(1)?).copied()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub scheme: LabelingScheme,
    pub primitive_vector: Vec<usize>,
    pub family_pattern: String,
    pub class_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogCounts {
    pub classes: usize,
    pub raw_pairs: usize,
    pub burnside: usize,
    /// The reference count, when there is one.
    pub reference: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub version: String,
    pub degree: usize,
    pub entries: Vec<CatalogEntry>,
    pub counts: CatalogCounts,
}

impl CatalogFile {
    pub fn build(d: usize, jobs: usize) -> Result<Self> {
        let classes = enumerate_schemes_parallel(d, jobs)?;
        let entries: Vec<CatalogEntry> = classes
            .into_iter()
            .map(|c| {
                let s = c.representative;
                CatalogEntry {
                    primitive_vector: s.primitive_vector().0,
                    family_pattern: if d >= 3 {
                        primitive_family(&s).to_string()
                    } else {
                        String::new()
                    },
                    class_size: c.class_size,
                    scheme: s,
                }
            })
            .collect();
        let counts = CatalogCounts {
            classes: entries.len(),
            raw_pairs: raw_pair_count(d),
            burnside: burnside_count(d)?,
            reference: reference_count(d),
        };
        let file = CatalogFile {
            version: CATALOG_VERSION.to_string(),
            degree: d,
            entries,
            counts,
        };
        file.check()?;
        Ok(file)
    }

    /// The count invariants: entries, Burnside and raw pairs agree.
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScheme(format!("catalog: {m}")));
        if self.counts.classes != self.entries.len() {
            return bad(format!("{} entries but {} classes", self.entries.len(), self.counts.classes));
        }
        if self.counts.burnside != self.entries.len() {
            return bad(format!("Burnside count {} differs from {} entries", self.counts.burnside, self.entries.len()));
        }
        if self.degree >= 3 {
            let total: usize = self.entries.iter().map(|e| e.class_size).sum();
            if total != self.counts.raw_pairs {
                return bad(format!("class sizes sum to {total}, not {}", self.counts.raw_pairs));
            }
        }
        for e in &self.entries {
            if e.scheme.degree() != self.degree {
                return bad(format!("entry {} has the wrong degree", e.scheme));
            }
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: CatalogFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidScheme(format!("catalog: {e}")))?;
        file.check()?;
        Ok(file)
    }
}
