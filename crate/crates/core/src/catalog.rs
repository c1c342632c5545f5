//! The bundled catalog of hypo structures and the classification table.
//!
//! Catalog records are `algebra | id | label | α | ω1 | ω2 | ω3`, one per
//! line, with `#` comments. The bundled file can be replaced by pointing the
//! `HYPO_CATALOG` environment variable at another file in the same format.

use std::path::Path;

use crate::error::{HypoError, Result};
use crate::exterior::LieAlgebra;
use crate::su2::SU2Structure;

pub const CATALOG_ENV: &str = "HYPO_CATALOG";

const BUNDLED: &str = include_str!("../data/catalog.txt");

/// One row of the classification table of 5-dimensional nilpotent Lie algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub algebra: &'static str,
    pub step: usize,
    pub b2: usize,
    pub admits_hypo: bool,
}

pub const TABLE: [TableRow; 9] = [
    TableRow {
        algebra: "(0,0,12,13,14+23)",
        step: 4,
        b2: 3,
        admits_hypo: false,
    },
    TableRow {
        algebra: "(0,0,12,13,14)",
        step: 4,
        b2: 3,
        admits_hypo: true,
    },
    TableRow {
        algebra: "(0,0,12,13,23)",
        step: 3,
        b2: 3,
        admits_hypo: false,
    },
    TableRow {
        algebra: "(0,0,0,12,14)",
        step: 3,
        b2: 4,
        admits_hypo: false,
    },
    TableRow {
        algebra: "(0,0,0,12,13+24)",
        step: 3,
        b2: 4,
        admits_hypo: true,
    },
    TableRow {
        algebra: "(0,0,0,12,13)",
        step: 2,
        b2: 6,
        admits_hypo: true,
    },
    TableRow {
        algebra: "(0,0,0,0,12+34)",
        step: 2,
        b2: 5,
        admits_hypo: true,
    },
    TableRow {
        algebra: "(0,0,0,0,12)",
        step: 2,
        b2: 7,
        admits_hypo: true,
    },
    TableRow {
        algebra: "(0,0,0,0,0)",
        step: 1,
        b2: 10,
        admits_hypo: true,
    },
];

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    /// Canonical Salamon text of the algebra.
    pub algebra_text: String,
    pub algebra: LieAlgebra,
    pub id: usize,
    pub label: String,
    pub structure: SU2Structure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled catalog is well formed")
    }

    /// The catalog named by `HYPO_CATALOG`, or the bundled one.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Self::bundled()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HypoError::Catalog(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            let [alg, id, label, a, w1, w2, w3] = fields[..] else {
                return Err(HypoError::Catalog(format!(
                    "line {}: expected 7 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            };
            let algebra = LieAlgebra::parse_salamon(alg)?;
            let id = id
                .parse()
                .map_err(|_| HypoError::Catalog(format!("line {}: bad id {id:?}", lineno + 1)))?;
            entries.push(CatalogEntry {
                algebra_text: algebra.to_string(),
                algebra,
                id,
                label: label.to_string(),
                structure: SU2Structure::parse(a, w1, w2, w3)?,
            });
        }
        Ok(Self { entries })
    }

    /// Entries on the given algebra (matched on canonical Salamon text).
    pub fn for_algebra(&self, algebra: &LieAlgebra) -> Vec<&CatalogEntry> {
        let key = algebra.to_string();
        self.entries
            .iter()
            .filter(|e| e.algebra_text == key)
            .collect()
    }

    pub fn find(&self, algebra: &LieAlgebra, id: usize) -> Result<&CatalogEntry> {
        self.for_algebra(algebra)
            .into_iter()
            .find(|e| e.id == id)
            .ok_or_else(|| HypoError::Catalog(format!("no structure catalog:{id} on {algebra}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_covers_yes_rows() {
        let cat = Catalog::bundled();
        for row in TABLE {
            let alg = LieAlgebra::parse_salamon(row.algebra).unwrap();
            assert_eq!(
                !cat.for_algebra(&alg).is_empty(),
                row.admits_hypo,
                "{}",
                row.algebra
            );
        }
        assert_eq!(cat.entries.len(), 14);
    }

    #[test]
    fn malformed_records_are_rejected() {
        assert!(Catalog::parse("(0,0,0,0,0) | 1 | x | 5 | 12+34").is_err());
        assert!(Catalog::parse("(0,0,0,0,0) | one | x | 5 | 12+34 | 13+42 | 14+23").is_err());
        assert!(Catalog::parse("(0,0,0,0,0) | 1 | x | 5 | 12+34 | 13+42 | 14+2").is_err());
    }
}
