//! Fixture matrices and the JSON catalog file.
//!
//! A catalog file is a JSON array of entries; a file holding only
//! whitespace is an empty catalog.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constructions::build_dita;
use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::matrix::{fourier_matrix, LogHadamardMatrix};

const S8_NUM: [[i64; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 1, 3, 0, 2, 1, 3],
    [0, 2, 3, 1, 0, 2, 3, 1],
    [0, 0, 2, 2, 1, 1, 3, 3],
    [0, 1, 0, 1, 2, 3, 2, 3],
    [0, 3, 0, 3, 2, 1, 2, 1],
    [0, 2, 2, 0, 2, 0, 0, 2],
    [0, 0, 2, 2, 3, 3, 1, 1],
];

const S12_NUM: [[i64; 12]; 12] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 24, 12, 0, 24, 12, 0, 24, 12, 0, 24, 12],
    [0, 12, 24, 9, 21, 33, 0, 12, 24, 9, 21, 33],
    [0, 24, 12, 18, 6, 30, 0, 24, 12, 18, 6, 30],
    [0, 12, 24, 27, 3, 15, 0, 12, 24, 27, 3, 15],
    [0, 0, 0, 18, 18, 18, 9, 9, 9, 27, 27, 27],
    [0, 4, 8, 0, 4, 8, 18, 22, 26, 18, 22, 26],
    [0, 16, 32, 0, 16, 32, 18, 34, 14, 18, 34, 14],
    [0, 28, 20, 0, 28, 20, 18, 10, 2, 18, 10, 2],
    [0, 12, 24, 18, 30, 6, 18, 30, 6, 0, 12, 24],
    [0, 24, 12, 18, 6, 30, 18, 6, 30, 0, 24, 12],
    [0, 0, 0, 18, 18, 18, 27, 27, 27, 9, 9, 9],
];

const S16_NUM: [[i64; 16]; 16] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 4, 1, 5, 2, 6, 3, 7, 0, 4, 1, 5, 2, 6, 3, 7],
    [0, 4, 3, 7, 6, 2, 1, 5, 0, 4, 3, 7, 6, 2, 1, 5],
    [0, 0, 4, 4, 0, 0, 4, 4, 0, 0, 4, 4, 0, 0, 4, 4],
    [0, 4, 5, 1, 2, 6, 7, 3, 0, 4, 5, 1, 2, 6, 7, 3],
    [0, 0, 6, 6, 4, 4, 2, 2, 0, 0, 6, 6, 4, 4, 2, 2],
    [0, 4, 7, 3, 6, 2, 5, 1, 0, 4, 7, 3, 6, 2, 5, 1],
    [0, 0, 2, 2, 4, 4, 6, 6, 2, 2, 4, 4, 6, 6, 0, 0],
    [0, 1, 0, 1, 0, 1, 0, 1, 4, 5, 4, 5, 4, 5, 4, 5],
    [0, 5, 0, 5, 0, 5, 0, 5, 4, 1, 4, 1, 4, 1, 4, 1],
    [0, 4, 2, 6, 4, 0, 6, 2, 4, 0, 6, 2, 0, 4, 2, 6],
    [0, 0, 4, 4, 0, 0, 4, 4, 4, 4, 0, 0, 4, 4, 0, 0],
    [0, 4, 4, 0, 0, 4, 4, 0, 4, 0, 0, 4, 4, 0, 0, 4],
    [0, 0, 6, 6, 4, 4, 2, 2, 4, 4, 2, 2, 0, 0, 6, 6],
    [0, 4, 6, 2, 4, 0, 2, 6, 4, 0, 2, 6, 0, 4, 6, 2],
    [0, 0, 2, 2, 4, 4, 6, 6, 6, 6, 0, 0, 2, 2, 4, 4],
];

pub fn s8() -> LogHadamardMatrix {
    LogHadamardMatrix::from_numerators(4, &S8_NUM).expect("square fixture")
}

pub fn s12() -> LogHadamardMatrix {
    LogHadamardMatrix::from_numerators(36, &S12_NUM).expect("square fixture")
}

pub fn s16() -> LogHadamardMatrix {
    LogHadamardMatrix::from_numerators(8, &S16_NUM).expect("square fixture")
}

/// The Sylvester matrix `F2 ⊗ F2 ⊗ F2`, real.
pub fn h8() -> LogHadamardMatrix {
    let f2 = fourier_matrix(2);
    let f4 = build_dita(&f2, &[f2.clone(), f2.clone()]).expect("F2 is Hadamard");
    build_dita(&f2, &[f4.clone(), f4]).expect("F4 block is Hadamard")
}

/// Looks up `S8`, `S12`, `S16`, `H8` or `F<N>`.
pub fn builtin_matrix(name: &str) -> Option<LogHadamardMatrix> {
    match name {
        "S8" => Some(s8()),
        "S12" => Some(s12()),
        "S16" => Some(s16()),
        "H8" => Some(h8()),
        _ => {
            let n: usize = name.strip_prefix('F')?.parse().ok()?;
            (1..=64).contains(&n).then(|| fourier_matrix(n))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Builtin { name: String },
    Construction { method: String, parameters: BTreeMap<String, String> },
    File { path: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub matrix: LogHadamardMatrix,
    pub provenance: Provenance,
    #[serde(default)]
    pub notes: String,
}

#[derive(Deserialize)]
struct RawEntry {
    id: String,
    matrix: MatrixJson,
    provenance: Provenance,
    #[serde(default)]
    notes: String,
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let builtin = |id: &str, matrix, notes: &str| CatalogEntry {
        id: id.to_string(),
        matrix,
        provenance: Provenance::Builtin { name: id.to_string() },
        notes: notes.to_string(),
    };
    let mut entries = vec![
        builtin("S8", s8(), "modified grid spectrum over Z2^6"),
        builtin("S12", s12(), "modified grid spectrum over Z2^4 x Z3^2"),
        builtin("S16", s16(), "modified grid spectrum over Z2 x Z4 x Z2 x Z2 x Z2 x Z4"),
        builtin("H8", h8(), "real Sylvester matrix"),
    ];
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16] {
        entries.push(builtin(&format!("F{n}"), fourier_matrix(n), "Fourier matrix"));
    }
    entries
}

/// Parses catalog JSON, checking id uniqueness and the Hadamard property.
pub fn parse_catalog(s: &str) -> Result<Vec<CatalogEntry>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let raw: Vec<RawEntry> = serde_json::from_str(s)?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for e in raw {
        if !seen.insert(e.id.clone()) {
            return Err(Error::DuplicateId(e.id));
        }
        let wrap = |source: Error| Error::CatalogEntry { id: e.id.clone(), source: Box::new(source) };
        let matrix = LogHadamardMatrix::try_from(e.matrix).map_err(wrap)?;
        if let Some((row_a, row_b)) = matrix.first_non_orthogonal_rows() {
            return Err(wrap(Error::NotHadamard { row_a, row_b }));
        }
        out.push(CatalogEntry { id: e.id, matrix, provenance: e.provenance, notes: e.notes });
    }
    Ok(out)
}

pub fn catalog_to_string(entries: &[CatalogEntry]) -> String {
    serde_json::to_string_pretty(entries).expect("catalog serializes")
}

pub fn catalog_load(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>> {
    parse_catalog(&std::fs::read_to_string(path)?)
}

pub fn catalog_save(entries: &[CatalogEntry], path: impl AsRef<Path>) -> Result<()> {
    let mut seen = HashSet::new();
    if let Some(e) = entries.iter().find(|e| !seen.insert(e.id.as_str())) {
        return Err(Error::DuplicateId(e.id.clone()));
    }
    std::fs::write(path, catalog_to_string(entries) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::PhaseRational;

    #[test]
    fn fixtures_are_hadamard() {
        for e in builtin_catalog() {
            assert!(e.matrix.is_hadamard(), "{}", e.id);
        }
        assert_eq!(s8().common_denominator(), 4);
        assert_eq!(s12().common_denominator(), 36);
        assert_eq!(s16().common_denominator(), 8);
        assert!(h8().rows().flatten().all(|p| p.denominator() <= 2));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin_matrix("S12"), Some(s12()));
        assert_eq!(builtin_matrix("F5"), Some(fourier_matrix(5)));
        assert_eq!(builtin_matrix("F0"), None);
        assert_eq!(builtin_matrix("X"), None);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.json");
        let entries = builtin_catalog();
        catalog_save(&entries, &path).unwrap();
        assert_eq!(catalog_load(&path).unwrap(), entries);
        let one = vec![entries[0].clone()];
        catalog_save(&one, &path).unwrap();
        assert_eq!(catalog_load(&path).unwrap()[0].matrix, s8());
    }

    #[test]
    fn empty_catalog() {
        assert!(parse_catalog("").unwrap().is_empty());
        assert!(parse_catalog("  \n").unwrap().is_empty());
        assert!(parse_catalog("[]").unwrap().is_empty());
    }

    #[test]
    fn corrupted_entry_names_rows() {
        let mut e = builtin_catalog()[0].clone();
        e.matrix = s8().with_entry(1, 1, s8().get(1, 1) + PhaseRational::new(1, 4));
        let err = parse_catalog(&catalog_to_string(&[e])).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("`S8`") && msg.contains("rows 1 and 2"), "{msg}");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let e = builtin_catalog()[0].clone();
        let text = catalog_to_string(&[e.clone(), e.clone()]);
        assert!(matches!(parse_catalog(&text), Err(Error::DuplicateId(id)) if id == "S8"));
        let dir = tempfile::tempdir().unwrap();
        assert!(catalog_save(&[e.clone(), e], dir.path().join("x.json")).is_err());
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(parse_catalog("[{"), Err(Error::Json(_))));
        let text = r#"[{"id":"x","matrix":{"size":2,"den":2,"num":[[0,0]]},"provenance":{"kind":"file","path":"a"}}]"#;
        assert!(matches!(parse_catalog(text), Err(Error::CatalogEntry { .. })));
    }
}
