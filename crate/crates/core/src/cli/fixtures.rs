//! Shipped fixture structures, written as documents under a fixtures directory.

use std::path::{Path, PathBuf};

use crate::cli::document::{read_document, StructureDocument};
use crate::error::{Error, Result};
use crate::formalnf::{Family, NormalFormId};
use crate::series::Scalar;

/// Orders at which fixtures are written.
pub const FIXTURE_ORDERS: (usize, usize) = (6, 8);

pub const FIXTURE_NAMES: [&str; 7] = ["f1", "f1_r2", "nf3_2", "nf3_4", "mal1", "mal2_lambda1", "mal3"];

/// The normal form each fixture instantiates.
pub fn fixture_id(name: &str) -> Result<NormalFormId> {
    let s = Scalar::int;
    let half = Scalar::frac(1, 2);
    match name {
        "f1" => Ok(NormalFormId::f1(s(1), half, s(2))),
        "f1_r2" => NormalFormId::fr(s(1), half, 2),
        "nf3_2" => NormalFormId::nf3(Family::Nf3_2, s(-1), s(1), None, None),
        "nf3_4" => NormalFormId::nf3(Family::Nf3_4, s(0), s(2), Some(half), None),
        "mal1" => NormalFormId::new(Family::HnfMal1, s(1), s(0), &[("c0", s(2))]),
        "mal2_lambda1" => NormalFormId::new(Family::HnfMal2, s(1), s(0), &[("c0", s(2)), ("lambda", s(1))]),
        "mal3" => NormalFormId::new(Family::HnfMal3, s(1), s(0), &[("c0", s(2))]),
        _ => Err(Error::Domain(format!("unknown fixture {name:?}; known: {}", FIXTURE_NAMES.join(", ")))),
    }
}

pub fn fixture_document(name: &str) -> Result<StructureDocument> {
    let (nz, nt) = FIXTURE_ORDERS;
    Ok(StructureDocument::from_structure(&fixture_id(name)?.to_structure(nz, nt)?))
}

pub fn fixture_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.json"))
}

/// Writes every fixture into `dir` and returns the paths written.
pub fn write_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    FIXTURE_NAMES
        .iter()
        .map(|name| {
            let path = fixture_path(dir, name);
            std::fs::write(&path, fixture_document(name)?.to_text()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}

/// Reads a fixture from `dir`; falls back to the built-in definition when the file is absent.
pub fn load_fixture(dir: Option<&Path>, name: &str) -> Result<StructureDocument> {
    match dir.map(|d| fixture_path(d, name)) {
        Some(p) if p.exists() => read_document(&p),
        _ => fixture_document(name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::document::parse_document;
    use crate::connmat::is_flat;

    #[test]
    fn fixtures_are_flat_and_round_trip() {
        for name in FIXTURE_NAMES {
            let d = fixture_document(name).unwrap();
            assert!(is_flat(&d.structure), "{name}");
            assert_eq!(parse_document(&d.to_text()).unwrap(), d, "{name}");
        }
        assert!(fixture_id("nope").is_err());
    }
}
