//! Molecular structures: parsing, serialisation and channel typing.

mod atom;
mod gninatypes;
mod radii;
mod text;
mod types;

use std::path::Path;

use thiserror::Error;

pub use atom::{assign_types, AtomFlags, Channel, Molecule, Role, TypedAtom, TypingReport};
pub use gninatypes::{read_gninatypes, write_gninatypes, RECORD_SIZE, UNKNOWN_RESIDUE};
pub use radii::RadiusTable;
pub use text::{parse_text, write_text};
pub use types::{smina34_channel, smina34_type, AtomTypeScheme, Element, SminaType};

#[derive(Debug, Error)]
pub enum MolError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown element symbol '{symbol}'")]
    UnknownElement { line: usize, symbol: String },
    #[error("no atoms")]
    NoAtoms,
    #[error("empty input")]
    EmptyInput,
    #[error("line {line}: atom role differs from earlier atoms")]
    MixedRoles { line: usize },
    #[error("record {record}: receptor and ligand types mixed in one file")]
    MixedRecordRoles { record: usize },
    #[error("truncated gninatypes file: {len} bytes is not a multiple of {record_size}")]
    Truncated { len: usize, record_size: usize },
    #[error("byte {offset}: type index out of range ({index})")]
    TypeOutOfRange { offset: usize, index: i32 },
    #[error("gninatypes output requires atoms typed under smina34")]
    NotSmina34,
    #[error("unknown radius table key '{key}'")]
    UnknownRadiusKey { key: String },
    #[error("radius for '{key}' must be positive and finite, got {value}")]
    BadRadius { key: String, value: f64 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureFormat {
    Text,
    Gninatypes,
}

impl StructureFormat {
    /// `.gninatypes` files are binary, everything else is text.
    pub fn from_path(path: &Path) -> StructureFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("gninatypes") => StructureFormat::Gninatypes,
            _ => StructureFormat::Text,
        }
    }
}

pub fn parse_structure(bytes: &[u8], format: StructureFormat) -> Result<Molecule, MolError> {
    if bytes.is_empty() {
        return Err(MolError::EmptyInput);
    }
    match format {
        StructureFormat::Text => parse_text(bytes),
        StructureFormat::Gninatypes => read_gninatypes(bytes),
    }
}

/// Reads a structure file, choosing the format from the extension, and names
/// the molecule after the file stem when the file does not name it.
pub fn load_structure(path: &Path) -> Result<Molecule, MolError> {
    let bytes = std::fs::read(path).map_err(|source| MolError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut mol = parse_structure(&bytes, StructureFormat::from_path(path))?;
    if mol.name.is_empty() {
        mol.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(mol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_structure_dispatch() {
        assert!(matches!(
            parse_structure(&[], StructureFormat::Text),
            Err(MolError::EmptyInput)
        ));
        let m = parse_structure(b"S 0 0 0 ligand acceptor", StructureFormat::Text).unwrap();
        assert_eq!(m.atoms[0].element, Element::S);
        assert_eq!(
            StructureFormat::from_path(Path::new("a/b.gninatypes")),
            StructureFormat::Gninatypes
        );
        assert_eq!(StructureFormat::from_path(Path::new("a/b.txt")), StructureFormat::Text);
    }

    fn arb_atom(role: Role) -> impl Strategy<Value = TypedAtom> {
        let elements = prop::sample::select(Element::ALL.to_vec());
        (
            elements,
            prop::array::uniform3(-50.0f32..50.0),
            any::<[bool; 4]>(),
        )
            .prop_map(move |(e, p, f)| {
                let flags = AtomFlags {
                    aromatic: f[0],
                    donor: f[1],
                    acceptor: f[2],
                    hydrophobe: f[3],
                };
                let atom = TypedAtom::new(e, [p[0] as f64, p[1] as f64, p[2] as f64], role, flags);
                match role {
                    Role::Receptor => atom.with_residue("R1"),
                    Role::Ligand => atom,
                }
            })
    }

    proptest! {
        #[test]
        fn gninatypes_round_trip(
            lig in prop::collection::vec(arb_atom(Role::Ligand), 0..30),
            rec in prop::collection::vec(arb_atom(Role::Receptor), 0..30),
        ) {
            for (role, atoms) in [(Role::Ligand, lig), (Role::Receptor, rec)] {
                let (typed, _) = assign_types(&Molecule::new("m", role, atoms), AtomTypeScheme::Smina34);
                let bytes = write_gninatypes(&typed).unwrap();
                let back = read_gninatypes(&bytes).unwrap();
                let kept: Vec<&TypedAtom> =
                    typed.atoms.iter().filter(|a| a.channel.index().is_some()).collect();
                prop_assert_eq!(kept.len(), back.len());
                for (a, b) in kept.iter().zip(&back.atoms) {
                    prop_assert_eq!(a.position, b.position);
                    prop_assert_eq!(a.channel, b.channel);
                }
                prop_assert_eq!(write_gninatypes(&back).unwrap(), bytes);
            }
        }
    }
}
