//! Compact binary structure format.
//!
//! A headerless sequence of 16-byte little-endian records: `x`, `y`, `z` as
//! IEEE-754 binary32 followed by an `i32` smina34 channel index. Dropped
//! atoms are not written.

use super::atom::{Channel, Molecule, Role, TypedAtom};
use super::types::{smina34_type, AtomTypeScheme};
use super::MolError;

pub const RECORD_SIZE: usize = 16;

/// Residue id given to receptor atoms read from a gninatypes file, which
/// carries no residue information.
pub const UNKNOWN_RESIDUE: &str = "UNK";

pub fn read_gninatypes(bytes: &[u8]) -> Result<Molecule, MolError> {
    if !bytes.len().is_multiple_of(RECORD_SIZE) {
        return Err(MolError::Truncated {
            len: bytes.len(),
            record_size: RECORD_SIZE,
        });
    }
    let scheme = AtomTypeScheme::Smina34;
    let mut atoms = Vec::with_capacity(bytes.len() / RECORD_SIZE);
    let mut role = None;
    for (i, rec) in bytes.chunks_exact(RECORD_SIZE).enumerate() {
        let f = |k: usize| f32::from_le_bytes(rec[4 * k..4 * k + 4].try_into().unwrap());
        let index = i32::from_le_bytes(rec[12..16].try_into().unwrap());
        let offset = i * RECORD_SIZE + 12;
        let t = usize::try_from(index)
            .ok()
            .and_then(smina34_type)
            .ok_or(MolError::TypeOutOfRange { offset, index })?;
        let channel = index as usize;
        let atom_role = scheme.channel_role(channel).expect("channel checked above");
        match role {
            None => role = Some(atom_role),
            Some(r) if r != atom_role => return Err(MolError::MixedRecordRoles { record: i }),
            _ => {}
        }
        let mut atom = TypedAtom::new(
            t.element(),
            [f(0) as f64, f(1) as f64, f(2) as f64],
            atom_role,
            t.canonical_flags(),
        );
        if atom_role == Role::Receptor {
            atom.residue_id = Some(UNKNOWN_RESIDUE.to_string());
        }
        atom.channel = Channel::Index(channel);
        atoms.push(atom);
    }
    let mut mol = Molecule::new("", role.unwrap_or(Role::Ligand), atoms);
    mol.typing = Some(scheme);
    Ok(mol)
}

/// Serialises the typed atoms of `mol`. Coordinates are narrowed to binary32.
pub fn write_gninatypes(mol: &Molecule) -> Result<Vec<u8>, MolError> {
    if !mol.is_empty() && mol.typing != Some(AtomTypeScheme::Smina34) {
        return Err(MolError::NotSmina34);
    }
    let mut out = Vec::with_capacity(mol.len() * RECORD_SIZE);
    for atom in &mol.atoms {
        let channel = match atom.channel {
            Channel::Index(c) => c,
            Channel::Dropped => continue,
            Channel::Unassigned => return Err(MolError::NotSmina34),
        };
        for k in 0..3 {
            out.extend_from_slice(&(atom.position[k] as f32).to_le_bytes());
        }
        out.extend_from_slice(&(channel as i32).to_le_bytes());
    }
    Ok(out)
}
