use std::fmt;
use std::str::FromStr;

use super::radii::RadiusTable;
use super::types::{AtomTypeScheme, Element};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Receptor,
    Ligand,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Receptor => "receptor",
            Role::Ligand => "ligand",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "receptor" | "rec" => Ok(Role::Receptor),
            "ligand" | "lig" => Ok(Role::Ligand),
            _ => Err(()),
        }
    }
}

/// Typing annotations supplied with the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AtomFlags {
    pub aromatic: bool,
    pub donor: bool,
    pub acceptor: bool,
    pub hydrophobe: bool,
}

impl AtomFlags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.aromatic {
            out.push("aromatic");
        }
        if self.donor {
            out.push("donor");
        }
        if self.acceptor {
            out.push("acceptor");
        }
        if self.hydrophobe {
            out.push("hydrophobe");
        }
        out
    }

    /// Sets the flag named by `token`; returns false for unknown words.
    pub fn set_named(&mut self, token: &str) -> bool {
        match token {
            "aromatic" => self.aromatic = true,
            "donor" | "h_donor" => self.donor = true,
            "acceptor" | "h_acceptor" => self.acceptor = true,
            "hydrophobe" | "hydrophobic" => self.hydrophobe = true,
            _ => return false,
        }
        true
    }
}

/// Channel assignment state of an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Channel {
    #[default]
    Unassigned,
    Dropped,
    Index(usize),
}

impl Channel {
    pub fn index(self) -> Option<usize> {
        match self {
            Channel::Index(i) => Some(i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedAtom {
    /// Cartesian position in Å.
    pub position: [f64; 3],
    pub element: Element,
    /// van der Waals radius in Å, always positive.
    pub vdw_radius: f64,
    pub role: Role,
    pub flags: AtomFlags,
    /// Residue identifier; present on receptor atoms.
    pub residue_id: Option<String>,
    /// Fragment memberships; ligand atoms only, possibly empty.
    pub fragment_ids: Vec<String>,
    pub channel: Channel,
}

impl TypedAtom {
    /// Builds an untyped atom with the default radius for its element and flags.
    pub fn new(element: Element, position: [f64; 3], role: Role, flags: AtomFlags) -> Self {
        TypedAtom {
            position,
            element,
            vdw_radius: RadiusTable::default().radius(element, flags),
            role,
            flags,
            residue_id: None,
            fragment_ids: Vec::new(),
            channel: Channel::Unassigned,
        }
    }

    pub fn with_residue(mut self, residue: impl Into<String>) -> Self {
        self.residue_id = Some(residue.into());
        self
    }

    pub fn with_fragments<I, S>(mut self, fragments: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.fragment_ids = fragments.into_iter().map(Into::into).collect();
        self
    }
}

/// Counts reported by [`assign_types`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TypingReport {
    pub typed: usize,
    /// Hydrogens, which are always dropped.
    pub hydrogens: usize,
    /// Heavy atoms whose (element, flags, role) has no channel in the scheme.
    pub unknown: usize,
}

/// An ordered set of atoms sharing one role.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub name: String,
    pub role: Role,
    pub atoms: Vec<TypedAtom>,
    /// Scheme the channels were assigned under, if any.
    pub typing: Option<AtomTypeScheme>,
}

impl Molecule {
    pub fn new(name: impl Into<String>, role: Role, atoms: Vec<TypedAtom>) -> Self {
        Molecule {
            name: name.into(),
            role,
            atoms,
            typing: None,
        }
    }

    pub fn empty(role: Role) -> Self {
        Molecule::new("", role, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Copy with the atoms at `indices` removed. Channel assignments survive.
    pub fn without(&self, indices: &[usize]) -> Molecule {
        let mut drop = vec![false; self.atoms.len()];
        for &i in indices {
            if let Some(d) = drop.get_mut(i) {
                *d = true;
            }
        }
        Molecule {
            name: self.name.clone(),
            role: self.role,
            atoms: self
                .atoms
                .iter()
                .zip(&drop)
                .filter(|(_, &d)| !d)
                .map(|(a, _)| a.clone())
                .collect(),
            typing: self.typing,
        }
    }

    /// Mean position of atoms that carry a channel, falling back to all atoms.
    pub fn centroid(&self) -> Option<[f64; 3]> {
        let typed: Vec<&TypedAtom> = self
            .atoms
            .iter()
            .filter(|a| a.channel.index().is_some())
            .collect();
        let pool: Vec<&TypedAtom> = if typed.is_empty() {
            self.atoms.iter().collect()
        } else {
            typed
        };
        if pool.is_empty() {
            return None;
        }
        let mut c = [0.0; 3];
        for a in &pool {
            for k in 0..3 {
                c[k] += a.position[k];
            }
        }
        let n = pool.len() as f64;
        Some([c[0] / n, c[1] / n, c[2] / n])
    }

    /// Shifts every atom by `delta`.
    pub fn translated(&self, delta: [f64; 3]) -> Molecule {
        let mut m = self.clone();
        for a in &mut m.atoms {
            for k in 0..3 {
                a.position[k] += delta[k];
            }
        }
        m
    }

    /// Distinct residue identifiers in order of first appearance.
    pub fn residues(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        for a in &self.atoms {
            if let Some(r) = &a.residue_id {
                if !seen.contains(r) {
                    seen.push(r.clone());
                }
            }
        }
        seen
    }
}

/// Assigns a channel to every atom under `scheme`.
///
/// Hydrogens and atoms without a channel in the scheme are marked
/// [`Channel::Dropped`]; the report counts them.
pub fn assign_types(mol: &Molecule, scheme: AtomTypeScheme) -> (Molecule, TypingReport) {
    let mut out = mol.clone();
    let mut report = TypingReport::default();
    for atom in &mut out.atoms {
        atom.channel = match scheme.channel(atom.element, atom.flags, atom.role) {
            Some(c) => {
                report.typed += 1;
                Channel::Index(c)
            }
            None => {
                if atom.element.is_hydrogen() {
                    report.hydrogens += 1;
                } else {
                    report.unknown += 1;
                }
                Channel::Dropped
            }
        };
    }
    out.typing = Some(scheme);
    if report.unknown > 0 {
        log::warn!(
            "{}: {} heavy atom(s) have no {} channel and were dropped",
            mol.name,
            report.unknown,
            scheme
        );
    }
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moldata::types::{smina34_type, SminaType};

    #[test]
    fn assign_counts_and_drops() {
        let atoms = vec![
            TypedAtom::new(Element::C, [0.0; 3], Role::Receptor, AtomFlags::default())
                .with_residue("A1"),
            TypedAtom::new(Element::Cl, [1.0; 3], Role::Receptor, AtomFlags::default())
                .with_residue("A1"),
            TypedAtom::new(Element::H, [2.0; 3], Role::Receptor, AtomFlags::default())
                .with_residue("A2"),
        ];
        let mol = Molecule::new("rec", Role::Receptor, atoms);
        let (typed, report) = assign_types(&mol, AtomTypeScheme::Smina34);
        assert_eq!(report, TypingReport { typed: 1, hydrogens: 1, unknown: 1 });
        assert_eq!(
            smina34_type(typed.atoms[0].channel.index().unwrap()),
            Some(SminaType::AliphaticCarbonXSNonHydrophobe)
        );
        assert_eq!(typed.atoms[1].channel, Channel::Dropped);
        assert_eq!(typed.atoms[2].channel, Channel::Dropped);
        assert_eq!(typed.typing, Some(AtomTypeScheme::Smina34));
        assert_eq!(typed.residues(), vec!["A1".to_string(), "A2".to_string()]);
    }

    #[test]
    fn binary2_ligand_is_channel_zero() {
        let mol = Molecule::new(
            "lig",
            Role::Ligand,
            vec![TypedAtom::new(Element::Br, [0.0; 3], Role::Ligand, AtomFlags::default())],
        );
        let (typed, _) = assign_types(&mol, AtomTypeScheme::Binary2);
        assert_eq!(typed.atoms[0].channel, Channel::Index(0));
    }

    #[test]
    fn without_keeps_order() {
        let atoms = (0..4)
            .map(|i| {
                TypedAtom::new(Element::C, [i as f64, 0.0, 0.0], Role::Ligand, AtomFlags::default())
            })
            .collect();
        let mol = Molecule::new("l", Role::Ligand, atoms);
        let m = mol.without(&[1, 2]);
        assert_eq!(m.len(), 2);
        assert_eq!(m.atoms[0].position[0], 0.0);
        assert_eq!(m.atoms[1].position[0], 3.0);
    }
}
