//! Elements, smina atom types and the three channel typing schemes.

use std::fmt;
use std::str::FromStr;

use super::atom::{AtomFlags, Role};

/// Chemical elements the parsers recognise.
///
/// Everything in the smina type table plus hydrogen and a handful of common
/// ions and cofactor elements that have no smina channel and are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    H,
    B,
    C,
    N,
    O,
    F,
    Na,
    Mg,
    Si,
    P,
    S,
    Cl,
    K,
    Ca,
    Mn,
    Fe,
    Co,
    Ni,
    Cu,
    Zn,
    Se,
    Br,
    I,
}

impl Element {
    pub const ALL: [Element; 23] = [
        Element::H,
        Element::B,
        Element::C,
        Element::N,
        Element::O,
        Element::F,
        Element::Na,
        Element::Mg,
        Element::Si,
        Element::P,
        Element::S,
        Element::Cl,
        Element::K,
        Element::Ca,
        Element::Mn,
        Element::Fe,
        Element::Co,
        Element::Ni,
        Element::Cu,
        Element::Zn,
        Element::Se,
        Element::Br,
        Element::I,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Element::H => "H",
            Element::B => "B",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::F => "F",
            Element::Na => "Na",
            Element::Mg => "Mg",
            Element::Si => "Si",
            Element::P => "P",
            Element::S => "S",
            Element::Cl => "Cl",
            Element::K => "K",
            Element::Ca => "Ca",
            Element::Mn => "Mn",
            Element::Fe => "Fe",
            Element::Co => "Co",
            Element::Ni => "Ni",
            Element::Cu => "Cu",
            Element::Zn => "Zn",
            Element::Se => "Se",
            Element::Br => "Br",
            Element::I => "I",
        }
    }

    pub fn is_hydrogen(self) -> bool {
        self == Element::H
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Element {
    type Err = ();

    /// Case-insensitive: `CL`, `cl` and `Cl` all parse as chlorine.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Element::ALL
            .iter()
            .copied()
            .find(|e| e.symbol().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

/// The 22 smina atom types that appear in either the ligand or receptor
/// column of the type table. Declaration order is table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SminaType {
    AliphaticCarbonXSHydrophobe,
    AliphaticCarbonXSNonHydrophobe,
    AromaticCarbonXSHydrophobe,
    AromaticCarbonXSNonHydrophobe,
    Bromine,
    Calcium,
    Chlorine,
    Fluorine,
    Iodine,
    Iron,
    Magnesium,
    Nitrogen,
    NitrogenXSAcceptor,
    NitrogenXSDonor,
    NitrogenXSDonorAcceptor,
    Oxygen,
    OxygenXSAcceptor,
    OxygenXSDonorAcceptor,
    Phosphorus,
    Sulfur,
    SulfurAcceptor,
    Zinc,
}

impl SminaType {
    pub const ALL: [SminaType; 22] = [
        SminaType::AliphaticCarbonXSHydrophobe,
        SminaType::AliphaticCarbonXSNonHydrophobe,
        SminaType::AromaticCarbonXSHydrophobe,
        SminaType::AromaticCarbonXSNonHydrophobe,
        SminaType::Bromine,
        SminaType::Calcium,
        SminaType::Chlorine,
        SminaType::Fluorine,
        SminaType::Iodine,
        SminaType::Iron,
        SminaType::Magnesium,
        SminaType::Nitrogen,
        SminaType::NitrogenXSAcceptor,
        SminaType::NitrogenXSDonor,
        SminaType::NitrogenXSDonorAcceptor,
        SminaType::Oxygen,
        SminaType::OxygenXSAcceptor,
        SminaType::OxygenXSDonorAcceptor,
        SminaType::Phosphorus,
        SminaType::Sulfur,
        SminaType::SulfurAcceptor,
        SminaType::Zinc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SminaType::AliphaticCarbonXSHydrophobe => "AliphaticCarbonXSHydrophobe",
            SminaType::AliphaticCarbonXSNonHydrophobe => "AliphaticCarbonXSNonHydrophobe",
            SminaType::AromaticCarbonXSHydrophobe => "AromaticCarbonXSHydrophobe",
            SminaType::AromaticCarbonXSNonHydrophobe => "AromaticCarbonXSNonHydrophobe",
            SminaType::Bromine => "Bromine",
            SminaType::Calcium => "Calcium",
            SminaType::Chlorine => "Chlorine",
            SminaType::Fluorine => "Fluorine",
            SminaType::Iodine => "Iodine",
            SminaType::Iron => "Iron",
            SminaType::Magnesium => "Magnesium",
            SminaType::Nitrogen => "Nitrogen",
            SminaType::NitrogenXSAcceptor => "NitrogenXSAcceptor",
            SminaType::NitrogenXSDonor => "NitrogenXSDonor",
            SminaType::NitrogenXSDonorAcceptor => "NitrogenXSDonorAcceptor",
            SminaType::Oxygen => "Oxygen",
            SminaType::OxygenXSAcceptor => "OxygenXSAcceptor",
            SminaType::OxygenXSDonorAcceptor => "OxygenXSDonorAcceptor",
            SminaType::Phosphorus => "Phosphorus",
            SminaType::Sulfur => "Sulfur",
            SminaType::SulfurAcceptor => "SulfurAcceptor",
            SminaType::Zinc => "Zinc",
        }
    }

    pub fn from_name(name: &str) -> Option<SminaType> {
        SminaType::ALL.iter().copied().find(|t| t.name() == name)
    }

    /// Whether the type exists as a ligand channel.
    pub fn in_ligand(self) -> bool {
        !matches!(
            self,
            SminaType::Calcium | SminaType::Iron | SminaType::Magnesium | SminaType::Zinc
        )
    }

    /// Whether the type exists as a receptor channel.
    pub fn in_receptor(self) -> bool {
        !matches!(
            self,
            SminaType::Bromine
                | SminaType::Chlorine
                | SminaType::Fluorine
                | SminaType::Iodine
                | SminaType::Oxygen
                | SminaType::SulfurAcceptor
        )
    }

    pub fn element(self) -> Element {
        use SminaType::*;
        match self {
            AliphaticCarbonXSHydrophobe
            | AliphaticCarbonXSNonHydrophobe
            | AromaticCarbonXSHydrophobe
            | AromaticCarbonXSNonHydrophobe => Element::C,
            Bromine => Element::Br,
            Calcium => Element::Ca,
            Chlorine => Element::Cl,
            Fluorine => Element::F,
            Iodine => Element::I,
            Iron => Element::Fe,
            Magnesium => Element::Mg,
            Nitrogen | NitrogenXSAcceptor | NitrogenXSDonor | NitrogenXSDonorAcceptor => {
                Element::N
            }
            Oxygen | OxygenXSAcceptor | OxygenXSDonorAcceptor => Element::O,
            Phosphorus => Element::P,
            Sulfur | SulfurAcceptor => Element::S,
            Zinc => Element::Zn,
        }
    }

    /// Minimal flag set that resolves back to this type.
    pub fn canonical_flags(self) -> AtomFlags {
        use SminaType::*;
        let mut f = AtomFlags::default();
        match self {
            AliphaticCarbonXSHydrophobe => f.hydrophobe = true,
            AromaticCarbonXSHydrophobe => {
                f.aromatic = true;
                f.hydrophobe = true;
            }
            AromaticCarbonXSNonHydrophobe => f.aromatic = true,
            NitrogenXSAcceptor | OxygenXSAcceptor | SulfurAcceptor => f.acceptor = true,
            NitrogenXSDonor => f.donor = true,
            NitrogenXSDonorAcceptor | OxygenXSDonorAcceptor => {
                f.donor = true;
                f.acceptor = true;
            }
            _ => {}
        }
        f
    }

    /// Resolve an element and its typing flags to a smina type.
    ///
    /// Donor/acceptor flags resolve with priority donor+acceptor > donor >
    /// acceptor > plain. Oxygen has no donor-only type; a donor oxygen is a
    /// donor-acceptor. Returns `None` for hydrogen and for elements without
    /// a smina type.
    pub fn resolve(element: Element, flags: AtomFlags) -> Option<SminaType> {
        use SminaType::*;
        let t = match element {
            Element::C => match (flags.aromatic, flags.hydrophobe) {
                (false, true) => AliphaticCarbonXSHydrophobe,
                (false, false) => AliphaticCarbonXSNonHydrophobe,
                (true, true) => AromaticCarbonXSHydrophobe,
                (true, false) => AromaticCarbonXSNonHydrophobe,
            },
            Element::N => match (flags.donor, flags.acceptor) {
                (true, true) => NitrogenXSDonorAcceptor,
                (true, false) => NitrogenXSDonor,
                (false, true) => NitrogenXSAcceptor,
                (false, false) => Nitrogen,
            },
            Element::O => match (flags.donor, flags.acceptor) {
                (true, _) => OxygenXSDonorAcceptor,
                (false, true) => OxygenXSAcceptor,
                (false, false) => Oxygen,
            },
            Element::S => {
                if flags.acceptor {
                    SulfurAcceptor
                } else {
                    Sulfur
                }
            }
            Element::P => Phosphorus,
            Element::F => Fluorine,
            Element::Cl => Chlorine,
            Element::Br => Bromine,
            Element::I => Iodine,
            Element::Ca => Calcium,
            Element::Fe => Iron,
            Element::Mg => Magnesium,
            Element::Zn => Zinc,
            _ => return None,
        };
        Some(t)
    }
}

impl fmt::Display for SminaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const ELEMENT18_LIGAND: [Element; 9] = [
    Element::C,
    Element::N,
    Element::O,
    Element::S,
    Element::P,
    Element::F,
    Element::Cl,
    Element::Br,
    Element::I,
];

const ELEMENT18_RECEPTOR: [Element; 9] = [
    Element::C,
    Element::N,
    Element::O,
    Element::S,
    Element::P,
    Element::Ca,
    Element::Fe,
    Element::Mg,
    Element::Zn,
];

/// Channel typing scheme.
///
/// Ligand channels always come first: under `Smina34` channels 0..18 are
/// ligand types and 18..34 receptor types, under `Element18` 0..9 and
/// 9..18, under `Binary2` channel 0 is ligand and 1 receptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AtomTypeScheme {
    #[default]
    Smina34,
    Element18,
    Binary2,
}

impl AtomTypeScheme {
    pub const ALL: [AtomTypeScheme; 3] = [
        AtomTypeScheme::Smina34,
        AtomTypeScheme::Element18,
        AtomTypeScheme::Binary2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AtomTypeScheme::Smina34 => "smina34",
            AtomTypeScheme::Element18 => "element18",
            AtomTypeScheme::Binary2 => "binary2",
        }
    }

    pub fn channel_count(self) -> usize {
        match self {
            AtomTypeScheme::Smina34 => 34,
            AtomTypeScheme::Element18 => 18,
            AtomTypeScheme::Binary2 => 2,
        }
    }

    /// Number of leading channels reserved for ligand atoms.
    pub fn ligand_channel_count(self) -> usize {
        match self {
            AtomTypeScheme::Smina34 => 18,
            AtomTypeScheme::Element18 => 9,
            AtomTypeScheme::Binary2 => 1,
        }
    }

    pub fn channel_role(self, channel: usize) -> Option<Role> {
        if channel < self.ligand_channel_count() {
            Some(Role::Ligand)
        } else if channel < self.channel_count() {
            Some(Role::Receptor)
        } else {
            None
        }
    }

    /// Channel for an atom, or `None` when the atom is dropped.
    pub fn channel(self, element: Element, flags: AtomFlags, role: Role) -> Option<usize> {
        if element.is_hydrogen() {
            return None;
        }
        match self {
            AtomTypeScheme::Smina34 => {
                SminaType::resolve(element, flags).and_then(|t| smina34_channel(t, role))
            }
            AtomTypeScheme::Element18 => {
                let (table, offset) = match role {
                    Role::Ligand => (&ELEMENT18_LIGAND, 0),
                    Role::Receptor => (&ELEMENT18_RECEPTOR, 9),
                };
                table.iter().position(|&e| e == element).map(|i| i + offset)
            }
            AtomTypeScheme::Binary2 => Some(match role {
                Role::Ligand => 0,
                Role::Receptor => 1,
            }),
        }
    }

    /// Human-readable channel label such as `lig:AromaticCarbonXSHydrophobe`.
    pub fn channel_name(self, channel: usize) -> Option<String> {
        let role = self.channel_role(channel)?;
        let prefix = match role {
            Role::Ligand => "lig",
            Role::Receptor => "rec",
        };
        let label = match self {
            AtomTypeScheme::Smina34 => smina34_type(channel)?.name().to_string(),
            AtomTypeScheme::Element18 => {
                let e = if channel < 9 {
                    ELEMENT18_LIGAND[channel]
                } else {
                    ELEMENT18_RECEPTOR[channel - 9]
                };
                e.symbol().to_string()
            }
            AtomTypeScheme::Binary2 => "atom".to_string(),
        };
        Some(format!("{prefix}:{label}"))
    }
}

impl fmt::Display for AtomTypeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AtomTypeScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AtomTypeScheme::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown typing scheme '{s}' (expected smina34, element18 or binary2)"))
    }
}

/// smina34 channel of a type for a role, `None` when the table marks it N.
pub fn smina34_channel(t: SminaType, role: Role) -> Option<usize> {
    match role {
        Role::Ligand => SminaType::ALL
            .iter()
            .filter(|t| t.in_ligand())
            .position(|&x| x == t)
            .filter(|_| t.in_ligand()),
        Role::Receptor => SminaType::ALL
            .iter()
            .filter(|t| t.in_receptor())
            .position(|&x| x == t)
            .filter(|_| t.in_receptor())
            .map(|i| i + 18),
    }
}

/// Inverse of [`smina34_channel`].
pub fn smina34_type(channel: usize) -> Option<SminaType> {
    if channel < 18 {
        SminaType::ALL.iter().copied().filter(|t| t.in_ligand()).nth(channel)
    } else {
        SminaType::ALL
            .iter()
            .copied()
            .filter(|t| t.in_receptor())
            .nth(channel.checked_sub(18)?)
    }
}
