//! Editable van der Waals radius table keyed by smina type name.
//!
//! The file format is one `Name = radius` (or `Name radius`) pair per line,
//! `#` starts a comment. Keys are the smina type names plus `Hydrogen` and
//! `Other` (elements with no smina type). Entries not listed keep their
//! default.

use std::collections::BTreeMap;

use super::atom::{AtomFlags, Molecule};
use super::types::{Element, SminaType};
use super::MolError;

pub const HYDROGEN_KEY: &str = "Hydrogen";
pub const OTHER_KEY: &str = "Other";

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusTable {
    by_type: BTreeMap<SminaType, f64>,
    hydrogen: f64,
    other: f64,
}

impl Default for RadiusTable {
    /// smina's XS radii: C 1.9, N 1.8, O 1.7, S 2.0, P 2.1, F 1.5, Cl 1.8,
    /// Br 2.0, I 2.2, metals 1.2, H 1.1.
    fn default() -> Self {
        let by_type = SminaType::ALL
            .iter()
            .map(|&t| {
                let r = match t.element() {
                    Element::C => 1.9,
                    Element::N => 1.8,
                    Element::O => 1.7,
                    Element::S => 2.0,
                    Element::P => 2.1,
                    Element::F => 1.5,
                    Element::Cl => 1.8,
                    Element::Br => 2.0,
                    Element::I => 2.2,
                    _ => 1.2,
                };
                (t, r)
            })
            .collect();
        RadiusTable {
            by_type,
            hydrogen: 1.1,
            other: 1.2,
        }
    }
}

impl RadiusTable {
    pub fn radius(&self, element: Element, flags: AtomFlags) -> f64 {
        if element.is_hydrogen() {
            return self.hydrogen;
        }
        match SminaType::resolve(element, flags) {
            Some(t) => self.by_type[&t],
            None => self.other,
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        match key {
            HYDROGEN_KEY => Some(self.hydrogen),
            OTHER_KEY => Some(self.other),
            _ => SminaType::from_name(key).map(|t| self.by_type[&t]),
        }
    }

    pub fn set(&mut self, key: &str, radius: f64) -> Result<(), MolError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(MolError::BadRadius {
                key: key.to_string(),
                value: radius,
            });
        }
        match key {
            HYDROGEN_KEY => self.hydrogen = radius,
            OTHER_KEY => self.other = radius,
            _ => {
                let t = SminaType::from_name(key).ok_or_else(|| MolError::UnknownRadiusKey {
                    key: key.to_string(),
                })?;
                self.by_type.insert(t, radius);
            }
        }
        Ok(())
    }

    /// Parses a radius file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, MolError> {
        let mut table = RadiusTable::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = match line.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => {
                    let mut it = line.split_whitespace();
                    let k = it.next().unwrap_or("");
                    let v = it.next().unwrap_or("");
                    if it.next().is_some() {
                        return Err(MolError::Malformed {
                            line: lineno + 1,
                            message: "expected 'Name = radius'".into(),
                        });
                    }
                    (k, v)
                }
            };
            let radius: f64 = value.parse().map_err(|_| MolError::Malformed {
                line: lineno + 1,
                message: format!("bad radius '{value}'"),
            })?;
            table.set(key, radius)?;
        }
        Ok(table)
    }

    /// Serialises every entry, defaults included.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, r) in &self.by_type {
            s.push_str(&format!("{} = {}\n", t.name(), r));
        }
        s.push_str(&format!("{HYDROGEN_KEY} = {}\n", self.hydrogen));
        s.push_str(&format!("{OTHER_KEY} = {}\n", self.other));
        s
    }

    /// Overwrites the radius of every atom in `mol`.
    pub fn apply(&self, mol: &mut Molecule) {
        for a in &mut mol.atoms {
            a.vdw_radius = self.radius(a.element, a.flags);
        }
    }
}
