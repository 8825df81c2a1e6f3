//! Line-oriented annotated structure format.
//!
//! ```text
//! # comment
//! molecule <name>                      (optional header)
//! <element> <x> <y> <z> receptor <residue_id> [flag ...]
//! <element> <x> <y> <z> ligand [frag=<id>,<id>...] [flag ...]
//! ```
//!
//! Flags are `aromatic`, `donor`, `acceptor` and `hydrophobe`. All atoms of a
//! file share one role.

use super::atom::{AtomFlags, Molecule, Role, TypedAtom};
use super::types::Element;
use super::MolError;

const FRAGMENT_PREFIX: &str = "frag=";

pub fn parse_text(bytes: &[u8]) -> Result<Molecule, MolError> {
    let text = std::str::from_utf8(bytes).map_err(|e| MolError::Malformed {
        line: 0,
        message: format!("not valid UTF-8: {e}"),
    })?;
    let mut name = String::new();
    let mut role: Option<Role> = None;
    let mut atoms = Vec::new();
    let mut seen_content = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !seen_content && tokens[0] == "molecule" {
            seen_content = true;
            name = tokens[1..].join(" ");
            continue;
        }
        seen_content = true;
        let atom = parse_atom_line(&tokens, lineno)?;
        match role {
            None => role = Some(atom.role),
            Some(r) if r != atom.role => return Err(MolError::MixedRoles { line: lineno }),
            _ => {}
        }
        atoms.push(atom);
    }

    let role = role.ok_or(MolError::NoAtoms)?;
    Ok(Molecule::new(name, role, atoms))
}

fn parse_atom_line(tokens: &[&str], line: usize) -> Result<TypedAtom, MolError> {
    let malformed = |message: String| MolError::Malformed { line, message };
    if tokens.len() < 5 {
        return Err(malformed(format!(
            "expected at least 5 fields (element x y z role), found {}",
            tokens.len()
        )));
    }
    let element: Element = tokens[0].parse().map_err(|_| MolError::UnknownElement {
        line,
        symbol: tokens[0].to_string(),
    })?;
    let mut position = [0.0; 3];
    for k in 0..3 {
        let v: f64 = tokens[1 + k]
            .parse()
            .map_err(|_| malformed(format!("bad coordinate '{}'", tokens[1 + k])))?;
        if !v.is_finite() {
            return Err(malformed(format!("non-finite coordinate '{}'", tokens[1 + k])));
        }
        position[k] = v;
    }
    let role: Role = tokens[4]
        .parse()
        .map_err(|_| malformed(format!("bad role '{}' (expected receptor or ligand)", tokens[4])))?;

    let mut rest = &tokens[5..];
    let mut residue = None;
    let mut fragments = Vec::new();
    match role {
        Role::Receptor => {
            let (first, tail) = rest
                .split_first()
                .ok_or_else(|| malformed("receptor atom without residue id".into()))?;
            residue = Some(first.to_string());
            rest = tail;
        }
        Role::Ligand => {
            if let Some(first) = rest.first() {
                if let Some(list) = first.strip_prefix(FRAGMENT_PREFIX) {
                    fragments = list
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                    rest = &rest[1..];
                } else if *first == "-" {
                    rest = &rest[1..];
                }
            }
        }
    }

    let mut flags = AtomFlags::default();
    for tok in rest {
        if !flags.set_named(tok) {
            return Err(malformed(format!("unknown flag '{tok}'")));
        }
    }

    let mut atom = TypedAtom::new(element, position, role, flags);
    atom.residue_id = residue;
    atom.fragment_ids = fragments;
    Ok(atom)
}

/// Writes `mol` in the text format. Coordinates use the shortest
/// representation that parses back to the same `f64`.
pub fn write_text(mol: &Molecule) -> String {
    let mut s = String::new();
    if !mol.name.is_empty() {
        s.push_str(&format!("molecule {}\n", mol.name));
    }
    for a in &mol.atoms {
        s.push_str(&format!(
            "{} {} {} {} {}",
            a.element, a.position[0], a.position[1], a.position[2], a.role
        ));
        match a.role {
            Role::Receptor => {
                s.push(' ');
                s.push_str(a.residue_id.as_deref().unwrap_or("UNK"));
            }
            Role::Ligand => {
                if !a.fragment_ids.is_empty() {
                    s.push_str(&format!(" {FRAGMENT_PREFIX}{}", a.fragment_ids.join(",")));
                }
            }
        }
        for f in a.flags.names() {
            s.push(' ');
            s.push_str(f);
        }
        s.push('\n');
    }
    s
}
