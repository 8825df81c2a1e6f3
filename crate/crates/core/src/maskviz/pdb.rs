//! Fixed-column atom records with scores in the temperature-factor field
//! (columns 61-66, two decimals, clamped to ±99.99).

use crate::moldata::{Molecule, Role};

use super::MaskError;

pub const BFACTOR_LIMIT: f64 = 99.99;

fn atom_name(element: &str, serial: usize) -> String {
    let mut n = format!("{element}{serial}");
    n.truncate(4);
    n
}

fn residue_name(id: &str) -> String {
    let alpha: String = id.chars().take_while(|c| c.is_ascii_alphabetic()).take(3).collect();
    if alpha.is_empty() {
        "UNK".into()
    } else {
        alpha.to_ascii_uppercase()
    }
}

/// Atom records for `mol`, one score per atom. Returns the text and the
/// number of scores clamped.
pub fn write_colored_structure(mol: &Molecule, scores: &[f64]) -> Result<(String, usize), MaskError> {
    if scores.len() != mol.atoms.len() {
        return Err(MaskError::CountMismatch {
            expected: mol.atoms.len(),
            found: scores.len(),
        });
    }
    let residues = mol.residues();
    let mut out = String::new();
    let mut clamped = 0;
    for (i, (a, &s)) in mol.atoms.iter().zip(scores).enumerate() {
        if !s.is_finite() {
            return Err(MaskError::NonFiniteScore(i));
        }
        let b = s.clamp(-BFACTOR_LIMIT, BFACTOR_LIMIT);
        if b != s {
            clamped += 1;
            log::warn!("atom {i}: score {s} clamped to {b}");
        }
        let (record, res_name, res_seq) = match (mol.role, &a.residue_id) {
            (Role::Receptor, Some(r)) => (
                "ATOM  ",
                residue_name(r),
                residues.iter().position(|x| x == r).unwrap() + 1,
            ),
            (Role::Receptor, None) => ("ATOM  ", "UNK".to_string(), 0),
            (Role::Ligand, _) => ("HETATM", "LIG".to_string(), 1),
        };
        let sym = a.element.symbol().to_ascii_uppercase();
        let serial = (i + 1) % 100_000;
        out.push_str(&format!(
            "{record}{serial:>5} {name:<4} {res_name:>3} A{res_seq:>4}    {x:>8.3}{y:>8.3}{z:>8.3}{occ:>6.2}{b:>6.2}          {sym:>2}\n",
            name = atom_name(&sym, i + 1),
            res_seq = res_seq % 10_000,
            x = a.position[0],
            y = a.position[1],
            z = a.position[2],
            occ = 1.0,
        ));
    }
    out.push_str("END\n");
    Ok((out, clamped))
}

/// Temperature factors of the ATOM/HETATM records in `text`.
pub fn read_bfactors(text: &str) -> Result<Vec<f64>, MaskError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.starts_with("ATOM") || l.starts_with("HETATM"))
        .map(|(n, l)| {
            l.get(60..66)
                .and_then(|f| f.trim().parse().ok())
                .ok_or(MaskError::BadRecord(n + 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moldata::{AtomFlags, Element, TypedAtom};

    fn mol(n: usize) -> Molecule {
        let atoms = (0..n)
            .map(|i| {
                TypedAtom::new(Element::C, [i as f64, -12.5, 100.25], Role::Receptor, AtomFlags::default())
                    .with_residue(format!("ALA{}", i / 2))
            })
            .collect();
        Molecule::new("r", Role::Receptor, atoms)
    }

    #[test]
    fn columns_and_clamping() {
        let (text, clamped) = write_colored_structure(&mol(3), &[0.0, 123.4, -0.125]).unwrap();
        assert_eq!(clamped, 1);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0].len(), 78);
        assert_eq!(&lines[0][60..66], "  0.00");
        assert_eq!(&lines[1][60..66], " 99.99");
        assert_eq!(&lines[0][17..20], "ALA");
        assert_eq!(&lines[2][22..26], "   2");
        assert_eq!(&lines[0][30..38], "   0.000");
        assert_eq!(read_bfactors(&text).unwrap(), vec![0.0, 99.99, -0.12]);
        assert!(write_colored_structure(&mol(2), &[1.0]).is_err());
    }

    #[test]
    fn round_trip_within_half_hundredth() {
        let scores: Vec<f64> = (0..200).map(|i| (i as f64 - 100.0) * 0.987654).collect();
        let m = mol(200);
        let (text, _) = write_colored_structure(&m, &scores).unwrap();
        for (a, b) in scores.iter().zip(read_bfactors(&text).unwrap()) {
            assert!((a.clamp(-99.99, 99.99) - b).abs() <= 0.005 + 1e-12);
        }
    }
}
