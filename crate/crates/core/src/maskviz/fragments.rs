//! Ligand fragment lists.
//!
//! Fragment files hold one fragment per line, `id: i j k ...`, with
//! zero-based indices into the ligand's atom list. `#` starts a comment.

use petgraph::unionfind::UnionFind;

use crate::moldata::Molecule;

use super::MaskError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fragments {
    pub list: Vec<(String, Vec<usize>)>,
}

impl Fragments {
    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// From the `fragment_ids` carried by the ligand atoms, fragments in
    /// order of first appearance.
    pub fn from_annotations(ligand: &Molecule) -> Fragments {
        let mut list: Vec<(String, Vec<usize>)> = Vec::new();
        for (i, a) in ligand.atoms.iter().enumerate() {
            for f in &a.fragment_ids {
                match list.iter_mut().find(|(id, _)| id == f) {
                    Some((_, atoms)) => atoms.push(i),
                    None => list.push((f.clone(), vec![i])),
                }
            }
        }
        Fragments { list }
    }

    pub fn parse(text: &str) -> Result<Fragments, MaskError> {
        let mut list = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let bad = |message: String| MaskError::FragmentFile { line: n + 1, message };
            let (id, rest) = body.split_once(':').ok_or_else(|| bad("expected 'id: indices'".into()))?;
            let id = id.trim();
            if id.is_empty() {
                return Err(bad("empty fragment id".into()));
            }
            let atoms = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad(format!("bad atom index '{t}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            if atoms.is_empty() {
                return Err(bad(format!("fragment '{id}' has no atoms")));
            }
            list.push((id.to_string(), atoms));
        }
        Ok(Fragments { list })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, atoms) in &self.list {
            let idx: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
            out.push_str(&format!("{id}: {}\n", idx.join(" ")));
        }
        out
    }

    /// Every index must name a ligand atom.
    pub fn check(&self, atoms: usize) -> Result<(), MaskError> {
        for (id, list) in &self.list {
            if let Some(&bad) = list.iter().find(|&&a| a >= atoms) {
                return Err(MaskError::UnknownAtom {
                    fragment: id.clone(),
                    index: bad,
                    atoms,
                });
            }
        }
        Ok(())
    }
}

/// Cuts each bond in `cut` on its own and returns the two sides as
/// fragments `"<a>-<b>:a"` and `"<a>-<b>:b"`. A cut bond must not lie on a
/// ring.
pub fn fragments_from_cuts(
    atoms: usize,
    bonds: &[(usize, usize)],
    cut: &[(usize, usize)],
) -> Result<Fragments, MaskError> {
    let same = |x: (usize, usize), y: (usize, usize)| x == y || (x.1, x.0) == y;
    for &(a, b) in bonds.iter().chain(cut) {
        if a >= atoms || b >= atoms {
            return Err(MaskError::UnknownAtom {
                fragment: format!("{a}-{b}"),
                index: a.max(b),
                atoms,
            });
        }
    }
    let mut list = Vec::new();
    for &c in cut {
        if !bonds.iter().any(|&b| same(b, c)) {
            return Err(MaskError::NotABond(c.0, c.1));
        }
        let mut uf = UnionFind::<usize>::new(atoms);
        for &b in bonds.iter().filter(|&&b| !same(b, c)) {
            uf.union(b.0, b.1);
        }
        if uf.equiv(c.0, c.1) {
            return Err(MaskError::RingBond(c.0, c.1));
        }
        for (side, root) in [("a", c.0), ("b", c.1)] {
            let members: Vec<usize> = (0..atoms).filter(|&i| uf.equiv(i, root)).collect();
            list.push((format!("{}-{}:{side}", c.0, c.1), members));
        }
    }
    Ok(Fragments { list })
}
