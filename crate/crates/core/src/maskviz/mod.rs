//! Occlusion attribution: rescore a complex with ligand atoms, ligand
//! fragments or receptor residues removed, and write the score changes into
//! structure files.
//!
//! Every removal starts from the original complex, uses the identity
//! transform and a grid centered on the original ligand, and runs the
//! network in test mode, so reports are deterministic and independent of
//! evaluation order and thread count.

mod fragments;
mod pdb;

use rayon::prelude::*;
use thiserror::Error;

use crate::gridgen::{voxelize, GridConfig, GridError, Transform};
use crate::moldata::Molecule;
use crate::tensornet::{forward, Mode, NetError, NetworkSpec, Tensor, WeightSet};

pub use fragments::{fragments_from_cuts, Fragments};
pub use pdb::{read_bfactors, write_colored_structure, BFACTOR_LIMIT};

#[derive(Debug, Error)]
pub enum MaskError {
    #[error("ligand has no atoms")]
    EmptyLigand,
    #[error("fragment '{fragment}' names atom {index}, ligand has {atoms}")]
    UnknownAtom { fragment: String, index: usize, atoms: usize },
    #[error("fragment file line {line}: {message}")]
    FragmentFile { line: usize, message: String },
    #[error("{0}-{1} is not a listed bond")]
    NotABond(usize, usize),
    #[error("bond {0}-{1} lies on a ring and cannot be cut")]
    RingBond(usize, usize),
    #[error("{found} scores for {expected} atoms")]
    CountMismatch { expected: usize, found: usize },
    #[error("score of atom {0} is not finite")]
    NonFiniteScore(usize),
    #[error("line {0}: malformed atom record")]
    BadRecord(usize),
    #[error("network input {net_channels}×{net_side}³ does not match grid {grid_channels}×{grid_side}³")]
    GridMismatch {
        net_channels: usize,
        net_side: usize,
        grid_channels: usize,
        grid_side: usize,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Deterministic scoring against a fixed grid center.
#[derive(Debug, Clone, Copy)]
pub struct Scorer<'a> {
    pub spec: &'a NetworkSpec,
    pub weights: &'a WeightSet,
    pub grid: GridConfig,
    pub center: [f64; 3],
}

impl<'a> Scorer<'a> {
    pub fn new(
        spec: &'a NetworkSpec,
        weights: &'a WeightSet,
        grid: GridConfig,
        center: [f64; 3],
    ) -> Result<Self, MaskError> {
        let side = grid.side()?;
        if spec.input_channels != grid.channels() || spec.input_side != side {
            return Err(MaskError::GridMismatch {
                net_channels: spec.input_channels,
                net_side: spec.input_side,
                grid_channels: grid.channels(),
                grid_side: side,
            });
        }
        weights.check(spec)?;
        Ok(Scorer {
            spec,
            weights,
            grid,
            center,
        })
    }

    /// Positive-class probability.
    pub fn score(&self, receptor: &Molecule, ligand: &Molecule) -> Result<f64, MaskError> {
        let g = voxelize(receptor, ligand, self.center, &self.grid, &Transform::identity())?;
        Ok(forward(self.spec, self.weights, &Tensor::from_grid(&g), Mode::Test)?[1])
    }
}

/// Positive-class probability with the grid centered at `center`.
pub fn score_complex(
    spec: &NetworkSpec,
    weights: &WeightSet,
    receptor: &Molecule,
    ligand: &Molecule,
    grid: &GridConfig,
    center: [f64; 3],
) -> Result<f64, MaskError> {
    Scorer::new(spec, weights, *grid, center)?.score(receptor, ligand)
}

/// `S₀ − S(ligand without atom a)` for every ligand atom.
pub fn atom_removal_scores(
    scorer: &Scorer,
    receptor: &Molecule,
    ligand: &Molecule,
) -> Result<Vec<f64>, MaskError> {
    if ligand.is_empty() {
        return Err(MaskError::EmptyLigand);
    }
    let s0 = scorer.score(receptor, ligand)?;
    (0..ligand.len())
        .into_par_iter()
        .map(|a| Ok(s0 - scorer.score(receptor, &ligand.without(&[a]))?))
        .collect()
}

/// Size-normalised drop `(S₀ − S(ligand without f)) / |f|` per fragment.
pub fn fragment_deltas(
    scorer: &Scorer,
    receptor: &Molecule,
    ligand: &Molecule,
    fragments: &Fragments,
) -> Result<Vec<f64>, MaskError> {
    fragments.check(ligand.len())?;
    let s0 = scorer.score(receptor, ligand)?;
    fragments
        .list
        .par_iter()
        .map(|(_, atoms)| {
            let mut unique = atoms.clone();
            unique.sort_unstable();
            unique.dedup();
            let s = scorer.score(receptor, &ligand.without(&unique))?;
            Ok((s0 - s) / unique.len() as f64)
        })
        .collect()
}

/// Per-atom mean of the normalised deltas of the fragments containing the
/// atom; `None` for atoms in no fragment.
pub fn fragment_removal_scores(
    scorer: &Scorer,
    receptor: &Molecule,
    ligand: &Molecule,
    fragments: &Fragments,
) -> Result<Vec<Option<f64>>, MaskError> {
    let deltas = fragment_deltas(scorer, receptor, ligand, fragments)?;
    Ok(spread_fragment_deltas(ligand.len(), fragments, &deltas))
}

pub fn spread_fragment_deltas(atoms: usize, fragments: &Fragments, deltas: &[f64]) -> Vec<Option<f64>> {
    let mut sum = vec![0.0; atoms];
    let mut count = vec![0usize; atoms];
    for ((_, members), d) in fragments.list.iter().zip(deltas) {
        let mut unique = members.clone();
        unique.sort_unstable();
        unique.dedup();
        for a in unique {
            sum[a] += d;
            count[a] += 1;
        }
    }
    sum.iter()
        .zip(&count)
        .map(|(s, &c)| (c > 0).then(|| s / c as f64))
        .collect()
}

/// `S₀ − S(receptor without residue)` per residue, in order of first
/// appearance.
pub fn residue_removal_scores(
    scorer: &Scorer,
    receptor: &Molecule,
    ligand: &Molecule,
) -> Result<Vec<(String, f64)>, MaskError> {
    let s0 = scorer.score(receptor, ligand)?;
    receptor
        .residues()
        .into_par_iter()
        .map(|r| {
            let members: Vec<usize> = receptor
                .atoms
                .iter()
                .enumerate()
                .filter(|(_, a)| a.residue_id.as_deref() == Some(r.as_str()))
                .map(|(i, _)| i)
                .collect();
            let s = scorer.score(&receptor.without(&members), ligand)?;
            Ok((r, s0 - s))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomAttribution {
    pub individual: f64,
    pub fragment: Option<f64>,
    /// Mean of `individual` and `fragment`, or `individual` alone.
    pub final_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskReport {
    pub original_score: f64,
    pub atoms: Vec<AtomAttribution>,
    /// `(fragment id, size, normalised delta)`.
    pub fragments: Vec<(String, usize, f64)>,
    pub residues: Vec<(String, f64)>,
}

/// Full attribution of one complex. Fragment terms are included when
/// `fragments` is given and nonempty.
pub fn mask_report(
    scorer: &Scorer,
    receptor: &Molecule,
    ligand: &Molecule,
    fragments: Option<&Fragments>,
) -> Result<MaskReport, MaskError> {
    let original_score = scorer.score(receptor, ligand)?;
    let individual = atom_removal_scores(scorer, receptor, ligand)?;
    let (frag_rows, per_atom) = match fragments.filter(|f| !f.is_empty()) {
        Some(f) => {
            let d = fragment_deltas(scorer, receptor, ligand, f)?;
            let rows = f
                .list
                .iter()
                .zip(&d)
                .map(|((id, m), d)| {
                    let mut u = m.clone();
                    u.sort_unstable();
                    u.dedup();
                    (id.clone(), u.len(), *d)
                })
                .collect();
            (rows, spread_fragment_deltas(ligand.len(), f, &d))
        }
        None => (Vec::new(), vec![None; ligand.len()]),
    };
    let atoms = individual
        .iter()
        .zip(per_atom)
        .map(|(&i, f)| AtomAttribution {
            individual: i,
            fragment: f,
            final_score: f.map_or(i, |f| (i + f) / 2.0),
        })
        .collect();
    Ok(MaskReport {
        original_score,
        atoms,
        fragments: frag_rows,
        residues: residue_removal_scores(scorer, receptor, ligand)?,
    })
}

impl MaskReport {
    pub fn final_scores(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.final_score).collect()
    }

    /// Score of each receptor atom's residue (0 for atoms without one).
    pub fn receptor_atom_scores(&self, receptor: &Molecule) -> Vec<f64> {
        receptor
            .atoms
            .iter()
            .map(|a| {
                a.residue_id
                    .as_ref()
                    .and_then(|r| self.residues.iter().find(|(id, _)| id == r))
                    .map_or(0.0, |(_, d)| *d)
            })
            .collect()
    }

    /// Tab-separated sections: original score, ligand atoms, fragments,
    /// residues.
    pub fn to_text(&self) -> String {
        let mut out = format!("original_score\t{:.9}\n\n# atom\tindividual\tfragment\tfinal\n", self.original_score);
        for (i, a) in self.atoms.iter().enumerate() {
            let f = a.fragment.map_or("-".to_string(), |f| format!("{f:.9}"));
            out.push_str(&format!("{i}\t{:.9}\t{f}\t{:.9}\n", a.individual, a.final_score));
        }
        out.push_str("\n# fragment\tsize\tdelta_per_atom\n");
        for (id, n, d) in &self.fragments {
            out.push_str(&format!("{id}\t{n}\t{d:.9}\n"));
        }
        out.push_str("\n# residue\tdelta\n");
        for (r, d) in &self.residues {
            out.push_str(&format!("{r}\t{d:.9}\n"));
        }
        out
    }
}

/// Runs `f` on a pool of `threads` workers (0 means the global pool).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, MaskError> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| MaskError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}
