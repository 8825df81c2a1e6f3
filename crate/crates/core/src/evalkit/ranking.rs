use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::training::POSITIVE_RMSD;

use super::{EvalError, ScoredExample};

/// Examples grouped by target, in order of first appearance.
pub fn group_by_target(examples: &[ScoredExample]) -> Vec<Vec<&ScoredExample>> {
    let mut groups: Vec<Vec<&ScoredExample>> = Vec::new();
    let mut at: HashMap<&str, usize> = HashMap::new();
    for e in examples {
        let slot = *at.entry(&e.target_id).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(e);
    }
    groups
}

fn low_rmsd(groups: &[Vec<&ScoredExample>]) -> Result<Vec<Vec<bool>>, EvalError> {
    groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|e| {
                    e.rmsd.map(|r| r < POSITIVE_RMSD).ok_or_else(|| EvalError::MissingRmsd {
                        target: e.target_id.clone(),
                        ligand: e.ligand_id.clone(),
                    })
                })
                .collect()
        })
        .collect()
}

/// Poses of `group` ordered by descending score; ties keep input order.
pub fn ranked<'a>(group: &[&'a ScoredExample]) -> Vec<&'a ScoredExample> {
    let mut v = group.to_vec();
    v.sort_by(|a, b| b.score.total_cmp(&a.score));
    v
}

/// Fraction of targets with a pose under 2 Å among their `n` best-scored
/// poses.
pub fn intra_target_topn(examples: &[ScoredExample], n: usize) -> Result<f64, EvalError> {
    let groups = group_by_target(examples);
    if groups.is_empty() {
        return Err(EvalError::Empty);
    }
    low_rmsd(&groups)?;
    let hits = groups
        .iter()
        .filter(|g| ranked(g).iter().take(n).any(|e| e.rmsd.unwrap() < POSITIVE_RMSD))
        .count();
    Ok(hits as f64 / groups.len() as f64)
}

/// Mean and standard deviation over `trials` of the top-`n` fraction when
/// each target's poses are ranked in uniformly random order.
pub fn random_baseline<R: Rng + ?Sized>(
    examples: &[ScoredExample],
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<(f64, f64), EvalError> {
    if trials == 0 {
        return Err(EvalError::Empty);
    }
    let groups = group_by_target(examples);
    if groups.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut low = low_rmsd(&groups)?;
    let mut fractions = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut hits = 0;
        for g in low.iter_mut() {
            g.shuffle(rng);
            if g.iter().take(n).any(|&b| b) {
                hits += 1;
            }
        }
        fractions.push(hits as f64 / groups.len() as f64);
    }
    let mean = fractions.iter().sum::<f64>() / trials as f64;
    let var = fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / trials as f64;
    Ok((mean, var.sqrt()))
}
