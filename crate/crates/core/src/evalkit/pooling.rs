use std::collections::HashMap;

use super::{EvalError, ScoredExample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolMode {
    /// Score of the pose the baseline scorer ranked first.
    Single,
    /// Best score over all poses.
    Multi,
}

impl std::str::FromStr for PoolMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(PoolMode::Single),
            "multi" => Ok(PoolMode::Multi),
            _ => Err(format!("unknown pooling mode '{s}' (expected single or multi)")),
        }
    }
}

impl std::fmt::Display for PoolMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PoolMode::Single => "single",
            PoolMode::Multi => "multi",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LigandScore {
    pub target_id: String,
    pub ligand_id: String,
    /// 1 when any pose of the ligand is labelled positive.
    pub label: u8,
    pub score: f64,
}

/// One score per (target, ligand), in order of first appearance.
pub fn pool_ligand_scores(examples: &[ScoredExample], mode: PoolMode) -> Result<Vec<LigandScore>, EvalError> {
    let mut out: Vec<LigandScore> = Vec::new();
    let mut rank_one: Vec<bool> = Vec::new();
    let mut at: HashMap<(&str, &str), usize> = HashMap::new();
    for e in examples {
        let slot = *at.entry((&e.target_id, &e.ligand_id)).or_insert_with(|| {
            out.push(LigandScore {
                target_id: e.target_id.clone(),
                ligand_id: e.ligand_id.clone(),
                label: 0,
                score: f64::NEG_INFINITY,
            });
            rank_one.push(false);
            out.len() - 1
        });
        let l = &mut out[slot];
        l.label = l.label.max(e.label);
        match mode {
            PoolMode::Multi => l.score = l.score.max(e.score),
            PoolMode::Single => {
                if e.pose_rank == Some(1) {
                    l.score = e.score;
                    rank_one[slot] = true;
                }
            }
        }
    }
    if mode == PoolMode::Single {
        if let Some(i) = rank_one.iter().position(|&r| !r) {
            return Err(EvalError::NoRankOne {
                target: out[i].target_id.clone(),
                ligand: out[i].ligand_id.clone(),
            });
        }
    }
    Ok(out)
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(EvalError::Empty);
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvalError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Probabilities are clamped into `[LOGIT_CLAMP, 1 − LOGIT_CLAMP]`.
pub const LOGIT_CLAMP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Logit {
    pub value: f64,
    pub clamped: bool,
}

/// `ln(p / (1 − p))`.
pub fn logit(p: f64) -> Result<Logit, EvalError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EvalError::BadProbability(p));
    }
    let q = p.clamp(LOGIT_CLAMP, 1.0 - LOGIT_CLAMP);
    Ok(Logit {
        value: (q / (1.0 - q)).ln(),
        clamped: q != p,
    })
}
