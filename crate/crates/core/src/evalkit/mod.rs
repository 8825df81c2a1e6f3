//! Scoring-quality metrics: ROC/AUC, top-N pose ranking with random
//! baselines, ligand-level pooling and correlation diagnostics.

mod auc;
mod pooling;
mod ranking;
mod scores;

use thiserror::Error;

pub use auc::{auc_of, per_target_auc, roc, roc_auc, RocCurve, TargetAuc};
pub use pooling::{logit, pearson, pool_ligand_scores, LigandScore, Logit, PoolMode, LOGIT_CLAMP};
pub use ranking::{group_by_target, intra_target_topn, random_baseline, ranked};
pub use scores::{evaluate, parse_scores, rank_report, write_scores, EvalReport, TopN, TOPN};

/// A scored pose.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredExample {
    pub score: f64,
    pub label: u8,
    pub target_id: String,
    pub ligand_id: String,
    pub pose_rank: Option<u32>,
    pub rmsd: Option<f64>,
    /// Score of a reference scoring function, if known.
    pub baseline: Option<f64>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("both classes are needed")]
    SingleClass,
    #[error("no examples")]
    Empty,
    #[error("lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("non-finite score")]
    NonFinite,
    #[error("pose of ligand '{ligand}' in target '{target}' has no rmsd")]
    MissingRmsd { target: String, ligand: String },
    #[error("ligand '{ligand}' in target '{target}' has no rank-1 pose")]
    NoRankOne { target: String, ligand: String },
    #[error("zero variance")]
    ZeroVariance,
    #[error("{0} is not a probability")]
    BadProbability(f64),
    #[error("scores line {line}: {message}")]
    Scores { line: usize, message: String },
}
