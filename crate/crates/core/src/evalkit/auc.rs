use std::collections::HashMap;

use super::{EvalError, ScoredExample};

/// ROC points from (0, 0) to (1, 1), one per distinct score.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
}

impl RocCurve {
    /// `fpr<TAB>tpr` lines with a header.
    pub fn to_text(&self) -> String {
        let mut out = String::from("fpr\ttpr\n");
        for (f, t) in &self.points {
            out.push_str(&format!("{f:.6}\t{t:.6}\n"));
        }
        out
    }
}

/// ROC curve and trapezoidal AUC of `(score, label)` pairs. Tied scores
/// form one diagonal segment, so the AUC equals
/// `P(s⁺ > s⁻) + ½·P(s⁺ = s⁻)`.
pub fn roc(scores: &[f64], labels: &[u8]) -> Result<(RocCurve, f64), EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    let pos = labels.iter().filter(|&&l| l == 1).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    // twice the area, in units of one positive-negative pair
    let mut area2 = 0u64;
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (mut dtp, mut dfp) = (0u64, 0u64);
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] == 1 {
                dtp += 1;
            } else {
                dfp += 1;
            }
            i += 1;
        }
        area2 += dfp * (2 * tp + dtp);
        tp += dtp;
        fp += dfp;
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Ok((RocCurve { points }, area2 as f64 / (2 * pos * neg) as f64))
}

pub fn roc_auc(examples: &[ScoredExample]) -> Result<(RocCurve, f64), EvalError> {
    let scores: Vec<f64> = examples.iter().map(|e| e.score).collect();
    let labels: Vec<u8> = examples.iter().map(|e| e.label).collect();
    roc(&scores, &labels)
}

/// AUC, or `None` when a class is missing.
pub fn auc_of(scores: &[f64], labels: &[u8]) -> Option<f64> {
    roc(scores, labels).ok().map(|(_, a)| a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetAuc {
    pub target_id: String,
    pub examples: usize,
    /// Absent for single-class targets.
    pub auc: Option<f64>,
}

/// AUC of each target's examples, targets in order of first appearance.
pub fn per_target_auc(examples: &[ScoredExample]) -> Vec<TargetAuc> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<ScoredExample>> = HashMap::new();
    for e in examples {
        let g = groups.entry(&e.target_id).or_insert_with(|| {
            order.push(&e.target_id);
            Vec::new()
        });
        g.push(e.clone());
    }
    order
        .into_iter()
        .map(|t| {
            let g = &groups[t];
            TargetAuc {
                target_id: t.to_string(),
                examples: g.len(),
                auc: roc_auc(g).ok().map(|(_, a)| a),
            }
        })
        .collect()
}
