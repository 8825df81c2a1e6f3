//! Scores files and evaluation reports.
//!
//! A scores file has one pose per line, whitespace separated:
//!
//! ```text
//! target ligand pose_rank rmsd label score [baseline]
//! ```
//!
//! `pose_rank`, `rmsd` and `baseline` accept `-` for absent; `baseline` is
//! the score of a reference scoring function (e.g. Vina). Lines starting
//! with `#` are comments.

use rand::Rng;

use super::{
    intra_target_topn, logit, pearson, per_target_auc, pool_ligand_scores, random_baseline,
    roc_auc, group_by_target, ranked, EvalError, PoolMode, RocCurve, ScoredExample, TargetAuc,
};

pub fn parse_scores(text: &str) -> Result<Vec<ScoredExample>, EvalError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let bad = |message: String| EvalError::Scores { line: n + 1, message };
        let tok: Vec<&str> = body.split_whitespace().collect();
        if !(6..=7).contains(&tok.len()) {
            return Err(bad(format!("expected 6 or 7 fields, found {}", tok.len())));
        }
        fn opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>, ()> {
            if s == "-" {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| ())
            }
        }
        let label = match tok[4] {
            "0" => 0,
            "1" => 1,
            s => return Err(bad(format!("bad label '{s}'"))),
        };
        let score: f64 = tok[5].parse().map_err(|_| bad(format!("bad score '{}'", tok[5])))?;
        if !score.is_finite() {
            return Err(bad("score is not finite".into()));
        }
        out.push(ScoredExample {
            target_id: tok[0].into(),
            ligand_id: tok[1].into(),
            pose_rank: opt(tok[2]).map_err(|_| bad(format!("bad pose rank '{}'", tok[2])))?,
            rmsd: opt(tok[3]).map_err(|_| bad(format!("bad rmsd '{}'", tok[3])))?,
            label,
            score,
            baseline: match tok.get(6) {
                None => None,
                Some(s) => opt(s).map_err(|_| bad(format!("bad baseline '{s}'")))?,
            },
        });
    }
    Ok(out)
}

pub fn write_scores(examples: &[ScoredExample]) -> String {
    let dash = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let mut out = String::from("# target ligand pose_rank rmsd label score baseline\n");
    for e in examples {
        out.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            e.target_id,
            e.ligand_id,
            dash(e.pose_rank.map(|r| r.to_string())),
            dash(e.rmsd.map(|r| r.to_string())),
            e.label,
            e.score,
            dash(e.baseline.map(|b| b.to_string())),
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopN {
    pub n: usize,
    pub fraction: f64,
    pub random_mean: f64,
    pub random_sd: f64,
}

/// Everything `evaluate` reports. Parts whose inputs are missing (no
/// RMSDs, no baseline scores, a single class) are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub poses: usize,
    pub auc: Option<f64>,
    pub roc: Option<RocCurve>,
    pub per_target: Vec<TargetAuc>,
    pub topn: Option<Vec<TopN>>,
    pub ligand_mode: PoolMode,
    pub ligand_auc: Option<f64>,
    /// Pearson r between logit(score) and the baseline score.
    pub baseline_correlation: Option<f64>,
    pub clamped_logits: usize,
}

pub const TOPN: [usize; 3] = [1, 3, 5];

pub fn evaluate<R: Rng + ?Sized>(
    examples: &[ScoredExample],
    mode: PoolMode,
    trials: usize,
    rng: &mut R,
) -> Result<EvalReport, EvalError> {
    if examples.is_empty() {
        return Err(EvalError::Empty);
    }
    let (roc, auc) = match roc_auc(examples) {
        Ok((c, a)) => (Some(c), Some(a)),
        Err(EvalError::SingleClass) => (None, None),
        Err(e) => return Err(e),
    };
    let topn = if examples.iter().all(|e| e.rmsd.is_some()) {
        let mut v = Vec::new();
        for n in TOPN {
            let (random_mean, random_sd) = random_baseline(examples, n, trials, rng)?;
            v.push(TopN {
                n,
                fraction: intra_target_topn(examples, n)?,
                random_mean,
                random_sd,
            });
        }
        Some(v)
    } else {
        None
    };
    let pooled = pool_ligand_scores(examples, mode)?;
    let scores: Vec<f64> = pooled.iter().map(|l| l.score).collect();
    let labels: Vec<u8> = pooled.iter().map(|l| l.label).collect();
    let ligand_auc = super::auc_of(&scores, &labels);
    let mut clamped_logits = 0;
    let baseline_correlation = if examples.iter().all(|e| e.baseline.is_some()) {
        let mut x = Vec::new();
        for e in examples {
            let l = logit(e.score)?;
            clamped_logits += l.clamped as usize;
            x.push(l.value);
        }
        let y: Vec<f64> = examples.iter().map(|e| e.baseline.unwrap()).collect();
        pearson(&x, &y).ok()
    } else {
        None
    };
    Ok(EvalReport {
        poses: examples.len(),
        auc,
        roc,
        per_target: per_target_auc(examples),
        topn,
        ligand_mode: mode,
        ligand_auc,
        baseline_correlation,
        clamped_logits,
    })
}

impl EvalReport {
    /// `metric<TAB>value` lines, then a per-target AUC table.
    pub fn to_text(&self) -> String {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
        let mut out = format!("poses\t{}\nauc\t{}\n", self.poses, f(self.auc));
        out.push_str(&format!("ligand_auc_{}\t{}\n", self.ligand_mode, f(self.ligand_auc)));
        if let Some(t) = &self.topn {
            for t in t {
                out.push_str(&format!(
                    "top{}\t{:.6}\ntop{}_random\t{:.6}\t{:.6}\n",
                    t.n, t.fraction, t.n, t.random_mean, t.random_sd
                ));
            }
        }
        out.push_str(&format!("pearson_logit_baseline\t{}\n", f(self.baseline_correlation)));
        if self.clamped_logits > 0 {
            out.push_str(&format!("clamped_logits\t{}\n", self.clamped_logits));
        }
        out.push_str("\n# target\tposes\tauc\n");
        for t in &self.per_target {
            out.push_str(&format!("{}\t{}\t{}\n", t.target_id, t.examples, f(t.auc)));
        }
        out
    }
}

/// Per-target pose lists, best score first: `target rank ligand
/// pose_rank rmsd score`.
pub fn rank_report(examples: &[ScoredExample]) -> String {
    let mut out = String::from("# target rank ligand pose_rank rmsd label score\n");
    for g in group_by_target(examples) {
        for (i, e) in ranked(&g).iter().enumerate() {
            out.push_str(&format!(
                "{} {} {} {} {} {} {}\n",
                e.target_id,
                i + 1,
                e.ligand_id,
                e.pose_rank.map_or("-".into(), |r| r.to_string()),
                e.rmsd.map_or("-".into(), |r| r.to_string()),
                e.label,
                e.score
            ));
        }
    }
    out
}
