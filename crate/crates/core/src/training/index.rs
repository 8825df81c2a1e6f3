//! Pose index files.
//!
//! One example per line, whitespace separated:
//!
//! ```text
//! label rmsd target cluster source receptor ligand [vina_rank [ligand_id]]
//! ```
//!
//! `label` is `1`/`0` (or `positive`/`negative`), or `-` to derive it from
//! the RMSD; poses that the RMSD rule omits are then skipped. `rmsd`,
//! `vina_rank` and `ligand_id` accept `-` for absent. `source` is `CSAR` or
//! `DUDE`. Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::TrainError;

/// Positive below this RMSD (Å).
pub const POSITIVE_RMSD: f64 = 2.0;
/// Negative above this RMSD (Å).
pub const NEGATIVE_RMSD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoseLabel {
    Positive,
    Negative,
    Omitted,
}

/// `< 2 Å` positive, `> 4 Å` negative, anything in `[2, 4]` omitted.
pub fn label_pose(rmsd: f64) -> Result<PoseLabel, TrainError> {
    if !(rmsd >= 0.0) || !rmsd.is_finite() {
        return Err(TrainError::BadRmsd(rmsd));
    }
    Ok(if rmsd < POSITIVE_RMSD {
        PoseLabel::Positive
    } else if rmsd > NEGATIVE_RMSD {
        PoseLabel::Negative
    } else {
        PoseLabel::Omitted
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Csar,
    Dude,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Csar => "CSAR",
            Source::Dude => "DUDE",
        })
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "CSAR" => Ok(Source::Csar),
            "DUDE" | "DUD-E" => Ok(Source::Dude),
            _ => Err(format!("unknown source '{s}' (expected CSAR or DUDE)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseRecord {
    /// 1 for positive, 0 for negative.
    pub label: u8,
    pub rmsd: Option<f64>,
    pub target_id: String,
    pub cluster_id: String,
    pub source: Source,
    pub receptor: String,
    pub ligand: String,
    pub vina_rank: Option<u32>,
    pub ligand_id: Option<String>,
}

impl PoseRecord {
    /// Ligand identifier, defaulting to the ligand file reference.
    pub fn ligand_key(&self) -> &str {
        self.ligand_id.as_deref().unwrap_or(&self.ligand)
    }
}

/// Labelled poses with target and cluster groupings in order of first
/// appearance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetIndex {
    records: Vec<PoseRecord>,
    targets: Vec<(String, Vec<usize>)>,
    clusters: Vec<(String, Vec<usize>)>,
}

fn group(records: &[PoseRecord], key: impl Fn(&PoseRecord) -> &str) -> Vec<(String, Vec<usize>)> {
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    let mut at = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        let k = key(r);
        let slot = *at.entry(k.to_string()).or_insert_with(|| {
            groups.push((k.to_string(), Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(i);
    }
    groups
}

fn check_record(r: &PoseRecord) -> Result<(), String> {
    if r.label > 1 {
        return Err(format!("label {} is not 0 or 1", r.label));
    }
    for (what, v) in [
        ("target", &r.target_id),
        ("cluster", &r.cluster_id),
        ("receptor", &r.receptor),
        ("ligand", &r.ligand),
    ] {
        if v.is_empty() || v.contains(char::is_whitespace) {
            return Err(format!("{what} must be a nonempty token"));
        }
    }
    if let Some(rmsd) = r.rmsd {
        let expect = match label_pose(rmsd).map_err(|e| e.to_string())? {
            PoseLabel::Positive => 1,
            PoseLabel::Negative => 0,
            PoseLabel::Omitted => {
                return Err(format!("rmsd {rmsd} lies in the omitted band [2, 4]"));
            }
        };
        if r.label != expect {
            return Err(format!("label {} contradicts rmsd {rmsd}", r.label));
        }
    }
    Ok(())
}

impl DatasetIndex {
    pub fn new(records: Vec<PoseRecord>) -> Result<Self, TrainError> {
        for (i, r) in records.iter().enumerate() {
            check_record(r).map_err(|message| TrainError::Index { line: i + 1, message })?;
        }
        Ok(Self::from_checked(records))
    }

    fn from_checked(records: Vec<PoseRecord>) -> Self {
        let targets = group(&records, |r| &r.target_id);
        let clusters = group(&records, |r| &r.cluster_id);
        DatasetIndex {
            records,
            targets,
            clusters,
        }
    }

    pub fn records(&self) -> &[PoseRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn targets(&self) -> &[(String, Vec<usize>)] {
        &self.targets
    }

    pub fn clusters(&self) -> &[(String, Vec<usize>)] {
        &self.clusters
    }

    /// Record indices with the given label.
    pub fn with_label(&self, label: u8) -> Vec<usize> {
        (0..self.records.len())
            .filter(|&i| self.records[i].label == label)
            .collect()
    }

    /// New index holding the records at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> DatasetIndex {
        Self::from_checked(indices.iter().map(|&i| self.records[i].clone()).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let rmsd = r.rmsd.map_or("-".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "{} {} {} {} {} {} {}",
                r.label, rmsd, r.target_id, r.cluster_id, r.source, r.receptor, r.ligand
            ));
            if r.vina_rank.is_some() || r.ligand_id.is_some() {
                let rank = r.vina_rank.map_or("-".to_string(), |v| v.to_string());
                out.push_str(&format!(" {rank}"));
            }
            if let Some(l) = &r.ligand_id {
                out.push_str(&format!(" {l}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Lines read and poses skipped by the RMSD rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IndexReport {
    pub records: usize,
    pub omitted: usize,
}

pub fn parse_index(text: &str) -> Result<(DatasetIndex, IndexReport), TrainError> {
    let mut records = Vec::new();
    let mut report = IndexReport::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let bad = |message: String| TrainError::Index { line, message };
        let tok: Vec<&str> = body.split_whitespace().collect();
        if !(7..=9).contains(&tok.len()) {
            return Err(bad(format!("expected 7 to 9 fields, found {}", tok.len())));
        }
        let rmsd = match tok[1] {
            "-" => None,
            s => Some(s.parse::<f64>().map_err(|_| bad(format!("bad rmsd '{s}'")))?),
        };
        let label = match tok[0] {
            "1" | "positive" => 1,
            "0" | "negative" => 0,
            "-" => {
                let rmsd = rmsd.ok_or_else(|| bad("label '-' needs an rmsd".into()))?;
                match label_pose(rmsd).map_err(|e| bad(e.to_string()))? {
                    PoseLabel::Positive => 1,
                    PoseLabel::Negative => 0,
                    PoseLabel::Omitted => {
                        report.omitted += 1;
                        continue;
                    }
                }
            }
            s => return Err(bad(format!("bad label '{s}'"))),
        };
        let vina_rank = match tok.get(7) {
            None | Some(&"-") => None,
            Some(s) => Some(s.parse().map_err(|_| bad(format!("bad vina rank '{s}'")))?),
        };
        let record = PoseRecord {
            label,
            rmsd,
            target_id: tok[2].into(),
            cluster_id: tok[3].into(),
            source: tok[4].parse().map_err(bad)?,
            receptor: tok[5].into(),
            ligand: tok[6].into(),
            vina_rank,
            ligand_id: tok.get(8).filter(|s| **s != "-").map(|s| s.to_string()),
        };
        check_record(&record).map_err(bad)?;
        records.push(record);
    }
    report.records = records.len();
    Ok((DatasetIndex::from_checked(records), report))
}
