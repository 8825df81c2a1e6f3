use super::{DatasetIndex, TrainError};

/// Cluster-atomic partition of an index.
#[derive(Debug, Clone, PartialEq)]
pub struct Folds {
    /// Cluster ids per fold, in assignment order.
    pub clusters: Vec<Vec<String>>,
    /// Record indices per fold, ascending.
    pub records: Vec<Vec<usize>>,
}

impl Folds {
    pub fn k(&self) -> usize {
        self.records.len()
    }

    /// Records outside fold `fold`, ascending.
    pub fn training(&self, fold: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .records
            .iter()
            .enumerate()
            .filter(|(f, _)| *f != fold)
            .flat_map(|(_, r)| r.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn fold_of(&self, record: usize) -> Option<usize> {
        self.records.iter().position(|r| r.binary_search(&record).is_ok())
    }
}

/// Greedy balancing: clusters in decreasing size (first appearance breaks
/// ties) each go to the fold with the fewest records so far (lowest index
/// breaks ties).
pub fn make_folds(index: &DatasetIndex, k: usize) -> Result<Folds, TrainError> {
    let clusters = index.clusters();
    if k == 0 || clusters.len() < k {
        return Err(TrainError::TooFewClusters {
            clusters: clusters.len(),
            folds: k,
        });
    }
    let mut order: Vec<usize> = (0..clusters.len()).collect();
    order.sort_by(|&a, &b| clusters[b].1.len().cmp(&clusters[a].1.len()));
    let mut folds = Folds {
        clusters: vec![Vec::new(); k],
        records: vec![Vec::new(); k],
    };
    for c in order {
        let target = (0..k).min_by_key(|&f| (folds.records[f].len(), f)).unwrap();
        folds.clusters[target].push(clusters[c].0.clone());
        folds.records[target].extend(&clusters[c].1);
    }
    for r in &mut folds.records {
        r.sort_unstable();
    }
    Ok(folds)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::training::{PoseRecord, Source};

    pub(crate) fn index_with_clusters(sizes: &[usize]) -> DatasetIndex {
        let mut records = Vec::new();
        for (c, &n) in sizes.iter().enumerate() {
            for i in 0..n {
                records.push(PoseRecord {
                    label: (i % 2) as u8,
                    rmsd: None,
                    target_id: format!("t{c}"),
                    cluster_id: format!("c{c}"),
                    source: Source::Csar,
                    receptor: "r".into(),
                    ligand: format!("l{c}_{i}"),
                    vina_rank: None,
                    ligand_id: None,
                });
            }
        }
        DatasetIndex::new(records).unwrap()
    }

    #[test]
    fn equal_clusters_one_per_fold() {
        let f = make_folds(&index_with_clusters(&[4, 4, 4]), 3).unwrap();
        assert_eq!(f.clusters, vec![vec!["c0"], vec!["c1"], vec!["c2"]]);
    }

    #[test]
    fn greedy_hand_example() {
        let f = make_folds(&index_with_clusters(&[10, 5, 3, 2]), 2).unwrap();
        assert_eq!(f.clusters[0], vec!["c0"]);
        assert_eq!(f.clusters[1], vec!["c1", "c2", "c3"]);
        assert_eq!(f.records[0].len(), 10);
        assert_eq!(f.training(0), f.records[1]);
        assert_eq!(f.fold_of(12), Some(1));
    }

    #[test]
    fn too_few_clusters() {
        assert!(matches!(
            make_folds(&index_with_clusters(&[3, 3]), 3),
            Err(TrainError::TooFewClusters { clusters: 2, folds: 3 })
        ));
    }
}
