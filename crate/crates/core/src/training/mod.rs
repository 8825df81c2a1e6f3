//! Dataset indexing, pose labels, clustered folds, balanced batches and
//! the SGD training loop.

pub(crate) mod folds;
mod index;
mod sampler;
mod solver;
mod store;
mod synthetic;
mod train;

use thiserror::Error;

use crate::gridgen::GridError;
use crate::moldata::MolError;
use crate::tensornet::NetError;

pub use folds::{make_folds, Folds};
pub use index::{
    label_pose, parse_index, DatasetIndex, IndexReport, PoseLabel, PoseRecord, Source,
    NEGATIVE_RMSD, POSITIVE_RMSD,
};
pub use sampler::{
    example_input, mix_sources, next_batch, BalancedSampler, BatchItem, BatchSampler, Cycle,
    Mixer, Pick,
};
pub use solver::{lr_at, sgd_step, LrPolicy, SolverConfig};
pub use store::{Complex, ComplexSource, FileStore, MemoryStore};
pub use synthetic::{min_distance, synthetic_dataset, CONTACT_DISTANCE, DECOY_SHIFT};
pub use train::{predict, trace_to_text, train, train_with, TracePoint, TrainOutcome, TrainSet};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("rmsd must be a nonnegative number, got {0}")]
    BadRmsd(f64),
    #[error("index line {line}: {message}")]
    Index { line: usize, message: String },
    #[error("{clusters} clusters cannot fill {folds} folds")]
    TooFewClusters { clusters: usize, folds: usize },
    #[error("balanced sampling needs both classes ({positives} positives, {negatives} negatives)")]
    EmptyClass { positives: usize, negatives: usize },
    #[error("a stream with a nonzero mixing share is empty")]
    EmptyStream,
    #[error("solver config: {0}")]
    Config(String),
    #[error("non-finite gradient at iteration {iteration}, layer {layer}, element {at} (weights then biases)")]
    NonFiniteGradient { iteration: usize, layer: usize, at: usize },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Mol(#[from] MolError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Net(#[from] NetError),
}
