//! Voxel-grid convolutional scoring of protein-ligand poses.
//!
//! - [`moldata`]: structure parsing and atom typing
//! - [`gridgen`]: atom density grids and random transforms
//! - [`tensornet`]: the 3D CNN (forward, backward, checkpoints)
//! - [`training`]: pose indices, folds, balanced batches, SGD
//! - [`evalkit`]: AUC, top-N ranking and correlation metrics
//! - [`maskviz`]: masking attribution and colored structures
//! - [`cli`]: the `voxscore` command line

pub mod cli;
pub mod evalkit;
pub mod gridgen;
pub mod maskviz;
pub mod moldata;
pub mod tensornet;
pub mod training;
