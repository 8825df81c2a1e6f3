//! Trains a small CNN on synthetic contact/no-contact complexes and prints
//! the loss and AUC trace.
//!
//! cargo run --release --example train_toy -- [iterations] [seed]

use voxscore::gridgen::GridConfig;
use voxscore::moldata::AtomTypeScheme;
use voxscore::tensornet::{build_model, ModelOptions};
use voxscore::training::{synthetic_dataset, train_with, SolverConfig, TrainSet};

fn main() {
    let mut args = std::env::args().skip(1);
    let iterations = args.next().map_or(2000, |s| s.parse().expect("iterations"));
    let seed = args.next().map_or(0, |s| s.parse().expect("seed"));

    let grid = GridConfig {
        dimension: 16.0,
        resolution: 1.0,
        scheme: AtomTypeScheme::Binary2,
        ..GridConfig::default()
    };
    let (index, store) = synthetic_dataset(32, seed, grid.scheme);
    let opts = ModelOptions { base_width: 4, ..ModelOptions::default() };
    let spec = build_model(grid.channels(), grid.side().unwrap(), &opts).unwrap();
    let config = SolverConfig {
        iterations,
        seed,
        test_interval: 250,
        ..SolverConfig::default()
    };
    let set = TrainSet {
        index: &index,
        store: &store,
        grid,
        train: (0..16).collect(),
        test: (16..32).collect(),
    };
    println!("{}", spec.describe());
    let start = std::time::Instant::now();
    let outcome = train_with(&set, &spec, &config, &mut |p| {
        println!(
            "iter {:5}  loss {:.4}  train auc {:.3}  test auc {:.3}",
            p.iteration,
            p.loss,
            p.train_auc.unwrap_or(f64::NAN),
            p.test_auc.unwrap_or(f64::NAN)
        );
    })
    .unwrap();
    println!("{} parameters, {:.1?}", outcome.weights.param_count(), start.elapsed());
}
