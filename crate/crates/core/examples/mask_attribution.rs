//! Trains a small model on synthetic complexes, then explains one positive
//! pose by masking: per-atom, per-fragment and per-residue score changes,
//! and the ligand written as a B-factor colored structure.
//!
//! cargo run --release --example mask_attribution -- [iterations]

use voxscore::gridgen::GridConfig;
use voxscore::maskviz::{mask_report, write_colored_structure, Fragments, Scorer};
use voxscore::moldata::AtomTypeScheme;
use voxscore::tensornet::{build_model, ModelOptions};
use voxscore::training::{synthetic_dataset, train, ComplexSource, SolverConfig, TrainSet};

fn main() {
    let iterations = std::env::args().nth(1).map_or(300, |s| s.parse().expect("iterations"));
    let grid = GridConfig {
        dimension: 16.0,
        resolution: 1.0,
        scheme: AtomTypeScheme::Binary2,
        ..GridConfig::default()
    };
    let (index, store) = synthetic_dataset(16, 1, grid.scheme);
    let spec = build_model(grid.channels(), 16, &ModelOptions { base_width: 4, ..ModelOptions::default() }).unwrap();
    let config = SolverConfig { iterations, test_interval: 0, ..SolverConfig::default() };
    let set = TrainSet { index: &index, store: &store, grid, train: (0..16).collect(), test: Vec::new() };
    let weights = train(&set, &spec, &config).expect("training").weights;

    let complex = store.complex(&index.records()[0]).unwrap();
    let scorer = Scorer::new(&spec, &weights, grid, complex.center().unwrap()).unwrap();
    let fragments = Fragments::parse("head: 0\ntail: 1 2\n").unwrap();
    let report = mask_report(&scorer, &complex.receptor, &complex.ligand, Some(&fragments)).unwrap();
    print!("{}", report.to_text());
    let (pdb, _) = write_colored_structure(&complex.ligand, &report.final_scores()).unwrap();
    print!("{pdb}");
}
