//! Grids one synthetic complex, then again under a random rotation, and
//! prints per-channel density totals.
//!
//! cargo run --example voxelize_complex -- [seed]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use voxscore::gridgen::{sample_transform, voxelize, GridConfig, Transform};
use voxscore::moldata::AtomTypeScheme;
use voxscore::training::{synthetic_dataset, ComplexSource};

fn main() {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let grid = GridConfig {
        dimension: 12.0,
        resolution: 0.5,
        scheme: AtomTypeScheme::Element18,
        ..GridConfig::default()
    };
    let (index, store) = synthetic_dataset(2, seed, grid.scheme);
    let complex = store.complex(&index.records()[0]).expect("synthetic complex");
    let center = complex.center().expect("ligand has atoms");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotated = sample_transform(&mut rng, 2.0, true).expect("transform");
    for (label, t) in [("identity", Transform::identity()), ("random", rotated)] {
        let g = voxelize(&complex.receptor, &complex.ligand, center, &grid, &t).expect("grid");
        println!("{label}: {}^3 x {} channels, total {:.4}", g.side(), g.channels(), g.total());
        for c in 0..g.channels() {
            let total = g.channel_total(c);
            if total > 0.0 {
                let name = grid.scheme.channel_name(c).unwrap_or_default();
                println!("  {c:2} {name:<18} {total:.4}");
            }
        }
    }
}
