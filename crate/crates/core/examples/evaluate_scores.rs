//! Scores a simulated docking screen with a noisy scorer and prints the
//! evaluation report (AUC, top-N against random, pooled ligand AUC).
//!
//! cargo run --example evaluate_scores

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voxscore::evalkit::{evaluate, PoolMode, ScoredExample};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut examples = Vec::new();
    for t in 0..6 {
        for l in 0..4 {
            let active = l == 0;
            for rank in 1..=5u32 {
                // actives get a few near-native poses, decoys none
                let rmsd: f64 = if active && rank <= 2 { rng.random_range(0.5..1.8) } else { rng.random_range(4.5..9.0) };
                let label = u8::from(rmsd < 2.0);
                let signal = if label == 1 { 0.7 } else { 0.35 };
                let score = (signal + rng.random_range(-0.3..0.3_f64)).clamp(0.01, 0.99);
                examples.push(ScoredExample {
                    score,
                    label,
                    target_id: format!("target{t}"),
                    ligand_id: format!("lig{l}"),
                    pose_rank: Some(rank),
                    rmsd: Some(rmsd),
                    baseline: Some(-12.0 * rmsd.recip() - rng.random_range(0.0..2.0)),
                });
            }
        }
    }
    let report = evaluate(&examples, PoolMode::Multi, 2000, &mut rng).expect("evaluation");
    print!("{}", report.to_text());
}
