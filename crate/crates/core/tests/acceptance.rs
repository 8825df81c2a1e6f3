//! Acceptance criteria 1-12, run in order with one PASS/FAIL line each.
//!
//! This target has its own `main` (no libtest harness), so the criteria run
//! one after another without other tests competing for the CPU and the lines
//! are always printed. `cargo test --release --test acceptance` runs it;
//! set `ACCEPTANCE_ONLY=1,10` to run a subset.

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use voxscore::evalkit::{intra_target_topn, random_baseline, roc, ScoredExample};
use voxscore::gridgen::{atom_density, voxelize, GridConfig, Transform};
use voxscore::maskviz::{
    atom_removal_scores, mask_report, read_bfactors, residue_removal_scores, with_threads, write_colored_structure,
    Fragments, Scorer, BFACTOR_LIMIT,
};
use voxscore::moldata::{
    assign_types, read_gninatypes, write_gninatypes, AtomFlags, AtomTypeScheme, Element, Molecule, Role, TypedAtom,
};
use voxscore::tensornet::{
    backward, build_model, forward_trace, init_weights, load_checkpoint, loss, save_checkpoint, LayerSpec, Mode,
    ModelOptions, NetworkSpec, PoolMode, Tensor, WeightSet,
};
use voxscore::training::{
    label_pose, lr_at, make_folds, mix_sources, parse_index, sgd_step, synthetic_dataset, train, train_with,
    BatchSampler, DatasetIndex, LrPolicy, Mixer, Pick, PoseLabel, PoseRecord, SolverConfig, Source, TrainSet,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed > limit {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------- 1

/// Piecewise density written out directly: Gaussian inside r, the fixed
/// quadratic out to 1.5 r, zero beyond.
fn density_oracle(d: f64, r: f64) -> f64 {
    let e2 = 1.0f64.exp().powi(2);
    if d < r {
        (-2.0 * d * d / (r * r)).exp()
    } else if d < 1.5 * r {
        4.0 / (e2 * r * r) * d * d - 12.0 / (e2 * r) * d + 9.0 / e2
    } else {
        0.0
    }
}

fn density_correctness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let r = rng.random_range(0.3..3.0);
        let d = rng.random_range(0.0..2.0 * r);
        let got = atom_density(d, r, 1.5).map_err(|e| e.to_string())?;
        worst = worst.max((got - density_oracle(d, r)).abs());
    }
    ensure!(worst < 1e-12, "max abs error {worst:e}");

    let a = |d: f64, r: f64| atom_density(d, r, 1.5).unwrap();
    let eps = 1e-7;
    let mut worst_jump: f64 = 0.0;
    let mut worst_slope: f64 = 0.0;
    for r in [0.5, 1.0, 1.9, 2.5] {
        for x in [r, 1.5 * r] {
            worst_jump = worst_jump.max((a(x - eps, r) - a(x + eps, r)).abs());
            let left = (a(x, r) - a(x - eps, r)) / eps;
            let right = (a(x + eps, r) - a(x, r)) / eps;
            worst_slope = worst_slope.max((left - right).abs());
        }
    }
    ensure!(worst_jump < 1e-6, "value jump {worst_jump:e}");
    ensure!(worst_slope < 1e-6, "slope jump {worst_slope:e}");
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "max |err| {worst:.1e} over 1e4 pairs, jump {worst_jump:.1e}, slope gap {worst_slope:.1e}, {:.0?}",
        start.elapsed()
    ))
}

// ---------------------------------------------------------------- 2

fn random_molecule(rng: &mut ChaCha8Rng, role: Role, n: usize, spread: f64) -> Molecule {
    let elements = [Element::C, Element::N, Element::O, Element::S];
    let atoms = (0..n)
        .map(|i| {
            let flags = AtomFlags {
                hydrophobe: rng.random_bool(0.5),
                ..AtomFlags::default()
            };
            let pos = [0, 1, 2].map(|_| rng.random_range(-spread..spread));
            let a = TypedAtom::new(elements[rng.random_range(0..4)], pos, role, flags);
            match role {
                Role::Receptor => a.with_residue(format!("R{}", i % 2)),
                Role::Ligand => a,
            }
        })
        .collect();
    assign_types(&Molecule::new("m", role, atoms), AtomTypeScheme::Smina34).0
}

/// Every channel, every point, every atom: no cutoffs, no ranges.
fn naive_grid(rec: &Molecule, lig: &Molecule, center: [f64; 3], cfg: &GridConfig) -> Vec<f32> {
    let n = cfg.side().unwrap();
    let channels = cfg.channels();
    let coord = |c: f64, i: usize| c + (i as f64 - (n as f64 - 1.0) / 2.0) * cfg.resolution;
    let mut out = vec![0.0f32; channels * n * n * n];
    for (c, slab) in out.chunks_mut(n * n * n).enumerate() {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = [coord(center[0], i), coord(center[1], j), coord(center[2], k)];
                    let mut acc = 0.0f32;
                    for a in rec.atoms.iter().chain(&lig.atoms) {
                        if a.channel.index() != Some(c) {
                            continue;
                        }
                        let (dx, dy, dz) = (p[0] - a.position[0], p[1] - a.position[1], p[2] - a.position[2]);
                        let d = (dx * dx + dy * dy + dz * dz).sqrt();
                        acc += atom_density(d, a.vdw_radius, cfg.radius_multiplier).unwrap() as f32;
                    }
                    slab[(i * n + j) * n + k] = acc;
                }
            }
        }
    }
    out
}

fn grid_oracle() -> Outcome {
    let start = Instant::now();
    let cfg = GridConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..3 {
        let rec = random_molecule(&mut rng, Role::Receptor, 2, 6.0);
        let lig = random_molecule(&mut rng, Role::Ligand, 3, 3.0);
        let center = [0, 1, 2].map(|_| rng.random_range(-0.5..0.5));
        let g = voxelize(&rec, &lig, center, &cfg, &Transform::identity()).map_err(|e| e.to_string())?;
        let reference = naive_grid(&rec, &lig, center, &cfg);
        let same = g.values().iter().zip(&reference).all(|(a, b)| a.to_bits() == b.to_bits());
        ensure!(same, "trial {trial}: grid differs from the naive reference");
    }

    // p' = R p about the center, so G'(R p) = G(p).
    let n = cfg.side().unwrap();
    let mut worst: f64 = 0.0;
    for axis in 0..3 {
        let rec = random_molecule(&mut rng, Role::Receptor, 2, 5.0);
        let lig = random_molecule(&mut rng, Role::Ligand, 3, 3.0);
        let center = [0.0; 3];
        let mut unit = [0.0; 3];
        unit[axis] = 1.0;
        let t = Transform::from_axis_angle(unit, FRAC_PI_2).map_err(|e| e.to_string())?;
        let g = voxelize(&rec, &lig, center, &cfg, &Transform::identity()).unwrap();
        let r = voxelize(&rec, &lig, center, &cfg, &t).unwrap();
        // rotation by +90° about `axis` maps (u, v) -> (-v, u) on the other two axes
        let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
        for c in 0..cfg.channels() {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let idx = [i, j, k];
                        let mut img = idx;
                        img[a] = n - 1 - idx[b];
                        img[b] = idx[a];
                        let diff = (g.get(c, i, j, k) - r.get(c, img[0], img[1], img[2])).abs();
                        worst = worst.max(diff as f64);
                    }
                }
            }
        }
    }
    ensure!(worst < 1e-6, "rotation vs permutation differs by {worst:e}");
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "3 random complexes bit-exact at 48^3 x 34, 90° rotations max diff {worst:.1e}, {:.1?}",
        start.elapsed()
    ))
}

// ---------------------------------------------------------------- 3

fn loss_of(spec: &NetworkSpec, w: &WeightSet, x: &Tensor, label: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = forward_trace(spec, w, x, Mode::Train(&mut rng)).unwrap();
    loss(t.probabilities(), label).unwrap().value
}

/// Central difference at a step that has converged: the estimate at `h`
/// must agree with the estimate at `h/2`, which rules out steps that
/// straddle a ReLU or max-pool kink.
fn converged_difference(f: &mut dyn FnMut(f64) -> f64, v: f64) -> f64 {
    let mut h = 1e-4 * v.abs().max(1.0);
    let central = |f: &mut dyn FnMut(f64) -> f64, h: f64| (f(v + h) - f(v - h)) / (2.0 * h);
    let mut prev = central(f, h);
    for _ in 0..12 {
        h /= 2.0;
        let next = central(f, h);
        if (next - prev).abs() <= 1e-6 * next.abs().max(prev.abs()) + 1e-10 {
            return next;
        }
        prev = next;
    }
    prev
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
}

/// Largest relative error over every weight, bias and input coordinate.
fn gradient_check(spec: &NetworkSpec, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = init_weights(spec, &mut rng).unwrap();
    let dims = spec.input_shape().dims();
    let len: usize = dims.iter().product();
    let x = Tensor::new(dims, (0..len).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap();
    let label = rng.random_range(0..2usize);
    let mask_seed = seed + 1000;

    let mut mask_rng = ChaCha8Rng::seed_from_u64(mask_seed);
    let trace = forward_trace(spec, &w, &x, Mode::Train(&mut mask_rng)).unwrap();
    let g = backward(spec, &w, &trace, label).unwrap();

    let mut worst: f64 = 0.0;
    for l in 0..w.layers.len() {
        let Some(p) = &w.layers[l] else { continue };
        for bias in [false, true] {
            let n = if bias { p.bias.len() } else { p.weight.len() };
            for i in 0..n {
                let get = |w: &WeightSet| {
                    let p = w.layers[l].as_ref().unwrap();
                    if bias { p.bias.data()[i] } else { p.weight.data()[i] }
                };
                let v = get(&w);
                let mut probe = w.clone();
                let mut f = |t: f64| {
                    let p = probe.layers[l].as_mut().unwrap();
                    if bias { p.bias.data_mut()[i] = t } else { p.weight.data_mut()[i] = t }
                    loss_of(spec, &probe, &x, label, mask_seed)
                };
                let numeric = converged_difference(&mut f, v);
                worst = worst.max(rel_err(get(&g.weights), numeric));
            }
        }
    }
    for i in 0..x.len() {
        let mut probe = x.clone();
        let mut f = |t: f64| {
            probe.data_mut()[i] = t;
            loss_of(spec, &w, &probe, label, mask_seed)
        };
        let numeric = converged_difference(&mut f, x.data()[i]);
        worst = worst.max(rel_err(g.input.data()[i], numeric));
    }
    worst
}

fn head(input_channels: usize, input_side: usize, mut layers: Vec<LayerSpec>) -> NetworkSpec {
    layers.push(LayerSpec::FullyConnected { outputs: 2 });
    layers.push(LayerSpec::Softmax);
    NetworkSpec {
        input_channels,
        input_side,
        layers,
    }
}

fn gradient_checks() -> Outcome {
    let start = Instant::now();
    let single: Vec<(&str, NetworkSpec)> = vec![
        ("conv", head(2, 4, vec![LayerSpec::Conv3d { filters: 3 }])),
        ("relu", head(2, 3, vec![LayerSpec::Relu])),
        ("maxpool", head(2, 4, vec![LayerSpec::Pool { mode: PoolMode::Max, kernel: 2 }])),
        ("avgpool", head(2, 4, vec![LayerSpec::Pool { mode: PoolMode::Average, kernel: 2 }])),
        ("dropout", head(2, 3, vec![LayerSpec::Dropout { ratio: 0.5 }])),
        ("fc", head(1, 3, vec![LayerSpec::FullyConnected { outputs: 5 }])),
    ];
    let composed = build_model(2, 8, &ModelOptions { base_width: 4, depth: 3, ..ModelOptions::default() })
        .map_err(|e| e.to_string())?;
    let mut report = Vec::new();
    for (name, spec) in single.iter().map(|(n, s)| (*n, s)).chain([("final", &composed)]) {
        let worst = (0..3).map(|seed| gradient_check(spec, seed)).fold(0.0, f64::max);
        ensure!(worst < 1e-4, "{name}: relative error {worst:e}");
        report.push(format!("{name} {worst:.0e}"));
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("3 seeds each, worst rel err: {}, {:.1?}", report.join(", "), start.elapsed()))
}

// ---------------------------------------------------------------- 4, 5

fn toy_grid() -> GridConfig {
    GridConfig {
        dimension: 16.0,
        resolution: 1.0,
        scheme: AtomTypeScheme::Binary2,
        ..GridConfig::default()
    }
}

fn toy_spec() -> NetworkSpec {
    build_model(2, 16, &ModelOptions { base_width: 4, ..ModelOptions::default() }).unwrap()
}

fn learning_sanity() -> Outcome {
    let start = Instant::now();
    let grid = toy_grid();
    let spec = toy_spec();
    let (index, store) = synthetic_dataset(32, 0, grid.scheme);
    let set = TrainSet {
        index: &index,
        store: &store,
        grid,
        train: (0..32).collect(),
        test: Vec::new(),
    };
    let config = SolverConfig {
        iterations: 2000,
        test_interval: 250,
        seed: 11,
        ..SolverConfig::default()
    };
    let mut reached = None;
    let run = train_with(&set, &spec, &config, &mut |p| {
        if reached.is_none() && p.train_auc.is_some_and(|a| a >= 0.95) {
            reached = Some(p.iteration);
        }
    })
    .map_err(|e| e.to_string())?;
    let last = run.trace.last().and_then(|p| p.train_auc).unwrap_or(f64::NAN);
    let elapsed = start.elapsed();
    let Some(at) = reached else {
        return Err(format!("training AUC never reached 0.95 (final {last:.3})"));
    };

    let again = train(&set, &spec, &config).map_err(|e| e.to_string())?;
    let a = save_checkpoint(&spec, &run.weights).unwrap();
    let b = save_checkpoint(&spec, &again.weights).unwrap();
    ensure!(a == b, "two runs with seed {} gave different weights", config.seed);
    ensure!(
        run.trace.iter().zip(&again.trace).all(|(x, y)| x.loss.to_bits() == y.loss.to_bits()),
        "two runs with seed {} gave different loss traces",
        config.seed
    );
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!(
        "train AUC >= 0.95 at iteration {at}, final {last:.3}; rerun bit-identical; {elapsed:.1?} per run"
    ))
}

/// Iterations per run for the augmentation comparison.
const AUGMENT_ITERATIONS: usize = 500;

fn augmentation_effect() -> Outcome {
    let start = Instant::now();
    let grid = toy_grid();
    let spec = toy_spec();
    let mut means = [0.0; 2];
    let mut rows = Vec::new();
    for seed in 0..5u64 {
        let (index, store) = synthetic_dataset(32, seed, grid.scheme);
        let set = TrainSet {
            index: &index,
            store: &store,
            grid,
            train: (0..16).collect(),
            test: (16..32).collect(),
        };
        let mut pair = [0.0; 2];
        for (slot, rotate) in [(0, true), (1, false)] {
            let config = SolverConfig {
                iterations: AUGMENT_ITERATIONS,
                test_interval: 0,
                seed,
                rotate,
                ..SolverConfig::default()
            };
            let run = train(&set, &spec, &config).map_err(|e| e.to_string())?;
            let auc = run.trace.last().and_then(|p| p.test_auc).ok_or("no held-out AUC in trace")?;
            pair[slot] = auc;
            means[slot] += auc / 5.0;
        }
        rows.push(format!("{:.3}/{:.3}", pair[0], pair[1]));
    }
    let detail = format!(
        "held-out AUC with rotation {:.4}, without {:.4} (per seed {}), {AUGMENT_ITERATIONS} iterations, {:.1?}",
        means[0],
        means[1],
        rows.join(" "),
        start.elapsed()
    );
    ensure!(means[0] >= means[1], "{detail}");
    Ok(detail)
}

// ---------------------------------------------------------------- 6

fn scalar(v: f64) -> WeightSet {
    let p = voxscore::tensornet::Params {
        weight: Tensor::new(vec![1, 1], vec![v]).unwrap(),
        bias: Tensor::new(vec![1], vec![0.0]).unwrap(),
    };
    WeightSet { layers: vec![Some(p)] }
}

fn solver_schedule() -> Outcome {
    let cfg = SolverConfig::default();
    for (iter, want) in [(0, 0.01), (1000, 0.005), (9000, 0.001)] {
        let got = lr_at(iter, &cfg);
        ensure!(got == want, "lr_at({iter}) = {got:e}, want {want}");
    }

    // w=1, g=1, no momentum, lr 0.01, no decay -> 0.99
    let plain = SolverConfig {
        momentum: 0.0,
        weight_decay: 0.0,
        lr_policy: LrPolicy::Fixed,
        ..SolverConfig::default()
    };
    let mut w = scalar(1.0);
    let mut v = scalar(0.0);
    sgd_step(&mut w, &scalar(1.0), &mut v, 0, &plain).map_err(|e| e.to_string())?;
    let one = w.layers[0].as_ref().unwrap().weight.data()[0];
    ensure!((one - 0.99).abs() < 1e-12, "one step gave {one}");

    // recurrence v <- mu v - lr (g + lambda w), w <- w + v, checked over many
    // steps with decay and the inverse schedule
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut two_step = 0.0;
    for (case, cfg) in [
        SolverConfig { momentum: 0.9, weight_decay: 0.0, lr_policy: LrPolicy::Fixed, ..SolverConfig::default() },
        SolverConfig::default(),
    ]
    .into_iter()
    .enumerate()
    {
        let (mut ow, mut ov) = (1.0f64, 0.0f64);
        let mut w = scalar(1.0);
        let mut v = scalar(0.0);
        for iter in 0..50 {
            let g = if case == 0 { 1.0 } else { rng.random_range(-1.0..1.0) };
            let lr = match cfg.lr_policy {
                LrPolicy::Fixed => cfg.base_lr,
                LrPolicy::Inverse => cfg.base_lr / (1.0 + cfg.gamma * iter as f64).powf(cfg.power),
            };
            ov = cfg.momentum * ov - lr * (g + cfg.weight_decay * ow);
            ow += ov;
            sgd_step(&mut w, &scalar(g), &mut v, iter, &cfg).map_err(|e| e.to_string())?;
            let got = w.layers[0].as_ref().unwrap().weight.data()[0];
            worst = worst.max((got - ow).abs());
            if case == 0 && iter == 1 {
                two_step = got;
            }
        }
    }
    ensure!(worst < 1e-12, "sgd_step departs from the recurrence by {worst:e}");
    ensure!((two_step - 0.971).abs() < 1e-12, "two momentum steps gave {two_step}");
    Ok(format!(
        "lr exact; one step 0.99; two momentum steps {two_step:.3}; 50-step recurrences within {worst:.0e}"
    ))
}

// ---------------------------------------------------------------- 7

fn pose_record(label: u8, target: usize, cluster: usize, source: Source, i: usize) -> PoseRecord {
    PoseRecord {
        label,
        rmsd: None,
        target_id: format!("t{target}"),
        cluster_id: format!("c{cluster}"),
        source,
        receptor: format!("r{target}"),
        ligand: format!("l{i}"),
        vina_rank: None,
        ligand_id: None,
    }
}

fn batch_balance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // 3 positives against 40 negatives, and a second source
    let mut records = Vec::new();
    for i in 0..43 {
        records.push(pose_record(u8::from(i < 3), i % 5, i % 5, Source::Csar, i));
    }
    for i in 43..70 {
        records.push(pose_record(u8::from(i % 3 == 0), i % 4, 9, Source::Dude, i));
    }
    let index = DatasetIndex::new(records).map_err(|e| e.to_string())?;
    let csar: Vec<usize> = (0..43).collect();
    let dude: Vec<usize> = (43..70).collect();

    let mut sampler = BatchSampler::single(&index, &csar).map_err(|e| e.to_string())?;
    for b in 0..10_000 {
        let batch = sampler.plan(&mut rng, 10).map_err(|e| e.to_string())?;
        let pos = batch.iter().filter(|(r, l)| *l == 1 && index.records()[*r].label == 1).count();
        let neg = batch.iter().filter(|(r, l)| *l == 0 && index.records()[*r].label == 0).count();
        ensure!(batch.len() == 10 && pos == 5 && neg == 5, "batch {b}: {pos} positive, {neg} negative");
    }

    let mut mixer = Mixer::new(2, 1).unwrap();
    let a = (0..3000).filter(|_| mixer.next_pick() == Pick::A).count();
    ensure!(a == 2000, "mixer gave {a}/{}", 3000 - a);
    let drawn: Vec<char> = mix_sources(std::iter::repeat('d'), std::iter::repeat('c'), (2, 1))
        .map_err(|e| e.to_string())?
        .take(3000)
        .collect();
    let d = drawn.iter().filter(|&&c| c == 'd').count();
    ensure!(d == 2000, "stream mixing gave {d}/{}", 3000 - d);

    // mixed batches: 600 batches of 5 pairs = 3000 pairs
    let mut mixed = BatchSampler::mixed(&index, &dude, &csar, (2, 1)).map_err(|e| e.to_string())?;
    let mut from_dude = 0;
    for _ in 0..600 {
        let batch = mixed.plan(&mut rng, 10).map_err(|e| e.to_string())?;
        let pos = batch.iter().filter(|(_, l)| *l == 1).count();
        ensure!(pos == 5, "mixed batch with {pos} positives");
        from_dude += batch.iter().filter(|(r, _)| index.records()[*r].source == Source::Dude).count();
    }
    ensure!(from_dude == 4000, "mixed batches drew {from_dude} of 6000 examples from DUDE");
    Ok("10^4 batches 5+/5-; 3000 picks 2000/1000; mixed batches 2000/1000 pairs".into())
}

// ---------------------------------------------------------------- 8

fn metric_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..1000 {
        let n = rng.random_range(2..=200);
        let levels = rng.random_range(1..=20);
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..levels) as f64 / levels as f64).collect();
        let mut labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        labels[0] = 1;
        labels[1] = 0;
        let (_, auc) = roc(&scores, &labels).map_err(|e| e.to_string())?;
        let (mut twice, mut p, mut q) = (0u64, 0u64, 0u64);
        for i in 0..n {
            if labels[i] == 1 {
                p += 1;
                for j in 0..n {
                    if labels[j] == 0 {
                        twice += match scores[i].partial_cmp(&scores[j]).unwrap() {
                            std::cmp::Ordering::Greater => 2,
                            std::cmp::Ordering::Equal => 1,
                            std::cmp::Ordering::Less => 0,
                        };
                    }
                }
            } else {
                q += 1;
            }
        }
        let pairwise = twice as f64 / (2 * p * q) as f64;
        ensure!(auc == pairwise, "trial {trial}: trapezoid {auc} vs pairwise {pairwise}");
    }

    let pose = |t: usize, score: f64, rmsd: f64| ScoredExample {
        score,
        label: u8::from(rmsd < 2.0),
        target_id: format!("t{t}"),
        ligand_id: "l".into(),
        pose_rank: None,
        rmsd: Some(rmsd),
        baseline: None,
    };
    for _ in 0..200 {
        let mut ex = Vec::new();
        for t in 0..rng.random_range(1..8) {
            for _ in 0..rng.random_range(1..10) {
                ex.push(pose(t, rng.random_range(0..5) as f64, rng.random_range(0.0..8.0)));
            }
        }
        let mut prev = 0.0;
        for n in 1..=10 {
            let v = intra_target_topn(&ex, n).map_err(|e| e.to_string())?;
            ensure!(v >= prev, "top-{n} {v} below top-{} {prev}", n - 1);
            prev = v;
        }
    }

    let one_of_four = vec![pose(0, 0.1, 1.0), pose(0, 0.2, 5.0), pose(0, 0.3, 6.0), pose(0, 0.4, 7.0)];
    let (mean, _) = random_baseline(&one_of_four, 1, 2000, &mut rng).map_err(|e| e.to_string())?;
    let sigma = (0.25f64 * 0.75 / 2000.0).sqrt();
    ensure!((mean - 0.25).abs() <= 3.0 * sigma, "random top-1 {mean}, 3 sigma {:.4}", 3.0 * sigma);
    Ok(format!("1000 AUC instances exact; top-N monotone on 200 sets; 1-of-4 random top-1 {mean:.4}"))
}

// ---------------------------------------------------------------- 9

fn fold_integrity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..30 {
        let clusters = rng.random_range(3..=500);
        let k = rng.random_range(2..=5.min(clusters));
        let mut records = Vec::new();
        let mut largest = 0;
        for c in 0..clusters {
            let size = if rng.random_bool(0.05) { rng.random_range(20..80) } else { rng.random_range(1..10) };
            largest = largest.max(size);
            let targets = rng.random_range(1..=3);
            for _ in 0..size {
                let i = records.len();
                records.push(pose_record((i % 2) as u8, c * 10 + rng.random_range(0..targets), c, Source::Csar, i));
            }
        }
        records.shuffle(&mut rng);
        let index = DatasetIndex::new(records).map_err(|e| e.to_string())?;
        let folds = make_folds(&index, k).map_err(|e| e.to_string())?;
        let mut home: std::collections::HashMap<&str, usize> = Default::default();
        let mut seen = vec![false; index.len()];
        for f in 0..k {
            for &r in &folds.records[f] {
                ensure!(!seen[r], "trial {trial}: record {r} in two folds");
                seen[r] = true;
                let c = index.records()[r].cluster_id.as_str();
                let at = *home.entry(c).or_insert(f);
                ensure!(at == f, "trial {trial}: cluster {c} spans folds {at} and {f}");
            }
        }
        ensure!(seen.iter().all(|&s| s), "trial {trial}: a record is in no fold");
        let sizes: Vec<usize> = folds.records.iter().map(Vec::len).collect();
        let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();
        ensure!(spread <= largest, "trial {trial}: fold sizes {sizes:?}, largest cluster {largest}");
    }
    Ok("30 random indices up to 500 clusters: clusters atomic, size spread within largest cluster".into())
}

// ---------------------------------------------------------------- 10

fn format_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for role in [Role::Ligand, Role::Receptor] {
        for _ in 0..20 {
            let n = rng.random_range(1..40);
            let mol = random_molecule(&mut rng, role, n, 30.0);
            let bytes = write_gninatypes(&mol).map_err(|e| e.to_string())?;
            let back = read_gninatypes(&bytes).map_err(|e| e.to_string())?;
            let again = write_gninatypes(&back).map_err(|e| e.to_string())?;
            ensure!(bytes == again, "gninatypes bytes changed on round trip");
            let typed: Vec<&TypedAtom> = mol.atoms.iter().filter(|a| a.channel.index().is_some()).collect();
            ensure!(typed.len() == back.len(), "read {} of {} typed atoms", back.len(), typed.len());
            for (a, b) in typed.into_iter().zip(&back.atoms) {
                ensure!(a.channel == b.channel, "atom type changed on round trip");
                ensure!(
                    a.position.iter().zip(&b.position).all(|(x, y)| (*x as f32).to_bits() == (*y as f32).to_bits()),
                    "coordinates changed on round trip"
                );
            }
        }
    }

    let spec = toy_spec();
    let w = init_weights(&spec, &mut rng).unwrap();
    let bytes = save_checkpoint(&spec, &w).map_err(|e| e.to_string())?;
    let (spec2, w2) = load_checkpoint(&bytes, Some(&spec)).map_err(|e| e.to_string())?;
    ensure!(spec2 == spec, "network changed on round trip");
    ensure!(save_checkpoint(&spec2, &w2).unwrap() == bytes, "checkpoint bytes changed on round trip");

    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mol = random_molecule(&mut rng, Role::Receptor, 50, 40.0);
        let scores: Vec<f64> = (0..mol.len()).map(|_| rng.random_range(-99.99..99.99)).collect();
        let (pdb, clamped) = write_colored_structure(&mol, &scores).map_err(|e| e.to_string())?;
        ensure!(clamped == 0, "in-range scores were clamped");
        let back = read_bfactors(&pdb).map_err(|e| e.to_string())?;
        ensure!(back.len() == scores.len(), "read {} of {} temperature factors", back.len(), scores.len());
        for (a, b) in scores.iter().zip(&back) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure!(worst <= 0.005 + 1e-12, "temperature factor off by {worst}");
    let mol = random_molecule(&mut rng, Role::Ligand, 2, 1.0);
    let (pdb, clamped) = write_colored_structure(&mol, &[123.4, -500.0]).unwrap();
    ensure!(clamped == 2, "out-of-range scores not clamped");
    ensure!(read_bfactors(&pdb).unwrap() == vec![BFACTOR_LIMIT, -BFACTOR_LIMIT], "clamp values wrong");
    Ok(format!("gninatypes and checkpoint bytes identical; temperature factors within {worst:.4}"))
}

// ---------------------------------------------------------------- 11

fn atom(element: Element, pos: [f64; 3], role: Role) -> TypedAtom {
    TypedAtom::new(element, pos, role, AtomFlags::default())
}

fn masking_exactness() -> Outcome {
    let grid = toy_grid();
    let spec = toy_spec();
    let w = init_weights(&spec, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    let typed = |m: Molecule| assign_types(&m, grid.scheme).0;
    let rec_atoms = vec![
        atom(Element::C, [3.0, 0.5, 0.0], Role::Receptor).with_residue("ALA1"),
        atom(Element::N, [4.0, 1.5, 0.5], Role::Receptor).with_residue("ALA1"),
        atom(Element::O, [-3.5, 0.0, 1.0], Role::Receptor).with_residue("GLY2"),
        atom(Element::C, [120.0, 0.0, 0.0], Role::Receptor).with_residue("FAR3"),
    ];
    let rec = typed(Molecule::new("rec", Role::Receptor, rec_atoms.clone()));
    let lig = typed(Molecule::new(
        "lig",
        Role::Ligand,
        vec![
            atom(Element::C, [0.0, 0.0, 0.0], Role::Ligand),
            atom(Element::C, [1.4, 0.3, 0.0], Role::Ligand),
            atom(Element::O, [2.0, -1.0, 0.4], Role::Ligand),
            atom(Element::C, [0.0, 100.0, 0.0], Role::Ligand),
        ],
    ));
    let center = [0.5, 0.0, 0.0];
    let scorer = Scorer::new(&spec, &w, grid, center).map_err(|e| e.to_string())?;
    let s = |r: &Molecule, l: &Molecule| scorer.score(r, l).unwrap();

    let individual = atom_removal_scores(&scorer, &rec, &lig).map_err(|e| e.to_string())?;
    ensure!(individual[3] == 0.0, "out-of-grid atom delta {:e}", individual[3]);
    let residues = residue_removal_scores(&scorer, &rec, &lig).map_err(|e| e.to_string())?;
    let far = residues.iter().find(|(id, _)| id == "FAR3").ok_or("residue FAR3 missing")?;
    ensure!(far.1 == 0.0, "out-of-grid residue delta {:e}", far.1);

    // two fragments overlapping on atom 1
    let fragments = Fragments::parse("f1: 0 1\nf2: 1 2\n").map_err(|e| e.to_string())?;
    let report = mask_report(&scorer, &rec, &lig, Some(&fragments)).map_err(|e| e.to_string())?;
    let s0 = s(&rec, &lig);
    let d1 = (s0 - s(&rec, &lig.without(&[0, 1]))) / 2.0;
    let d2 = (s0 - s(&rec, &lig.without(&[1, 2]))) / 2.0;
    let hand = [Some(d1), Some((d1 + d2) / 2.0), Some(d2), None];
    for (i, (a, h)) in report.atoms.iter().zip(hand).enumerate() {
        let ok = match (a.fragment, h) {
            (Some(x), Some(y)) => (x - y).abs() <= 1e-15,
            (None, None) => true,
            _ => false,
        };
        ensure!(ok, "atom {i}: fragment delta {:?}, hand {h:?}", a.fragment);
        let want = a.fragment.map_or(a.individual, |f| (a.individual + f) / 2.0);
        ensure!(a.final_score == want, "atom {i}: final score breaks the averaging rule");
        let direct = s0 - s(&rec, &lig.without(&[i]));
        ensure!(a.individual == direct, "atom {i}: individual delta differs from direct rescoring");
    }

    // removal order: fragments listed backwards, receptor residues reversed
    let reversed = Fragments {
        list: fragments.list.iter().rev().cloned().collect(),
    };
    let r2 = mask_report(&scorer, &rec, &lig, Some(&reversed)).unwrap();
    ensure!(r2.atoms == report.atoms, "fragment order changed atom scores");
    let rec_rev = typed(Molecule::new("rec", Role::Receptor, rec_atoms.into_iter().rev().collect()));
    let mut a = residue_removal_scores(&scorer, &rec_rev, &lig).unwrap();
    let mut b = report.residues.clone();
    a.sort_by(|x, y| x.0.cmp(&y.0));
    b.sort_by(|x, y| x.0.cmp(&y.0));
    let close = a.iter().zip(&b).all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= 1e-12);
    ensure!(a.len() == b.len() && close, "residue order changed residue deltas: {a:?} vs {b:?}");

    let one = with_threads(1, || mask_report(&scorer, &rec, &lig, Some(&fragments)).unwrap()).unwrap();
    let four = with_threads(4, || mask_report(&scorer, &rec, &lig, Some(&fragments)).unwrap()).unwrap();
    ensure!(one == report && four == report, "report depends on the thread count");
    Ok(format!(
        "out-of-grid deltas 0; overlap atom {:.6} = mean({d1:.6}, {d2:.6}); order and thread invariant",
        (d1 + d2) / 2.0
    ))
}

// ---------------------------------------------------------------- 12

fn label_rule() -> Outcome {
    let cases = [
        (0.0, PoseLabel::Positive),
        (1.99, PoseLabel::Positive),
        (2.0, PoseLabel::Omitted),
        (3.0, PoseLabel::Omitted),
        (4.0, PoseLabel::Omitted),
        (4.01, PoseLabel::Negative),
    ];
    for (rmsd, want) in cases {
        let got = label_pose(rmsd).map_err(|e| e.to_string())?;
        ensure!(got == want, "label_pose({rmsd}) = {got:?}, want {want:?}");
    }
    ensure!(label_pose(-1.0).is_err() && label_pose(f64::NAN).is_err(), "bad rmsd accepted");
    let text = "- 1.99 t c CSAR r a\n- 2.0 t c CSAR r b\n- 4.0 t c CSAR r c\n- 4.01 t c CSAR r d\n";
    let (index, report) = parse_index(text).map_err(|e| e.to_string())?;
    let labels: Vec<u8> = index.records().iter().map(|r| r.label).collect();
    ensure!(labels == [1, 0] && report.omitted == 2, "index kept {labels:?}, omitted {}", report.omitted);
    Ok("1.99 positive, 2.0 and 4.0 omitted, 4.01 negative".into())
}

// ----------------------------------------------------------------

fn main() {
    let criteria: [Criterion; 12] = [
        ("density correctness", density_correctness),
        ("grid oracle", grid_oracle),
        ("gradient checks", gradient_checks),
        ("learning sanity", learning_sanity),
        ("augmentation effect", augmentation_effect),
        ("solver schedule", solver_schedule),
        ("batch balance", batch_balance),
        ("metric oracle", metric_oracle),
        ("fold integrity", fold_integrity),
        ("format round trips", format_round_trips),
        ("masking exactness", masking_exactness),
        ("label rule", label_rule),
    ];
    // ACCEPTANCE_ONLY=3,10 runs a subset
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for (n, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(n + 1))) {
            println!("criterion {:2} SKIP  {name}", n + 1);
            continue;
        }
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                println!("criterion {:2} FAIL  {name}: {why}", n + 1);
                failed.push(n + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
