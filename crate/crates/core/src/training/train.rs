use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::evalkit::auc_of;
use crate::gridgen::{GridConfig, Transform};
use crate::tensornet::{
    backward, forward, forward_trace, init_weights, loss, Mode, NetworkSpec, WeightSet,
};

use super::sampler::{example_input, next_batch, BatchSampler};
use super::solver::{sgd_step, SolverConfig};
use super::{ComplexSource, DatasetIndex, Source, TrainError};

/// Records to train on and to hold out, with where to find their
/// structures and how to grid them.
pub struct TrainSet<'a> {
    pub index: &'a DatasetIndex,
    pub store: &'a dyn ComplexSource,
    pub grid: GridConfig,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    /// Iterations completed.
    pub iteration: usize,
    /// Mean batch loss since the previous point.
    pub loss: f64,
    /// Absent when the set lacks one of the classes.
    pub train_auc: Option<f64>,
    pub test_auc: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub weights: WeightSet,
    pub trace: Vec<TracePoint>,
}

/// Positive-class probability of each record, unaugmented (identity
/// transform, test mode).
pub fn predict(
    spec: &NetworkSpec,
    weights: &WeightSet,
    index: &DatasetIndex,
    store: &dyn ComplexSource,
    grid: &GridConfig,
    records: &[usize],
) -> Result<Vec<f64>, TrainError> {
    records
        .par_iter()
        .map(|&r| {
            let x = example_input(index, store, grid, r, &Transform::identity())?;
            Ok(forward(spec, weights, &x, Mode::Test)?[1])
        })
        .collect()
}

fn auc(
    spec: &NetworkSpec,
    weights: &WeightSet,
    set: &TrainSet,
    records: &[usize],
) -> Result<Option<f64>, TrainError> {
    if records.is_empty() {
        return Ok(None);
    }
    let scores = predict(spec, weights, set.index, set.store, &set.grid, records)?;
    let labels: Vec<u8> = records.iter().map(|&r| set.index.records()[r].label).collect();
    Ok(auc_of(&scores, &labels))
}

fn sampler_for(set: &TrainSet, config: &SolverConfig) -> Result<BatchSampler, TrainError> {
    let by = |s: Source| -> Vec<usize> {
        set.train
            .iter()
            .copied()
            .filter(|&r| set.index.records()[r].source == s)
            .collect()
    };
    let (dude, csar) = (by(Source::Dude), by(Source::Csar));
    if dude.is_empty() || csar.is_empty() {
        BatchSampler::single(set.index, &set.train)
    } else {
        BatchSampler::mixed(set.index, &dude, &csar, config.source_ratio)
    }
}

/// Runs `config.iterations` SGD steps from seeded initial weights.
pub fn train(set: &TrainSet, spec: &NetworkSpec, config: &SolverConfig) -> Result<TrainOutcome, TrainError> {
    train_with(set, spec, config, &mut |_| {})
}

/// [`train`], reporting each trace point as it is produced.
///
/// Everything random derives from `config.seed`: one generator initialises
/// the weights and then drives sampling and augmentation, and the dropout
/// masks of example `j` at iteration `i` come from a separate stream keyed
/// by `(i, j)`.
pub fn train_with(
    set: &TrainSet,
    spec: &NetworkSpec,
    config: &SolverConfig,
    progress: &mut dyn FnMut(&TracePoint),
) -> Result<TrainOutcome, TrainError> {
    config.validate()?;
    spec.validate()?;
    if let Some(r) = spec.dropout_ratio() {
        if r != config.dropout_ratio {
            return Err(TrainError::Config(format!(
                "network dropout {r} differs from dropout_ratio {}",
                config.dropout_ratio
            )));
        }
    }
    let channels = set.grid.channels();
    let side = set.grid.side()?;
    if spec.input_channels != channels || spec.input_side != side {
        return Err(TrainError::Config(format!(
            "network input {}×{}³ does not match grid {channels}×{side}³",
            spec.input_channels, spec.input_side
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut weights = init_weights(spec, &mut rng)?;
    let mut trace = Vec::new();
    if config.iterations == 0 {
        return Ok(TrainOutcome { weights, trace });
    }
    let mut sampler = sampler_for(set, config)?;
    let mut velocity = weights.zeros_like();
    let mut loss_sum = 0.0;
    let mut loss_count = 0usize;
    let batch = config.batch_size;

    for iter in 0..config.iterations {
        let items = next_batch(
            &mut rng,
            &mut sampler,
            set.index,
            set.store,
            &set.grid,
            batch,
            config.max_translate,
            config.rotate,
        )?;
        let per_example = items
            .par_iter()
            .enumerate()
            .map(|(j, item)| {
                let mut drop_rng = ChaCha8Rng::seed_from_u64(config.seed);
                drop_rng.set_stream(1 + (iter * batch + j) as u64);
                let t = forward_trace(spec, &weights, &item.input, Mode::Train(&mut drop_rng))?;
                let l = loss(t.probabilities(), item.label as usize)?;
                let g = backward(spec, &weights, &t, item.label as usize)?;
                Ok((l.value, g.weights))
            })
            .collect::<Result<Vec<_>, TrainError>>()?;
        let mut grads = weights.zeros_like();
        for (l, g) in &per_example {
            loss_sum += l;
            grads.add_scaled(g, 1.0);
        }
        loss_count += per_example.len();
        grads.scale(1.0 / batch as f64);
        sgd_step(&mut weights, &grads, &mut velocity, iter, config)?;

        let done = iter + 1;
        let report = done == config.iterations
            || (config.test_interval > 0 && done % config.test_interval == 0);
        if report {
            let point = TracePoint {
                iteration: done,
                loss: loss_sum / loss_count as f64,
                train_auc: auc(spec, &weights, set, &set.train)?,
                test_auc: auc(spec, &weights, set, &set.test)?,
            };
            log::info!(
                "iteration {done}: loss {:.4} train auc {:?} test auc {:?}",
                point.loss,
                point.train_auc,
                point.test_auc
            );
            progress(&point);
            trace.push(point);
            loss_sum = 0.0;
            loss_count = 0;
        }
    }
    Ok(TrainOutcome { weights, trace })
}

/// Tab-separated trace with a header line.
pub fn trace_to_text(trace: &[TracePoint]) -> String {
    let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
    let mut out = String::from("iteration\tloss\ttrain_auc\ttest_auc\n");
    for p in trace {
        out.push_str(&format!(
            "{}\t{:.6}\t{}\t{}\n",
            p.iteration,
            p.loss,
            fmt(p.train_auc),
            fmt(p.test_auc)
        ));
    }
    out
}
