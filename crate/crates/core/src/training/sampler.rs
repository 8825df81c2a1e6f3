use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::gridgen::{sample_transform, voxelize, GridConfig, Transform};
use crate::tensornet::Tensor;

use super::{ComplexSource, DatasetIndex, TrainError};

/// Cycles through a list in shuffled order, reshuffling at each epoch.
#[derive(Debug, Clone)]
pub struct Cycle {
    items: Vec<usize>,
    cursor: usize,
    epoch: usize,
}

impl Cycle {
    pub fn new(items: Vec<usize>) -> Self {
        let cursor = items.len();
        Cycle {
            items,
            cursor,
            epoch: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Completed shuffles so far.
    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        if self.cursor == self.items.len() {
            self.items.shuffle(rng);
            self.cursor = 0;
            self.epoch += 1;
        }
        self.cursor += 1;
        self.items[self.cursor - 1]
    }
}

/// Draws (positive, negative) pairs, each class cycling independently.
#[derive(Debug, Clone)]
pub struct BalancedSampler {
    positives: Cycle,
    negatives: Cycle,
}

impl BalancedSampler {
    /// Samples among `records` (indices into `index`).
    pub fn new(index: &DatasetIndex, records: &[usize]) -> Result<Self, TrainError> {
        let (pos, neg): (Vec<usize>, Vec<usize>) = records
            .iter()
            .partition(|&&i| index.records()[i].label == 1);
        if pos.is_empty() || neg.is_empty() {
            return Err(TrainError::EmptyClass {
                positives: pos.len(),
                negatives: neg.len(),
            });
        }
        Ok(BalancedSampler {
            positives: Cycle::new(pos),
            negatives: Cycle::new(neg),
        })
    }

    pub fn pair<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (usize, usize) {
        let p = self.positives.next(rng);
        let n = self.negatives.next(rng);
        (p, n)
    }
}

/// Which stream a mixed draw comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pick {
    A,
    B,
}

/// Repeating pattern of `a` draws from A followed by `b` draws from B.
#[derive(Debug, Clone)]
pub struct Mixer {
    a: usize,
    b: usize,
    step: usize,
}

impl Mixer {
    pub fn new(a: usize, b: usize) -> Result<Self, TrainError> {
        if a + b == 0 {
            return Err(TrainError::Config("mixing ratio 0:0".into()));
        }
        Ok(Mixer { a, b, step: 0 })
    }

    pub fn next_pick(&mut self) -> Pick {
        let pick = if self.step < self.a { Pick::A } else { Pick::B };
        self.step = (self.step + 1) % (self.a + self.b);
        pick
    }
}

/// Interleaves two streams `a:b`. A stream with a nonzero share must not be
/// empty; the result ends when a stream it needs runs out.
pub fn mix_sources<T, A, B>(
    a_stream: A,
    b_stream: B,
    ratio: (usize, usize),
) -> Result<impl Iterator<Item = T>, TrainError>
where
    A: IntoIterator<Item = T>,
    B: IntoIterator<Item = T>,
{
    let mut mixer = Mixer::new(ratio.0, ratio.1)?;
    let mut a = a_stream.into_iter().peekable();
    let mut b = b_stream.into_iter().peekable();
    if (ratio.0 > 0 && a.peek().is_none()) || (ratio.1 > 0 && b.peek().is_none()) {
        return Err(TrainError::EmptyStream);
    }
    Ok(std::iter::from_fn(move || match mixer.next_pick() {
        Pick::A => a.next(),
        Pick::B => b.next(),
    }))
}

/// Balanced sampling over one or two sources. With two, each balanced pair
/// is drawn from the source chosen by the mixing ratio.
#[derive(Debug, Clone)]
pub struct BatchSampler {
    sources: Vec<BalancedSampler>,
    mixer: Option<Mixer>,
}

impl BatchSampler {
    pub fn single(index: &DatasetIndex, records: &[usize]) -> Result<Self, TrainError> {
        Ok(BatchSampler {
            sources: vec![BalancedSampler::new(index, records)?],
            mixer: None,
        })
    }

    /// Two sources mixed `ratio.0 : ratio.1`; a source with a zero share
    /// may be empty.
    pub fn mixed(
        index: &DatasetIndex,
        a: &[usize],
        b: &[usize],
        ratio: (usize, usize),
    ) -> Result<Self, TrainError> {
        let mixer = Mixer::new(ratio.0, ratio.1)?;
        let make = |records: &[usize], share: usize| -> Result<Option<BalancedSampler>, TrainError> {
            if share == 0 {
                Ok(None)
            } else {
                BalancedSampler::new(index, records).map(Some)
            }
        };
        let sa = make(a, ratio.0)?;
        let sb = make(b, ratio.1)?;
        match (sa, sb) {
            (Some(sa), Some(sb)) => Ok(BatchSampler {
                sources: vec![sa, sb],
                mixer: Some(mixer),
            }),
            (Some(s), None) | (None, Some(s)) => Ok(BatchSampler {
                sources: vec![s],
                mixer: None,
            }),
            (None, None) => unreachable!(),
        }
    }

    /// `batch_size / 2` positives and as many negatives, shuffled, as
    /// `(record, label)` pairs.
    pub fn plan<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        batch_size: usize,
    ) -> Result<Vec<(usize, u8)>, TrainError> {
        if batch_size == 0 || !batch_size.is_multiple_of(2) {
            return Err(TrainError::Config(format!("batch_size {batch_size} must be even and positive")));
        }
        let mut out = Vec::with_capacity(batch_size);
        for _ in 0..batch_size / 2 {
            let s = match self.mixer.as_mut().map(Mixer::next_pick) {
                Some(Pick::B) => 1,
                _ => 0,
            };
            let (p, n) = self.sources[s].pair(rng);
            out.push((p, 1));
            out.push((n, 0));
        }
        out.shuffle(rng);
        Ok(out)
    }
}

/// A voxelized training example.
#[derive(Debug, Clone)]
pub struct BatchItem {
    pub record: usize,
    pub label: u8,
    pub transform: Transform,
    pub input: Tensor,
}

/// Draws the next balanced batch and voxelizes each example under a fresh
/// random transform. Transforms are drawn in batch order before the
/// (parallel) voxelization, so the result depends only on the rng state.
#[allow(clippy::too_many_arguments)]
pub fn next_batch<R: Rng + ?Sized>(
    rng: &mut R,
    sampler: &mut BatchSampler,
    index: &DatasetIndex,
    store: &dyn ComplexSource,
    grid: &GridConfig,
    batch_size: usize,
    max_translate: f64,
    rotate: bool,
) -> Result<Vec<BatchItem>, TrainError> {
    let plan = sampler.plan(rng, batch_size)?;
    let transforms = plan
        .iter()
        .map(|_| sample_transform(rng, max_translate, rotate))
        .collect::<Result<Vec<_>, _>>()?;
    plan.into_par_iter()
        .zip(transforms)
        .map(|((record, label), transform)| {
            let input = example_input(index, store, grid, record, &transform)?;
            Ok(BatchItem {
                record,
                label,
                transform,
                input,
            })
        })
        .collect()
}

/// Network input for one record under `transform`, centered on the ligand.
pub fn example_input(
    index: &DatasetIndex,
    store: &dyn ComplexSource,
    grid: &GridConfig,
    record: usize,
    transform: &Transform,
) -> Result<Tensor, TrainError> {
    let complex = store.complex(&index.records()[record])?;
    let center = complex.center()?;
    let g = voxelize(&complex.receptor, &complex.ligand, center, grid, transform)?;
    Ok(Tensor::from_grid(&g))
}
