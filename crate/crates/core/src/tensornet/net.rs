use rand::{Rng, RngCore};

use super::layers;
use super::spec::{LayerSpec, NetworkSpec, PoolMode, Shape};
use super::tensor::Tensor;
use super::weights::{Params, WeightSet};
use super::NetError;

/// Smallest probability fed to the logarithm in [`loss`].
pub const PROB_FLOOR: f64 = 1e-15;

/// Test mode is deterministic and skips dropout. Train mode draws dropout
/// masks from the supplied generator.
pub enum Mode<'a> {
    Test,
    Train(&'a mut dyn RngCore),
}

#[derive(Debug, Clone)]
enum Aux {
    None,
    Argmax(Vec<usize>),
    Mask(Vec<f64>),
}

/// Activations of one forward pass, kept for [`backward`].
#[derive(Debug, Clone)]
pub struct Trace {
    /// Input followed by every layer output.
    activations: Vec<Tensor>,
    aux: Vec<Aux>,
    fingerprint: [u8; 32],
}

impl Trace {
    pub fn probabilities(&self) -> [f64; 2] {
        let p = self.activations.last().unwrap().data();
        [p[0], p[1]]
    }

    pub fn input(&self) -> &Tensor {
        &self.activations[0]
    }
}

#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: WeightSet,
    pub input: Tensor,
}

fn params(w: &WeightSet, i: usize) -> Result<&Params, NetError> {
    w.layers
        .get(i)
        .and_then(|p| p.as_ref())
        .ok_or_else(|| NetError::WeightMismatch(format!("layer {i} has no parameters")))
}

pub fn forward_trace(
    spec: &NetworkSpec,
    weights: &WeightSet,
    input: &Tensor,
    mut mode: Mode<'_>,
) -> Result<Trace, NetError> {
    let shapes = spec.shapes()?;
    weights.check(spec)?;
    if input.shape() != shapes[0].dims().as_slice() {
        return Err(NetError::Shape(format!(
            "input {:?}, network expects {:?}",
            input.shape(),
            shapes[0].dims()
        )));
    }
    if !input.is_finite() {
        return Err(NetError::NonFinite("network input"));
    }
    let mut activations = vec![input.clone()];
    let mut aux = Vec::with_capacity(spec.layers.len());
    for (i, layer) in spec.layers.iter().enumerate() {
        let x = activations.last().unwrap().data();
        let (out, extra) = match (*layer, shapes[i]) {
            (LayerSpec::Conv3d { .. }, Shape::Volume { channels, side }) => {
                let p = params(weights, i)?;
                let y = layers::conv3d_forward(x, channels, side, p.weight.data(), p.bias.data());
                (y, Aux::None)
            }
            (LayerSpec::Pool { mode, kernel }, Shape::Volume { channels, side }) => {
                let (y, arg) = layers::pool_forward(x, channels, side, mode, kernel);
                (y, arg.map_or(Aux::None, Aux::Argmax))
            }
            (LayerSpec::Relu, _) => (x.iter().map(|v| v.max(0.0)).collect(), Aux::None),
            (LayerSpec::Dropout { ratio }, _) => match &mut mode {
                Mode::Test => (x.to_vec(), Aux::None),
                Mode::Train(rng) => {
                    let keep = 1.0 / (1.0 - ratio);
                    let mask: Vec<f64> = (0..x.len())
                        .map(|_| if rng.random::<f64>() < ratio { 0.0 } else { keep })
                        .collect();
                    (x.iter().zip(&mask).map(|(v, m)| v * m).collect(), Aux::Mask(mask))
                }
            },
            (LayerSpec::FullyConnected { .. }, _) => {
                let p = params(weights, i)?;
                (layers::fc_forward(x, p.weight.data(), p.bias.data()), Aux::None)
            }
            (LayerSpec::Softmax, _) => (layers::softmax(x), Aux::None),
            _ => unreachable!("validated by shapes()"),
        };
        activations.push(Tensor::new(shapes[i + 1].dims(), out)?);
        aux.push(extra);
    }
    Ok(Trace {
        activations,
        aux,
        fingerprint: spec.fingerprint(),
    })
}

/// Class probabilities `[p_negative, p_positive]`.
pub fn forward(
    spec: &NetworkSpec,
    weights: &WeightSet,
    input: &Tensor,
    mode: Mode<'_>,
) -> Result<[f64; 2], NetError> {
    Ok(forward_trace(spec, weights, input, mode)?.probabilities())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loss {
    pub value: f64,
    /// The labelled probability was below [`PROB_FLOOR`].
    pub clamped: bool,
}

/// Multinomial logistic loss `−ln p[label]`.
pub fn loss(probs: [f64; 2], label: usize) -> Result<Loss, NetError> {
    if label > 1 {
        return Err(NetError::BadProbabilities(format!("label {label}")));
    }
    let valid = probs.iter().all(|p| p.is_finite() && (0.0..=1.0).contains(p))
        && (probs[0] + probs[1] - 1.0).abs() < 1e-6;
    if !valid {
        return Err(NetError::BadProbabilities(format!("{probs:?}")));
    }
    let p = probs[label];
    let clamped = p < PROB_FLOOR;
    Ok(Loss {
        value: -p.max(PROB_FLOOR).ln(),
        clamped,
    })
}

/// Gradients of `loss(probabilities, label)` with respect to every
/// parameter and the input, replaying the activations and dropout masks
/// recorded in `trace`.
pub fn backward(
    spec: &NetworkSpec,
    weights: &WeightSet,
    trace: &Trace,
    label: usize,
) -> Result<Gradients, NetError> {
    if label > 1 {
        return Err(NetError::BadProbabilities(format!("label {label}")));
    }
    let shapes = spec.shapes()?;
    weights.check(spec)?;
    if trace.fingerprint != spec.fingerprint()
        || trace.activations.len() != spec.layers.len() + 1
        || trace.aux.len() != spec.layers.len()
    {
        return Err(NetError::ReplayMismatch("trace was recorded for another network".into()));
    }
    let mut grads = weights.zeros_like();
    // softmax followed by −ln p_label: gradient at the logits is p − onehot
    let mut g: Vec<f64> = trace.probabilities().to_vec();
    g[label] -= 1.0;
    let last = spec.layers.len() - 1;
    for i in (0..last).rev() {
        let x = trace.activations[i].data();
        g = match (spec.layers[i], shapes[i], &trace.aux[i]) {
            (LayerSpec::Conv3d { filters }, Shape::Volume { channels, side }, _) => {
                let p = params(weights, i)?;
                let (gi, gw, gb) =
                    layers::conv3d_backward(x, channels, side, p.weight.data(), &g, filters);
                let slot = grads.layers[i].as_mut().unwrap();
                slot.weight.data_mut().copy_from_slice(&gw);
                slot.bias.data_mut().copy_from_slice(&gb);
                gi
            }
            (LayerSpec::Pool { mode, kernel }, Shape::Volume { channels, side }, aux) => {
                let arg = match (mode, aux) {
                    (PoolMode::Max, Aux::Argmax(a)) => Some(a.as_slice()),
                    (PoolMode::Average, Aux::None) => None,
                    _ => return Err(NetError::ReplayMismatch(format!("layer {i} pooling state"))),
                };
                layers::pool_backward(&g, channels, side, mode, kernel, arg)
            }
            (LayerSpec::Relu, _, _) => {
                g.iter().zip(x).map(|(g, x)| if *x > 0.0 { *g } else { 0.0 }).collect()
            }
            (LayerSpec::Dropout { .. }, _, Aux::Mask(mask)) => {
                if mask.len() != g.len() {
                    return Err(NetError::ReplayMismatch(format!("layer {i} dropout mask")));
                }
                g.iter().zip(mask).map(|(g, m)| g * m).collect()
            }
            (LayerSpec::Dropout { .. }, _, _) => g,
            (LayerSpec::FullyConnected { .. }, _, _) => {
                let p = params(weights, i)?;
                let (gi, gw, gb) = layers::fc_backward(x, p.weight.data(), &g);
                let slot = grads.layers[i].as_mut().unwrap();
                slot.weight.data_mut().copy_from_slice(&gw);
                slot.bias.data_mut().copy_from_slice(&gb);
                gi
            }
            _ => return Err(NetError::ReplayMismatch(format!("layer {i}"))),
        };
    }
    Ok(Gradients {
        weights: grads,
        input: Tensor::new(shapes[0].dims(), g)?,
    })
}
