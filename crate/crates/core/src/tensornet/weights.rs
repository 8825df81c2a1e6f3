use super::spec::NetworkSpec;
use super::tensor::Tensor;
use super::NetError;

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub weight: Tensor,
    pub bias: Tensor,
}

/// Learnable parameters, one slot per layer of a [`NetworkSpec`]
/// (`None` for layers without parameters).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    pub layers: Vec<Option<Params>>,
}

impl WeightSet {
    pub fn zeros(spec: &NetworkSpec) -> Result<Self, NetError> {
        let layers = spec
            .param_shapes()?
            .into_iter()
            .map(|p| {
                p.map(|p| Params {
                    weight: Tensor::zeros(p.weight),
                    bias: Tensor::zeros(vec![p.bias]),
                })
            })
            .collect();
        Ok(WeightSet { layers })
    }

    pub fn zeros_like(&self) -> Self {
        WeightSet {
            layers: self
                .layers
                .iter()
                .map(|p| {
                    p.as_ref().map(|p| Params {
                        weight: Tensor::zeros(p.weight.shape().to_vec()),
                        bias: Tensor::zeros(p.bias.shape().to_vec()),
                    })
                })
                .collect(),
        }
    }

    /// Checks that every parameter shape agrees with `spec`.
    pub fn check(&self, spec: &NetworkSpec) -> Result<(), NetError> {
        let shapes = spec.param_shapes()?;
        if shapes.len() != self.layers.len() {
            return Err(NetError::WeightMismatch(format!(
                "{} layer slots for {} layers",
                self.layers.len(),
                shapes.len()
            )));
        }
        for (i, (want, have)) in shapes.iter().zip(&self.layers).enumerate() {
            let ok = match (want, have) {
                (None, None) => true,
                (Some(w), Some(h)) => h.weight.shape() == w.weight.as_slice() && h.bias.shape() == [w.bias],
                _ => false,
            };
            if !ok {
                return Err(NetError::WeightMismatch(format!("layer {i}")));
            }
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        self.params().map(|p| p.weight.len() + p.bias.len()).sum()
    }

    pub fn params(&self) -> impl Iterator<Item = &Params> {
        self.layers.iter().flatten()
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut Params> {
        self.layers.iter_mut().flatten()
    }

    pub fn is_finite(&self) -> bool {
        self.params().all(|p| p.weight.is_finite() && p.bias.is_finite())
    }

    /// `self += k·other`. Shapes must agree.
    pub fn add_scaled(&mut self, other: &WeightSet, k: f64) {
        for (a, b) in self.params_mut().zip(other.params()) {
            for (x, y) in a.weight.data_mut().iter_mut().zip(b.weight.data()) {
                *x += k * y;
            }
            for (x, y) in a.bias.data_mut().iter_mut().zip(b.bias.data()) {
                *x += k * y;
            }
        }
    }

    pub fn scale(&mut self, k: f64) {
        for p in self.params_mut() {
            p.weight.data_mut().iter_mut().for_each(|x| *x *= k);
            p.bias.data_mut().iter_mut().for_each(|x| *x *= k);
        }
    }
}
