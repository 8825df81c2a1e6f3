use rand::Rng;

use super::spec::NetworkSpec;
use super::weights::WeightSet;
use super::NetError;

/// Uniform weights in `±sqrt(3 / fan_in)` and zero biases. Layers are
/// filled in order, so a given seed always yields the same weights.
pub fn init_weights<R: Rng + ?Sized>(spec: &NetworkSpec, rng: &mut R) -> Result<WeightSet, NetError> {
    let mut w = WeightSet::zeros(spec)?;
    for p in w.params_mut() {
        let fan_in: usize = p.weight.shape()[1..].iter().product();
        let bound = (3.0 / fan_in as f64).sqrt();
        for v in p.weight.data_mut() {
            *v = rng.random_range(-bound..bound);
        }
    }
    Ok(w)
}
