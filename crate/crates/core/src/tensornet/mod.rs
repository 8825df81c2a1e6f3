//! Small dense 3D convolutional network engine: convolution, pooling,
//! ReLU, dropout, fully connected and softmax layers with forward and
//! backward passes in `f64`.

mod checkpoint;
mod init;
mod layers;
mod net;
mod spec;
mod tensor;
mod weights;

use thiserror::Error;

pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_MAGIC};
pub use init::init_weights;
pub use net::{backward, forward, forward_trace, loss, Gradients, Loss, Mode, Trace, PROB_FLOOR};
pub use spec::{
    build_final_model, build_model, LayerSpec, ModelOptions, NetworkSpec, ParamShape, PoolMode,
    Shape, CONV_KERNEL, CONV_PAD,
};
pub use tensor::Tensor;
pub use weights::{Params, WeightSet};

#[derive(Debug, Error)]
pub enum NetError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid network: {0}")]
    Spec(String),
    #[error("grid side {side} is not divisible by the pooling reduction {divisor}")]
    IndivisibleSide { side: usize, divisor: usize },
    #[error("weights do not match network: {0}")]
    WeightMismatch(String),
    #[error("non-finite values in {0}")]
    NonFinite(&'static str),
    #[error("invalid probabilities or label: {0}")]
    BadProbabilities(String),
    #[error("forward trace does not match this backward pass: {0}")]
    ReplayMismatch(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}
