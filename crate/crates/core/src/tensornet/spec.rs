use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::NetError;

/// Convolutions are always 3×3×3, stride 1, zero padding 1.
pub const CONV_KERNEL: usize = 3;
pub const CONV_PAD: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolMode {
    Max,
    Average,
}

impl fmt::Display for PoolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolMode::Max => "max",
            PoolMode::Average => "average",
        })
    }
}

impl FromStr for PoolMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max" => Ok(PoolMode::Max),
            "average" | "avg" => Ok(PoolMode::Average),
            _ => Err(format!("unknown pooling mode '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayerSpec {
    Conv3d { filters: usize },
    /// Stride equals the kernel.
    Pool { mode: PoolMode, kernel: usize },
    Relu,
    Dropout { ratio: f64 },
    FullyConnected { outputs: usize },
    Softmax,
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerSpec::Conv3d { filters } => write!(f, "conv {filters}"),
            LayerSpec::Pool { mode, kernel } => write!(f, "pool {mode} {kernel}"),
            LayerSpec::Relu => f.write_str("relu"),
            LayerSpec::Dropout { ratio } => write!(f, "dropout {ratio}"),
            LayerSpec::FullyConnected { outputs } => write!(f, "fc {outputs}"),
            LayerSpec::Softmax => f.write_str("softmax"),
        }
    }
}

/// Activation shape between layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Volume { channels: usize, side: usize },
    Flat(usize),
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::Volume { channels, side } => channels * side.pow(3),
            Shape::Flat(n) => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> Vec<usize> {
        match *self {
            Shape::Volume { channels, side } => vec![channels, side, side, side],
            Shape::Flat(n) => vec![n],
        }
    }
}

/// Weight and bias shapes of a parameterised layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamShape {
    pub weight: Vec<usize>,
    pub bias: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub input_channels: usize,
    pub input_side: usize,
    pub layers: Vec<LayerSpec>,
}

impl NetworkSpec {
    pub fn input_shape(&self) -> Shape {
        Shape::Volume {
            channels: self.input_channels,
            side: self.input_side,
        }
    }

    /// Input shape followed by the output shape of every layer.
    pub fn shapes(&self) -> Result<Vec<Shape>, NetError> {
        if self.input_channels == 0 || self.input_side == 0 {
            return Err(NetError::Spec("input channels and side must be positive".into()));
        }
        let mut shapes = vec![self.input_shape()];
        for (i, layer) in self.layers.iter().enumerate() {
            let bad = |m: String| NetError::Spec(format!("layer {i} ({layer}): {m}"));
            let cur = *shapes.last().unwrap();
            let next = match (*layer, cur) {
                (LayerSpec::Conv3d { filters }, Shape::Volume { side, .. }) => {
                    if filters == 0 {
                        return Err(bad("zero filters".into()));
                    }
                    Shape::Volume {
                        channels: filters,
                        side,
                    }
                }
                (LayerSpec::Pool { kernel, .. }, Shape::Volume { channels, side }) => {
                    if kernel != 2 && kernel != 4 {
                        return Err(bad("pooling kernel must be 2 or 4".into()));
                    }
                    if side % kernel != 0 {
                        return Err(bad(format!("side {side} not divisible by {kernel}")));
                    }
                    Shape::Volume {
                        channels,
                        side: side / kernel,
                    }
                }
                (LayerSpec::Conv3d { .. } | LayerSpec::Pool { .. }, Shape::Flat(_)) => {
                    return Err(bad("needs a volume input".into()))
                }
                (LayerSpec::Relu, s) => s,
                (LayerSpec::Dropout { ratio }, s) => {
                    if !(0.0..1.0).contains(&ratio) {
                        return Err(bad("dropout ratio must be in [0, 1)".into()));
                    }
                    s
                }
                (LayerSpec::FullyConnected { outputs }, _) => {
                    if outputs == 0 {
                        return Err(bad("zero outputs".into()));
                    }
                    Shape::Flat(outputs)
                }
                (LayerSpec::Softmax, s) => {
                    if i + 1 != self.layers.len() {
                        return Err(bad("softmax must be the last layer".into()));
                    }
                    s
                }
            };
            shapes.push(next);
        }
        let n = self.layers.len();
        let ends_right = n >= 2
            && self.layers[n - 1] == LayerSpec::Softmax
            && self.layers[n - 2] == LayerSpec::FullyConnected { outputs: 2 };
        if !ends_right {
            return Err(NetError::Spec(
                "network must end with a 2-output fully connected layer and softmax".into(),
            ));
        }
        Ok(shapes)
    }

    pub fn validate(&self) -> Result<(), NetError> {
        self.shapes().map(|_| ())
    }

    /// Parameter shapes per layer, `None` for layers without parameters.
    pub fn param_shapes(&self) -> Result<Vec<Option<ParamShape>>, NetError> {
        let shapes = self.shapes()?;
        Ok(self
            .layers
            .iter()
            .enumerate()
            .map(|(i, layer)| match *layer {
                LayerSpec::Conv3d { filters } => {
                    let Shape::Volume { channels, .. } = shapes[i] else { unreachable!() };
                    Some(ParamShape {
                        weight: vec![filters, channels, CONV_KERNEL, CONV_KERNEL, CONV_KERNEL],
                        bias: filters,
                    })
                }
                LayerSpec::FullyConnected { outputs } => Some(ParamShape {
                    weight: vec![outputs, shapes[i].len()],
                    bias: outputs,
                }),
                _ => None,
            })
            .collect())
    }

    /// Canonical one-line description, e.g.
    /// `input 34 48; conv 32; relu; pool max 2; ...; fc 2; softmax`.
    pub fn describe(&self) -> String {
        let mut parts = vec![format!("input {} {}", self.input_channels, self.input_side)];
        parts.extend(self.layers.iter().map(|l| l.to_string()));
        parts.join("; ")
    }

    pub fn parse(description: &str) -> Result<Self, NetError> {
        let bad = |m: &str| NetError::Spec(format!("cannot parse '{description}': {m}"));
        let mut parts = description.split(';').map(str::trim);
        let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
        let (input_channels, input_side) = match head.as_slice() {
            ["input", c, n] => (
                c.parse().map_err(|_| bad("input channels"))?,
                n.parse().map_err(|_| bad("input side"))?,
            ),
            _ => return Err(bad("missing input header")),
        };
        let mut layers = Vec::new();
        for part in parts {
            let tok: Vec<&str> = part.split_whitespace().collect();
            let layer = match tok.as_slice() {
                ["conv", f] => LayerSpec::Conv3d {
                    filters: f.parse().map_err(|_| bad(part))?,
                },
                ["pool", m, k] => LayerSpec::Pool {
                    mode: m.parse().map_err(|_| bad(part))?,
                    kernel: k.parse().map_err(|_| bad(part))?,
                },
                ["relu"] => LayerSpec::Relu,
                ["dropout", r] => LayerSpec::Dropout {
                    ratio: r.parse().map_err(|_| bad(part))?,
                },
                ["fc", o] => LayerSpec::FullyConnected {
                    outputs: o.parse().map_err(|_| bad(part))?,
                },
                ["softmax"] => LayerSpec::Softmax,
                _ => return Err(bad(part)),
            };
            layers.push(layer);
        }
        let spec = NetworkSpec {
            input_channels,
            input_side,
            layers,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// SHA-256 of [`describe`](Self::describe).
    pub fn fingerprint(&self) -> [u8; 32] {
        Sha256::digest(self.describe().as_bytes()).into()
    }

    pub fn dropout_ratio(&self) -> Option<f64> {
        self.layers.iter().find_map(|l| match l {
            LayerSpec::Dropout { ratio } => Some(*ratio),
            _ => None,
        })
    }
}

/// Architecture axes explored when tuning the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOptions {
    /// Filters in the first convolution; each later block doubles it.
    pub base_width: usize,
    /// Number of convolution blocks.
    pub depth: usize,
    pub pool_mode: PoolMode,
    pub pool_kernel: usize,
    /// Optional hidden fully connected layer (with ReLU) before the output.
    pub hidden: Option<usize>,
    /// Dropout ratio before the output layer; 0 omits the layer.
    pub dropout: f64,
}

impl Default for ModelOptions {
    /// Three blocks of 32/64/128 filters with 2³ max pooling, dropout 0.5.
    fn default() -> Self {
        ModelOptions {
            base_width: 32,
            depth: 3,
            pool_mode: PoolMode::Max,
            pool_kernel: 2,
            hidden: None,
            dropout: 0.5,
        }
    }
}

pub fn build_model(channels: usize, side: usize, opts: &ModelOptions) -> Result<NetworkSpec, NetError> {
    if opts.depth == 0 || opts.base_width == 0 {
        return Err(NetError::Spec("depth and width must be positive".into()));
    }
    let reduction = opts.pool_kernel.pow(opts.depth as u32);
    if !side.is_multiple_of(reduction) {
        return Err(NetError::IndivisibleSide { side, divisor: reduction });
    }
    let mut layers = Vec::new();
    for block in 0..opts.depth {
        layers.push(LayerSpec::Conv3d {
            filters: opts.base_width << block,
        });
        layers.push(LayerSpec::Relu);
        layers.push(LayerSpec::Pool {
            mode: opts.pool_mode,
            kernel: opts.pool_kernel,
        });
    }
    if let Some(h) = opts.hidden {
        layers.push(LayerSpec::FullyConnected { outputs: h });
        layers.push(LayerSpec::Relu);
    }
    if opts.dropout > 0.0 {
        layers.push(LayerSpec::Dropout { ratio: opts.dropout });
    }
    layers.push(LayerSpec::FullyConnected { outputs: 2 });
    layers.push(LayerSpec::Softmax);
    let spec = NetworkSpec {
        input_channels: channels,
        input_side: side,
        layers,
    };
    spec.validate()?;
    Ok(spec)
}

/// The three-block 32/64/128 model.
pub fn build_final_model(channels: usize, side: usize) -> Result<NetworkSpec, NetError> {
    build_model(channels, side, &ModelOptions::default())
}
