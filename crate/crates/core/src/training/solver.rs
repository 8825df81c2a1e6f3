//! Solver settings and the SGD update.
//!
//! Config files hold one `key = value` per line (`#` starts a comment):
//!
//! ```text
//! batch_size = 10
//! base_lr = 0.01
//! momentum = 0.9
//! lr_policy = inv        # inv | fixed
//! power = 1
//! gamma = 0.001
//! weight_decay = 0.001
//! dropout_ratio = 0.5
//! iterations = 10000
//! seed = 0
//! max_translate = 2.0    # Å
//! rotate = true
//! test_interval = 1000   # 0 disables periodic evaluation
//! source_ratio = 2:1     # DUDE:CSAR when both sources are present
//! ```

use std::fmt;
use std::str::FromStr;

use crate::tensornet::WeightSet;

use super::TrainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrPolicy {
    /// `base_lr · (1 + gamma·iter)^(−power)`
    Inverse,
    Fixed,
}

impl fmt::Display for LrPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LrPolicy::Inverse => "inv",
            LrPolicy::Fixed => "fixed",
        })
    }
}

impl FromStr for LrPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inv" | "inverse" => Ok(LrPolicy::Inverse),
            "fixed" => Ok(LrPolicy::Fixed),
            _ => Err(format!("unknown lr_policy '{s}' (expected inv or fixed)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub batch_size: usize,
    pub base_lr: f64,
    pub momentum: f64,
    pub lr_policy: LrPolicy,
    pub power: f64,
    pub gamma: f64,
    pub weight_decay: f64,
    pub dropout_ratio: f64,
    pub iterations: usize,
    pub seed: u64,
    pub max_translate: f64,
    pub rotate: bool,
    pub test_interval: usize,
    pub source_ratio: (usize, usize),
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            batch_size: 10,
            base_lr: 0.01,
            momentum: 0.9,
            lr_policy: LrPolicy::Inverse,
            power: 1.0,
            gamma: 0.001,
            weight_decay: 0.001,
            dropout_ratio: 0.5,
            iterations: 10_000,
            seed: 0,
            max_translate: 2.0,
            rotate: true,
            test_interval: 1000,
            source_ratio: (2, 1),
        }
    }
}

fn parse_ratio(v: &str) -> Option<(usize, usize)> {
    let (a, b) = v.split_once(':')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}

impl SolverConfig {
    pub const KEYS: [&'static str; 14] = [
        "batch_size",
        "base_lr",
        "momentum",
        "lr_policy",
        "power",
        "gamma",
        "weight_decay",
        "dropout_ratio",
        "iterations",
        "seed",
        "max_translate",
        "rotate",
        "test_interval",
        "source_ratio",
    ];

    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), TrainError> {
        let bad = || TrainError::Config(format!("bad value '{value}' for {key}"));
        fn num<T: FromStr>(v: &str, bad: impl Fn() -> TrainError) -> Result<T, TrainError> {
            v.parse().map_err(|_| bad())
        }
        match key {
            "batch_size" => self.batch_size = num(value, bad)?,
            "base_lr" => self.base_lr = num(value, bad)?,
            "momentum" => self.momentum = num(value, bad)?,
            "lr_policy" => self.lr_policy = value.parse().map_err(TrainError::Config)?,
            "power" => self.power = num(value, bad)?,
            "gamma" => self.gamma = num(value, bad)?,
            "weight_decay" => self.weight_decay = num(value, bad)?,
            "dropout_ratio" => self.dropout_ratio = num(value, bad)?,
            "iterations" | "max_iter" => self.iterations = num(value, bad)?,
            "seed" => self.seed = num(value, bad)?,
            "max_translate" => self.max_translate = num(value, bad)?,
            "rotate" => self.rotate = parse_bool(value).ok_or_else(bad)?,
            "test_interval" => self.test_interval = num(value, bad)?,
            "source_ratio" => self.source_ratio = parse_ratio(value).ok_or_else(bad)?,
            _ => return Err(TrainError::Config(format!("unknown solver key '{key}'"))),
        }
        Ok(())
    }

    /// Defaults overridden by the keys in `text`.
    pub fn parse(text: &str) -> Result<Self, TrainError> {
        let mut c = SolverConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| TrainError::Config(format!("line {}: expected key = value", n + 1)))?;
            c.set(k.trim(), v.trim())
                .map_err(|e| TrainError::Config(format!("line {}: {e}", n + 1)))?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        format!(
            "batch_size = {}\nbase_lr = {}\nmomentum = {}\nlr_policy = {}\npower = {}\ngamma = {}\n\
             weight_decay = {}\ndropout_ratio = {}\niterations = {}\nseed = {}\nmax_translate = {}\n\
             rotate = {}\ntest_interval = {}\nsource_ratio = {}:{}\n",
            self.batch_size,
            self.base_lr,
            self.momentum,
            self.lr_policy,
            self.power,
            self.gamma,
            self.weight_decay,
            self.dropout_ratio,
            self.iterations,
            self.seed,
            self.max_translate,
            self.rotate,
            self.test_interval,
            self.source_ratio.0,
            self.source_ratio.1
        )
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        let fail = |m: &str| Err(TrainError::Config(m.into()));
        if self.batch_size == 0 || !self.batch_size.is_multiple_of(2) {
            return fail("batch_size must be even and positive");
        }
        if !(self.base_lr > 0.0 && self.base_lr.is_finite()) {
            return fail("base_lr must be positive");
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return fail("momentum must be in [0, 1)");
        }
        if !(self.power >= 0.0 && self.gamma >= 0.0 && self.weight_decay >= 0.0) {
            return fail("power, gamma and weight_decay must be nonnegative");
        }
        if !(0.0..1.0).contains(&self.dropout_ratio) {
            return fail("dropout_ratio must be in [0, 1)");
        }
        if !(self.max_translate >= 0.0 && self.max_translate.is_finite()) {
            return fail("max_translate must be nonnegative");
        }
        if self.source_ratio.0 + self.source_ratio.1 == 0 {
            return fail("source_ratio must not be 0:0");
        }
        Ok(())
    }
}

pub fn lr_at(iter: usize, config: &SolverConfig) -> f64 {
    match config.lr_policy {
        LrPolicy::Fixed => config.base_lr,
        LrPolicy::Inverse => {
            config.base_lr * (1.0 + config.gamma * iter as f64).powf(-config.power)
        }
    }
}

/// Momentum SGD with L2 weight decay on weights (not biases):
/// `v ← μ·v − lr·(g + λ·w)`, `w ← w + v`.
pub fn sgd_step(
    weights: &mut WeightSet,
    grads: &WeightSet,
    velocity: &mut WeightSet,
    iter: usize,
    config: &SolverConfig,
) -> Result<(), TrainError> {
    if weights.layers.len() != grads.layers.len() || weights.layers.len() != velocity.layers.len() {
        return Err(TrainError::Config("weights, gradients and velocity differ in layout".into()));
    }
    for (layer, g) in grads.layers.iter().enumerate() {
        if let Some(g) = g {
            let bad = g
                .weight
                .data()
                .iter()
                .chain(g.bias.data())
                .position(|v| !v.is_finite());
            if let Some(at) = bad {
                return Err(TrainError::NonFiniteGradient { iteration: iter, layer, at });
            }
        }
    }
    let lr = lr_at(iter, config);
    let mu = config.momentum;
    let decay = config.weight_decay;
    let layers = weights
        .layers
        .iter_mut()
        .zip(&grads.layers)
        .zip(velocity.layers.iter_mut());
    for ((w, g), v) in layers {
        let (Some(w), Some(g), Some(v)) = (w, g, v) else {
            continue;
        };
        if w.weight.shape() != g.weight.shape() || w.weight.shape() != v.weight.shape() {
            return Err(TrainError::Config("parameter shapes differ".into()));
        }
        for ((wi, gi), vi) in w.weight.data_mut().iter_mut().zip(g.weight.data()).zip(v.weight.data_mut()) {
            *vi = mu * *vi - lr * (gi + decay * *wi);
            *wi += *vi;
        }
        for ((wi, gi), vi) in w.bias.data_mut().iter_mut().zip(g.bias.data()).zip(v.bias.data_mut()) {
            *vi = mu * *vi - lr * gi;
            *wi += *vi;
        }
    }
    Ok(())
}
