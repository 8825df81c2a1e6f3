//! Weight checkpoint files.
//!
//! Layout, little-endian: magic `VXCKPT01`; `u32` length and UTF-8 text of
//! the network description; its 32-byte SHA-256 fingerprint; `u32` count
//! of parameterised layers; then per such layer `u32` layer index, `u32`
//! weight rank, `u32` dims, `u32` bias length, binary32 weights, binary32
//! biases.

use super::spec::NetworkSpec;
use super::tensor::Tensor;
use super::weights::{Params, WeightSet};
use super::NetError;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"VXCKPT01";

pub fn save_checkpoint(spec: &NetworkSpec, weights: &WeightSet) -> Result<Vec<u8>, NetError> {
    weights.check(spec)?;
    let desc = spec.describe();
    let mut out = Vec::new();
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&(desc.len() as u32).to_le_bytes());
    out.extend_from_slice(desc.as_bytes());
    out.extend_from_slice(&spec.fingerprint());
    let count = weights.params().count() as u32;
    out.extend_from_slice(&count.to_le_bytes());
    for (i, p) in weights.layers.iter().enumerate() {
        let Some(p) = p else { continue };
        out.extend_from_slice(&(i as u32).to_le_bytes());
        out.extend_from_slice(&(p.weight.shape().len() as u32).to_le_bytes());
        for d in p.weight.shape() {
            out.extend_from_slice(&(*d as u32).to_le_bytes());
        }
        out.extend_from_slice(&(p.bias.len() as u32).to_le_bytes());
        for v in p.weight.data().iter().chain(p.bias.data()) {
            out.extend_from_slice(&(*v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], NetError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            NetError::Checkpoint(format!("truncated at byte {}", self.pos))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize, NetError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f64>, NetError> {
        let bytes = self.take(n.checked_mul(4).ok_or_else(|| NetError::Checkpoint("size overflow".into()))?)?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect())
    }
}

/// Reads a checkpoint. When `expected` is given, its fingerprint must match
/// the stored one.
pub fn load_checkpoint(
    bytes: &[u8],
    expected: Option<&NetworkSpec>,
) -> Result<(NetworkSpec, WeightSet), NetError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8).ok() != Some(&CHECKPOINT_MAGIC[..]) {
        return Err(NetError::Checkpoint("missing magic header".into()));
    }
    let len = r.u32()?;
    let desc = std::str::from_utf8(r.take(len)?)
        .map_err(|_| NetError::Checkpoint("description is not UTF-8".into()))?;
    let spec = NetworkSpec::parse(desc)?;
    let stored: [u8; 32] = r.take(32)?.try_into().unwrap();
    if stored != spec.fingerprint() {
        return Err(NetError::Checkpoint("fingerprint does not match description".into()));
    }
    if let Some(e) = expected {
        if e.fingerprint() != stored {
            return Err(NetError::Checkpoint(format!(
                "checkpoint network '{desc}' differs from expected '{}'",
                e.describe()
            )));
        }
    }
    let mut weights = WeightSet::zeros(&spec)?;
    let count = r.u32()?;
    if count != weights.params().count() {
        return Err(NetError::Checkpoint(format!("{count} parameter layers stored")));
    }
    for _ in 0..count {
        let index = r.u32()?;
        let rank = r.u32()?;
        if rank > 8 {
            return Err(NetError::Checkpoint(format!("weight rank {rank}")));
        }
        let dims = (0..rank).map(|_| r.u32()).collect::<Result<Vec<_>, _>>()?;
        let bias_len = r.u32()?;
        let slot = weights
            .layers
            .get_mut(index)
            .and_then(|s| s.as_mut())
            .ok_or_else(|| NetError::Checkpoint(format!("layer {index} has no parameters")))?;
        if slot.weight.shape() != dims.as_slice() || slot.bias.len() != bias_len {
            return Err(NetError::Checkpoint(format!("layer {index} shape {dims:?}")));
        }
        let w = r.f32s(slot.weight.len())?;
        let b = r.f32s(bias_len)?;
        *slot = Params {
            weight: Tensor::new(dims, w)?,
            bias: Tensor::new(vec![bias_len], b)?,
        };
    }
    if r.pos != bytes.len() {
        return Err(NetError::Checkpoint("trailing bytes".into()));
    }
    if !weights.is_finite() {
        return Err(NetError::NonFinite("checkpoint weights"));
    }
    Ok((spec, weights))
}
