//! Self-describing binary grid dump.
//!
//! Layout, little-endian: 8-byte magic `VXGRID01`, `u32` side N, `u32`
//! channel count C, `f32` resolution in Å, then `C·N³` binary32 values in
//! channel-major order (x, y, z with z fastest).

use super::{DensityGrid, GridError};

pub const GRID_DUMP_MAGIC: &[u8; 8] = b"VXGRID01";
const HEADER: usize = 8 + 4 + 4 + 4;

#[derive(Debug, Clone, PartialEq)]
pub struct GridDump {
    pub side: usize,
    pub channels: usize,
    pub resolution: f32,
    pub values: Vec<f32>,
}

impl From<&DensityGrid> for GridDump {
    fn from(g: &DensityGrid) -> Self {
        GridDump {
            side: g.side(),
            channels: g.channels(),
            resolution: g.config.resolution as f32,
            values: g.values().to_vec(),
        }
    }
}

pub fn write_grid_dump(dump: &GridDump) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 4 * dump.values.len());
    out.extend_from_slice(GRID_DUMP_MAGIC);
    out.extend_from_slice(&(dump.side as u32).to_le_bytes());
    out.extend_from_slice(&(dump.channels as u32).to_le_bytes());
    out.extend_from_slice(&dump.resolution.to_le_bytes());
    for v in &dump.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_grid_dump(bytes: &[u8]) -> Result<GridDump, GridError> {
    if bytes.len() < HEADER || &bytes[..8] != GRID_DUMP_MAGIC {
        return Err(GridError::Dump("missing magic header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let side = u32_at(8);
    let channels = u32_at(12);
    let resolution = f32::from_le_bytes(bytes[16..20].try_into().unwrap());
    let count = channels
        .checked_mul(side.pow(3))
        .ok_or_else(|| GridError::Dump("size overflow".into()))?;
    let body = &bytes[HEADER..];
    if body.len() != 4 * count {
        return Err(GridError::Dump(format!(
            "expected {count} values, found {} bytes",
            body.len()
        )));
    }
    let values = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(GridDump {
        side,
        channels,
        resolution,
        values,
    })
}
