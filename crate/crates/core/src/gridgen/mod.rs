//! Multi-channel atom density grids.
//!
//! Grid point `(i, j, k)` sits at `center + (index − (N−1)/2)·resolution`
//! along x, y and z, so an `N³` grid is symmetric about its center. Values
//! are stored channel-major, then x, y, z with z fastest.

mod density;
mod dump;
mod transform;
mod voxelize;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::moldata::{AtomTypeScheme, Role};

pub use density::{atom_density, DensityProfile};
pub use dump::{read_grid_dump, write_grid_dump, GridDump, GRID_DUMP_MAGIC};
pub use transform::{sample_transform, Transform};
pub use voxelize::{voxelize, DensityGrid};

pub const SUPPORTED_RESOLUTIONS: [f64; 5] = [0.25, 0.5, 0.75, 1.0, 1.5];
pub const SUPPORTED_MULTIPLIERS: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];
pub const DEFAULT_MAX_TRANSLATE: f64 = 2.0;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("atomic radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("radius multiplier must be at least 1, got {0}")]
    BadMultiplier(f64),
    #[error("grid dimension {dimension} Å is not a positive integer multiple of resolution {resolution} Å")]
    BadGeometry { dimension: f64, resolution: f64 },
    #[error("grid center is not finite")]
    NonFiniteCenter,
    #[error("{role} atom {index} has no channel assignment")]
    Untyped { role: Role, index: usize },
    #[error("{role} molecule is typed under {found:?}, grid expects {expected}")]
    SchemeMismatch {
        role: Role,
        expected: AtomTypeScheme,
        found: Option<AtomTypeScheme>,
    },
    #[error("invalid rotation or translation")]
    BadTransform,
    #[error("maximum translation must be nonnegative, got {0}")]
    BadTranslate(f64),
    #[error("grid dump: {0}")]
    Dump(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Occupancy {
    #[default]
    Gaussian,
    Boolean,
}

impl fmt::Display for Occupancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Occupancy::Gaussian => "gaussian",
            Occupancy::Boolean => "boolean",
        })
    }
}

impl FromStr for Occupancy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(Occupancy::Gaussian),
            "boolean" => Ok(Occupancy::Boolean),
            _ => Err(format!("unknown occupancy '{s}' (expected gaussian or boolean)")),
        }
    }
}

/// Grid geometry and typing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Edge length in Å.
    pub dimension: f64,
    /// Point spacing in Å.
    pub resolution: f64,
    pub radius_multiplier: f64,
    pub occupancy: Occupancy,
    pub scheme: AtomTypeScheme,
}

impl Default for GridConfig {
    /// 24 Å cube at 0.5 Å (48³ points), Gaussian density to 1.5·r, smina34.
    fn default() -> Self {
        GridConfig {
            dimension: 24.0,
            resolution: 0.5,
            radius_multiplier: 1.5,
            occupancy: Occupancy::Gaussian,
            scheme: AtomTypeScheme::Smina34,
        }
    }
}

impl GridConfig {
    /// Points per side, `dimension / resolution`.
    pub fn side(&self) -> Result<usize, GridError> {
        let bad = || GridError::BadGeometry {
            dimension: self.dimension,
            resolution: self.resolution,
        };
        if !(self.dimension > 0.0 && self.resolution > 0.0) {
            return Err(bad());
        }
        let ratio = self.dimension / self.resolution;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * n {
            return Err(bad());
        }
        Ok(n as usize)
    }

    pub fn channels(&self) -> usize {
        self.scheme.channel_count()
    }

    pub fn validate(&self) -> Result<(), GridError> {
        self.side()?;
        if !(self.radius_multiplier >= 1.0 && self.radius_multiplier.is_finite()) {
            return Err(GridError::BadMultiplier(self.radius_multiplier));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_geometry_is_48_cubed() {
        let c = GridConfig::default();
        assert_eq!(c.side().unwrap(), 48);
        assert_eq!(c.channels(), 34);
        for res in SUPPORTED_RESOLUTIONS {
            let c = GridConfig {
                resolution: res,
                ..Default::default()
            };
            assert_eq!(c.side().unwrap() as f64 * res, 24.0);
        }
    }

    #[test]
    fn fractional_side_rejected() {
        let c = GridConfig {
            dimension: 24.0,
            resolution: 0.7,
            ..Default::default()
        };
        assert!(matches!(c.side(), Err(GridError::BadGeometry { .. })));
        let c = GridConfig {
            radius_multiplier: 0.5,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(GridError::BadMultiplier(_))));
    }
}
