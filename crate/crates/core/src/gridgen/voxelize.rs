use rayon::prelude::*;

use super::density::DensityProfile;
use super::transform::Transform;
use super::{GridConfig, GridError, Occupancy};
use crate::moldata::{Channel, Molecule};

/// A `C × N × N × N` grid of atom densities.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    values: Vec<f32>,
    side: usize,
    channels: usize,
    pub center: [f64; 3],
    pub config: GridConfig,
    pub transform: Transform,
}

impl DensityGrid {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f32> {
        self.values
    }

    pub fn channel(&self, c: usize) -> &[f32] {
        let n3 = self.side.pow(3);
        &self.values[c * n3..(c + 1) * n3]
    }

    pub fn index(&self, c: usize, i: usize, j: usize, k: usize) -> usize {
        ((c * self.side + i) * self.side + j) * self.side + k
    }

    pub fn get(&self, c: usize, i: usize, j: usize, k: usize) -> f32 {
        self.values[self.index(c, i, j, k)]
    }

    /// Coordinate of grid index `i` along `axis`.
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        point_coordinate(self.center[axis], i, self.side, self.config.resolution)
    }

    /// Sum of all values, accumulated in `f64`.
    pub fn total(&self) -> f64 {
        self.values.iter().map(|&v| v as f64).sum()
    }

    pub fn channel_total(&self, c: usize) -> f64 {
        self.channel(c).iter().map(|&v| v as f64).sum()
    }
}

#[inline]
fn point_coordinate(center: f64, i: usize, side: usize, resolution: f64) -> f64 {
    center + (i as f64 - (side as f64 - 1.0) / 2.0) * resolution
}

struct PlacedAtom {
    position: [f64; 3],
    profile: DensityProfile,
}

fn check_typing(mol: &Molecule, config: &GridConfig) -> Result<(), GridError> {
    if mol.is_empty() {
        return Ok(());
    }
    if mol.typing != Some(config.scheme) {
        if let Some(index) = mol.atoms.iter().position(|a| a.channel == Channel::Unassigned) {
            return Err(GridError::Untyped {
                role: mol.role,
                index,
            });
        }
        return Err(GridError::SchemeMismatch {
            role: mol.role,
            expected: config.scheme,
            found: mol.typing,
        });
    }
    Ok(())
}

/// Rasterises a receptor–ligand pair onto a density grid.
///
/// Each atom is moved by `transform` about `center`; its density is added to
/// its channel at every grid point within `radius_multiplier · r` (Gaussian
/// occupancy), or the point is set to 1 when it lies strictly inside `r`
/// (Boolean occupancy). Atoms are visited receptor first, then ligand, in
/// file order, so every point sums its contributions in a fixed order.
pub fn voxelize(
    receptor: &Molecule,
    ligand: &Molecule,
    center: [f64; 3],
    config: &GridConfig,
    transform: &Transform,
) -> Result<DensityGrid, GridError> {
    config.validate()?;
    if center.iter().any(|c| !c.is_finite()) {
        return Err(GridError::NonFiniteCenter);
    }
    check_typing(receptor, config)?;
    check_typing(ligand, config)?;

    let side = config.side()?;
    let channels = config.channels();
    let mut per_channel: Vec<Vec<PlacedAtom>> = (0..channels).map(|_| Vec::new()).collect();
    for mol in [receptor, ligand] {
        for (index, atom) in mol.atoms.iter().enumerate() {
            match atom.channel {
                Channel::Index(c) => per_channel[c].push(PlacedAtom {
                    position: transform.apply(atom.position, center),
                    profile: DensityProfile::new(atom.vdw_radius, config.radius_multiplier)?,
                }),
                Channel::Dropped => {}
                Channel::Unassigned => {
                    return Err(GridError::Untyped {
                        role: mol.role,
                        index,
                    })
                }
            }
        }
    }

    let coords: Vec<Vec<f64>> = (0..3)
        .map(|axis| {
            (0..side)
                .map(|i| point_coordinate(center[axis], i, side, config.resolution))
                .collect()
        })
        .collect();

    let n3 = side * side * side;
    let mut values = vec![0.0f32; channels * n3];
    values
        .par_chunks_mut(n3)
        .zip(per_channel.par_iter())
        .for_each(|(slab, atoms)| {
            for atom in atoms {
                splat(slab, atom, &coords, center, side, config);
            }
        });

    Ok(DensityGrid {
        values,
        side,
        channels,
        center,
        config: *config,
        transform: *transform,
    })
}

/// Index range along one axis whose points may lie within `reach` of `p`.
fn axis_range(p: f64, reach: f64, center: f64, side: usize, resolution: f64) -> Option<(usize, usize)> {
    let origin = (side as f64 - 1.0) / 2.0;
    let lo = ((p - reach - center) / resolution + origin).floor() - 1.0;
    let hi = ((p + reach - center) / resolution + origin).ceil() + 1.0;
    if hi < 0.0 || lo > (side - 1) as f64 {
        return None;
    }
    Some((lo.max(0.0) as usize, hi.min((side - 1) as f64) as usize))
}

fn splat(
    slab: &mut [f32],
    atom: &PlacedAtom,
    coords: &[Vec<f64>],
    center: [f64; 3],
    side: usize,
    config: &GridConfig,
) {
    let boolean = config.occupancy == Occupancy::Boolean;
    let reach = if boolean {
        atom.profile.radius
    } else {
        atom.profile.cutoff
    };
    let mut ranges = [(0, 0); 3];
    for axis in 0..3 {
        match axis_range(atom.position[axis], reach, center[axis], side, config.resolution) {
            Some(r) => ranges[axis] = r,
            None => return,
        }
    }
    let [px, py, pz] = atom.position;
    for i in ranges[0].0..=ranges[0].1 {
        let dx = coords[0][i] - px;
        for j in ranges[1].0..=ranges[1].1 {
            let dy = coords[1][j] - py;
            let row = (i * side + j) * side;
            for k in ranges[2].0..=ranges[2].1 {
                let dz = coords[2][k] - pz;
                let d = (dx * dx + dy * dy + dz * dz).sqrt();
                if boolean {
                    if d < atom.profile.radius {
                        slab[row + k] = 1.0;
                    }
                } else if d < atom.profile.cutoff {
                    slab[row + k] += atom.profile.eval(d) as f32;
                }
            }
        }
    }
}
