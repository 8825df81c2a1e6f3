use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, UnitBall};

use super::GridError;

/// Rigid-body augmentation: a rotation about the grid center followed by a
/// translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    /// Unit quaternion `(w, x, y, z)`.
    rotation: [f64; 4],
    /// Translation in Å.
    translation: [f64; 3],
}

impl Default for Transform {
    fn default() -> Self {
        Transform::identity()
    }
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            rotation: [1.0, 0.0, 0.0, 0.0],
            translation: [0.0; 3],
        }
    }

    /// Normalises `rotation`; a zero or non-finite quaternion is rejected.
    pub fn new(rotation: [f64; 4], translation: [f64; 3]) -> Result<Self, GridError> {
        let norm = rotation.iter().map(|q| q * q).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) || translation.iter().any(|t| !t.is_finite()) {
            return Err(GridError::BadTransform);
        }
        Ok(Transform {
            rotation: rotation.map(|q| q / norm),
            translation,
        })
    }

    /// Rotation by `angle` radians about `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self, GridError> {
        let n = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(n > 0.0) {
            return Err(GridError::BadTransform);
        }
        let s = (angle / 2.0).sin() / n;
        Transform::new(
            [(angle / 2.0).cos(), axis[0] * s, axis[1] * s, axis[2] * s],
            [0.0; 3],
        )
    }

    pub fn with_translation(mut self, translation: [f64; 3]) -> Self {
        self.translation = translation;
        self
    }

    pub fn rotation(&self) -> [f64; 4] {
        self.rotation
    }

    pub fn translation(&self) -> [f64; 3] {
        self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.rotation == [1.0, 0.0, 0.0, 0.0] && self.translation == [0.0; 3]
    }

    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let [w, x, y, z] = self.rotation;
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let m = self.rotation_matrix();
        [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    /// Image of `p` when rotating about `center` and then translating. The
    /// identity transform returns `p` unchanged, bit for bit.
    pub fn apply(&self, p: [f64; 3], center: [f64; 3]) -> [f64; 3] {
        if self.is_identity() {
            return p;
        }
        let r = self.rotate([p[0] - center[0], p[1] - center[1], p[2] - center[2]]);
        [0, 1, 2].map(|k| center[k] + r[k] + self.translation[k])
    }
}

/// Draws an augmentation transform.
///
/// With `rotate` set the rotation is uniform on SO(3) (Shoemake's subgroup
/// algorithm); the translation is uniform in the ball of radius
/// `max_translate`. Nothing is drawn for a disabled component.
pub fn sample_transform<R: Rng + ?Sized>(
    rng: &mut R,
    max_translate: f64,
    rotate: bool,
) -> Result<Transform, GridError> {
    if !(max_translate >= 0.0 && max_translate.is_finite()) {
        return Err(GridError::BadTranslate(max_translate));
    }
    let mut t = Transform::identity();
    if rotate {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let a = (1.0 - u1).sqrt();
        let b = u1.sqrt();
        let q = [
            b * (2.0 * PI * u3).cos(),
            a * (2.0 * PI * u2).sin(),
            a * (2.0 * PI * u2).cos(),
            b * (2.0 * PI * u3).sin(),
        ];
        t = Transform::new(q, [0.0; 3])?;
    }
    if max_translate > 0.0 {
        let v: [f64; 3] = UnitBall.sample(rng);
        t.translation = v.map(|x| x * max_translate);
    }
    Ok(t)
}
