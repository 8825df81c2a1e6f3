use super::GridError;

/// Radial density profile of one atom: Gaussian inside the van der Waals
/// radius, a quadratic tail out to `multiplier * radius`, zero beyond.
///
/// The tail is `e⁻² · ((m·r − d) / ((m − 1)·r))²`: it meets the Gaussian's
/// value at `d = r` and reaches zero with zero slope at `d = m·r`. At the
/// default multiplier 1.5 this is exactly `4/(e²r²)·d² − 12/(e²r)·d + 9/e²`,
/// which also matches the Gaussian's slope at `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityProfile {
    pub radius: f64,
    pub cutoff: f64,
    /// Quadratic coefficients `a·d² + b·d + c` of the tail.
    pub quadratic: [f64; 3],
}

impl DensityProfile {
    pub fn new(radius: f64, multiplier: f64) -> Result<Self, GridError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GridError::NonPositiveRadius(radius));
        }
        if !(multiplier >= 1.0 && multiplier.is_finite()) {
            return Err(GridError::BadMultiplier(multiplier));
        }
        let e2 = (-2.0f64).exp();
        let quadratic = if multiplier > 1.0 {
            let span = (multiplier - 1.0) * radius;
            let scale = e2 / (span * span);
            let end = multiplier * radius;
            [scale, -2.0 * end * scale, end * end * scale]
        } else {
            [0.0; 3]
        };
        Ok(DensityProfile {
            radius,
            cutoff: multiplier * radius,
            quadratic,
        })
    }

    #[inline]
    pub fn eval(&self, d: f64) -> f64 {
        let r = self.radius;
        if d < r {
            (-2.0 * d * d / (r * r)).exp()
        } else if d < self.cutoff {
            let [a, b, c] = self.quadratic;
            a * d * d + b * d + c
        } else {
            0.0
        }
    }
}

/// Density at distance `d` from an atom of radius `r`.
pub fn atom_density(d: f64, r: f64, multiplier: f64) -> Result<f64, GridError> {
    Ok(DensityProfile::new(r, multiplier)?.eval(d))
}
