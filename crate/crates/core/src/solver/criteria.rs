use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::Angle;

/// Two angles fit in one triangle iff their sum is below π.
pub fn decide_triangle(a: Angle, b: Angle) -> bool {
    a.radians() + b.radians() < PI
}

/// Sufficient condition for four distinct angles `θ₁ > θ₂ > θ₃ > θ₄` to be
/// unrealizable by four points in the plane or in space:
/// `θ₄ > 2π/3` and `θ₂ + θ₃ > π + θ₄`.
pub fn impossible_four(angles: [Angle; 4]) -> Result<bool> {
    let [t1, t2, t3, t4] = angles.map(Angle::radians);
    if !(t1 > t2 && t2 > t3 && t3 > t4) {
        return Err(Error::NotSorted);
    }
    Ok(t4 > 2.0 * PI / 3.0 && t2 + t3 > PI + t4)
}
