//! The sextic potential `U(φ) = φ²(1−φ²)²`, its derivatives, and the static
//! kink/antikink profiles together with their Lorentz boosts.
//!
//! The kink joins the vacuum 0 at −∞ to the vacuum 1 at +∞; the antikink joins
//! −1 to 0. All evaluations avoid growing exponentials, so they stay finite
//! for any finite argument.

use crate::error::{Error, Result};
use std::f64::consts::SQRT_2;

/// `U(φ) = φ²(1−φ²)²`.
pub fn potential(phi: f64) -> f64 {
    let p2 = phi * phi;
    let w = 1.0 - p2;
    p2 * w * w
}

/// `U'(φ) = 2φ − 8φ³ + 6φ⁵`.
#[inline]
pub fn potential_d1(phi: f64) -> f64 {
    let p2 = phi * phi;
    phi * (2.0 + p2 * (-8.0 + 6.0 * p2))
}

/// `U''(φ) = 2 − 24φ² + 30φ⁴`.
#[inline]
pub fn potential_d2(phi: f64) -> f64 {
    let p2 = phi * phi;
    2.0 + p2 * (-24.0 + 30.0 * p2)
}

/// `U'''(φ) = −48φ + 120φ³`.
#[inline]
pub fn potential_d3(phi: f64) -> f64 {
    phi * (-48.0 + 120.0 * phi * phi)
}

/// k-th derivative of the potential for `k` in `1..=6`.
pub fn potential_derivative(k: u32, phi: f64) -> Result<f64> {
    match k {
        1 => Ok(potential_d1(phi)),
        2 => Ok(potential_d2(phi)),
        3 => Ok(potential_d3(phi)),
        4 => Ok(-48.0 + 360.0 * phi * phi),
        5 => Ok(720.0 * phi),
        6 => Ok(720.0),
        _ => Err(Error::DerivativeOrder { order: k, min: 1, max: 6 }),
    }
}

/// Kink profile `e^{√2x}/(1+e^{2√2x})^{1/2}`, increasing from 0 to 1.
pub fn kink_value(x: f64) -> f64 {
    if x > 0.0 {
        1.0 / (1.0 + (-2.0 * SQRT_2 * x).exp()).sqrt()
    } else {
        let e = (SQRT_2 * x).exp();
        e / (1.0 + e * e).sqrt()
    }
}

/// `1 − H(x)²` without cancellation for large positive `x`.
pub fn kink_complement_sq(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-2.0 * SQRT_2 * x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + (2.0 * SQRT_2 * x).exp())
    }
}

/// `H'(x) = √2·H(1−H²)`.
#[inline]
pub fn kink_slope(x: f64) -> f64 {
    SQRT_2 * kink_value(x) * kink_complement_sq(x)
}

/// `H''(x) = U'(H) = 2H(1−H²)(1−3H²)`.
#[inline]
pub fn kink_curvature(x: f64) -> f64 {
    let h = kink_value(x);
    2.0 * h * kink_complement_sq(x) * (1.0 - 3.0 * h * h)
}

/// `H'''(x) = U''(H)·H'`.
#[inline]
pub fn kink_third_derivative(x: f64) -> f64 {
    let h = kink_value(x);
    potential_d2(h) * SQRT_2 * h * kink_complement_sq(x)
}

/// First or second derivative of the kink profile.
pub fn kink_derivative(order: u32, x: f64) -> Result<f64> {
    match order {
        1 => Ok(kink_slope(x)),
        2 => Ok(kink_curvature(x)),
        _ => Err(Error::DerivativeOrder { order, min: 1, max: 2 }),
    }
}

/// Antikink profile `−H(−x)`, increasing from −1 to 0.
#[inline]
pub fn antikink_value(x: f64) -> f64 {
    -kink_value(-x)
}

#[inline]
pub fn antikink_slope(x: f64) -> f64 {
    kink_slope(-x)
}

#[inline]
pub fn antikink_curvature(x: f64) -> f64 {
    -kink_curvature(-x)
}

#[inline]
pub fn antikink_third_derivative(x: f64) -> f64 {
    kink_third_derivative(-x)
}

/// Which of the two profiles a kink uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Joins 0 to 1.
    RightKink,
    /// Joins −1 to 0.
    LeftAntikink,
}

impl Orientation {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Orientation::RightKink => kink_value(x),
            Orientation::LeftAntikink => antikink_value(x),
        }
    }

    pub fn slope(self, x: f64) -> f64 {
        match self {
            Orientation::RightKink => kink_slope(x),
            Orientation::LeftAntikink => antikink_slope(x),
        }
    }

    pub fn curvature(self, x: f64) -> f64 {
        match self {
            Orientation::RightKink => kink_curvature(x),
            Orientation::LeftAntikink => antikink_curvature(x),
        }
    }

    pub fn third_derivative(self, x: f64) -> f64 {
        match self {
            Orientation::RightKink => kink_third_derivative(x),
            Orientation::LeftAntikink => antikink_third_derivative(x),
        }
    }
}

/// How a moving kink's profile is built from the static one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contraction {
    /// `H((x−a−vt)/√(1−v²))`, an exact travelling wave.
    #[default]
    Lorentz,
    /// `H(x−a−vt)`, the Galilean shift of the static profile.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KinkSpec {
    pub orientation: Orientation,
    pub center: f64,
    pub boost_velocity: f64,
}

/// Value and time derivative of a Lorentz-boosted kink at `(x, t)`.
pub fn boosted_kink_field(spec: &KinkSpec, x: f64, t: f64) -> Result<(f64, f64)> {
    boosted_kink_field_with(spec, x, t, Contraction::Lorentz)
}

/// Value and time derivative of a moving kink with the chosen contraction.
pub fn boosted_kink_field_with(
    spec: &KinkSpec,
    x: f64,
    t: f64,
    contraction: Contraction,
) -> Result<(f64, f64)> {
    let v = spec.boost_velocity;
    if !(v.abs() < 1.0) {
        return Err(Error::SpeedOutOfRange { v });
    }
    let width = match contraction {
        Contraction::Lorentz => (1.0 - v * v).sqrt(),
        Contraction::None => 1.0,
    };
    let s = (x - spec.center - v * t) / width;
    let value = spec.orientation.value(s);
    let rate = -v / width * spec.orientation.slope(s);
    Ok((value, rate))
}
