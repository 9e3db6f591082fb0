//! Uniform one-dimensional spatial grid.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Nodes `x0 + i·dx` for `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 5;

    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidConfig(format!("grid spacing {dx} / origin {x0} invalid")));
        }
        if n < Self::MIN_POINTS {
            return Err(Error::TooFewSamples { needed: Self::MIN_POINTS, got: n });
        }
        Ok(Self { x0, dx, n })
    }

    /// Smallest grid with spacing `dx` starting at `lo` and reaching at least `hi`.
    pub fn covering(lo: f64, hi: f64, dx: f64) -> Result<Self> {
        let n = ((hi - lo) / dx - 1e-9).ceil().max(0.0) as usize + 1;
        Self::new(lo, dx, n)
    }

    /// Grid with spacing `dx` and an odd node count, symmetric about `center`,
    /// covering at least `[center − half_width, center + half_width]`.
    pub fn symmetric(center: f64, half_width: f64, dx: f64) -> Result<Self> {
        let half = (half_width / dx - 1e-9).ceil().max(2.0) as usize;
        Self::new(center - half as f64 * dx, dx, 2 * half + 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.x0 <= lo + 1e-9 && self.x_max() >= hi - 1e-9
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }
}
