//! Reduced two-body dynamics `z̈ = 16√2·e^{−√2 z}` for the kink separation,
//! its closed-form solution and an RK4 cross-check.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, SQRT_2};

/// Parameters of the closed-form trajectories.
///
/// `d(t) = (1/√2)·ln((8/v²)·cosh²(√2·v·t + c))` and the centers move as
/// `a + b·t ∓ d(t)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub v: f64,
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

/// `16√2·e^{−√2 z}`.
pub fn separation_force(z: f64) -> f64 {
    16.0 * SQRT_2 * (-SQRT_2 * z).exp()
}

pub fn params_from_initial(x1_0: f64, x2_0: f64, xdot1_0: f64, xdot2_0: f64) -> Result<EffectiveParams> {
    let z0 = x2_0 - x1_0;
    if !(z0 > 0.0) {
        return Err(Error::NonPositiveSeparation { z: z0 });
    }
    let zdot0 = xdot2_0 - xdot1_0;
    let v = conserved_quantity(z0, zdot0).sqrt();
    let arg = zdot0 / (32.0 * (-SQRT_2 * z0).exp() + zdot0 * zdot0).sqrt();
    if !(arg.abs() < 1.0 - 1e-15) {
        return Err(Error::ArctanhDomain { arg });
    }
    // arctanh(ż/√(32e^{−√2z}+ż²)) = asinh(ż·e^{z/√2}/(4√2)), well conditioned near |arg| → 1.
    let c = (zdot0 * (z0 / SQRT_2).exp() / (4.0 * SQRT_2)).asinh();
    Ok(EffectiveParams {
        v,
        c,
        a: 0.5 * (x1_0 + x2_0),
        b: 0.5 * (xdot1_0 + xdot2_0),
    })
}

/// `ln cosh(u)` without overflow.
pub fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn phase(t: f64, p: &EffectiveParams) -> f64 {
    SQRT_2 * p.v * t + p.c
}

pub fn separation_d(t: f64, p: &EffectiveParams) -> f64 {
    ((8.0 / (p.v * p.v)).ln() + 2.0 * ln_cosh(phase(t, p))) / SQRT_2
}

/// `ḋ = 2v·tanh(√2vt + c)`.
pub fn separation_rate(t: f64, p: &EffectiveParams) -> f64 {
    2.0 * p.v * phase(t, p).tanh()
}

/// `d̈ = 2√2·v²·sech²(√2vt + c)`.
pub fn separation_acceleration(t: f64, p: &EffectiveParams) -> f64 {
    let s = phase(t, p);
    let sech = if s.abs() > 350.0 { 0.0 } else { 1.0 / s.cosh() };
    2.0 * SQRT_2 * p.v * p.v * sech * sech
}

/// `(d₁, d₂) = (a + bt − d/2, a + bt + d/2)`.
pub fn centers_d1_d2(t: f64, p: &EffectiveParams) -> (f64, f64) {
    let mid = p.a + p.b * t;
    let half = 0.5 * separation_d(t, p);
    (mid - half, mid + half)
}

/// `(ḋ₁, ḋ₂)`.
pub fn center_rates(t: f64, p: &EffectiveParams) -> (f64, f64) {
    let half = 0.5 * separation_rate(t, p);
    (p.b - half, p.b + half)
}

/// Minimal separation `(1/√2)·ln(8/v²)`.
pub fn minimal_separation(p: &EffectiveParams) -> f64 {
    (8.0 / (p.v * p.v)).ln() / SQRT_2
}

/// `ż²/4 + 8e^{−√2 z}`; equals `v²` along exact trajectories.
pub fn conserved_quantity(z: f64, zdot: f64) -> f64 {
    0.25 * zdot * zdot + 8.0 * (-SQRT_2 * z).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedSample {
    pub t: f64,
    pub z: f64,
    pub zdot: f64,
}

/// Classic RK4 on `(z, ż)`, sampled at every step including `t = 0`.
pub fn integrate_reduced(z0: f64, zdot0: f64, t_end: f64, dt: f64) -> Result<Vec<ReducedSample>> {
    if !(z0 > 0.0) {
        return Err(Error::NonPositiveSeparation { z: z0 });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("time step {dt} must be positive")));
    }
    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let (mut z, mut w) = (z0, zdot0);
    out.push(ReducedSample { t: 0.0, z, zdot: w });
    for k in 1..=steps {
        let k1 = (w, separation_force(z));
        let k2 = (w + 0.5 * dt * k1.1, separation_force(z + 0.5 * dt * k1.0));
        let k3 = (w + 0.5 * dt * k2.1, separation_force(z + 0.5 * dt * k2.0));
        let k4 = (w + dt * k3.1, separation_force(z + dt * k3.0));
        z += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        w += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        out.push(ReducedSample { t: k as f64 * dt, z, zdot: w });
    }
    Ok(out)
}
