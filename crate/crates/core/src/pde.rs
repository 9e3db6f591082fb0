//! Velocity-Verlet evolution of `φ_tt = φ_xx − U'(φ)` with clamped vacuum
//! boundaries, and construction of antikink–kink initial data.

use crate::error::{Error, Result};
use crate::functionals::TAIL_MARGIN;
use crate::grid::Grid;
use crate::potential_kinks::{
    boosted_kink_field_with, potential_d1, Contraction, KinkSpec, Orientation,
};
use serde::{Deserialize, Serialize};

/// Discretised `(φ, ∂ₜφ)` at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub x0: f64,
    pub dx: f64,
    pub phi: Vec<f64>,
    pub pi: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn grid(&self) -> Grid {
        Grid { x0: self.x0, dx: self.dx, n: self.phi.len() }
    }

    /// Constant field `value` at rest.
    pub fn uniform(grid: &Grid, value: f64) -> Self {
        Self { x0: grid.x0, dx: grid.dx, phi: vec![value; grid.n], pi: vec![0.0; grid.n], t: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn as_u32(self) -> u32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    pub fn cfl_limit(self) -> f64 {
        match self {
            StencilOrder::Second => 0.9,
            StencilOrder::Fourth => 0.7,
        }
    }
}

impl TryFrom<u32> for StencilOrder {
    type Error = String;
    fn try_from(v: u32) -> std::result::Result<Self, String> {
        match v {
            2 => Ok(StencilOrder::Second),
            4 => Ok(StencilOrder::Fourth),
            _ => Err(format!("stencil order must be 2 or 4, got {v}")),
        }
    }
}

impl From<StencilOrder> for u32 {
    fn from(s: StencilOrder) -> u32 {
        s.as_u32()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub dt: f64,
    pub sponge_width: f64,
    pub sponge_strength: f64,
    pub stencil_order: StencilOrder,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { dt: 0.02, sponge_width: 0.0, sponge_strength: 0.0, stencil_order: StencilOrder::Fourth }
    }
}

impl SolverConfig {
    pub fn cfl(&self, dx: f64) -> f64 {
        self.dt / dx
    }

    pub fn validate(&self, dx: f64) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("time step {} must be positive", self.dt)));
        }
        if self.sponge_width < 0.0 || self.sponge_strength < 0.0 {
            return Err(Error::InvalidConfig("sponge parameters must be non-negative".into()));
        }
        let cfl = self.cfl(dx);
        let limit = self.stencil_order.cfl_limit();
        if cfl > limit {
            return Err(Error::CflViolation { cfl, limit, order: self.stencil_order.as_u32() });
        }
        Ok(())
    }
}

/// Optional additive perturbation `(g₀, g₁)` of the initial `(φ, π)`.
#[derive(Debug, Clone, Copy)]
pub struct Perturbation<'a> {
    pub phi: &'a [f64],
    pub pi: &'a [f64],
}

/// Moving antikink at `x1` plus moving kink at `x2`, evaluated at `t = 0`.
pub fn init_two_kink_state(
    grid: &Grid,
    x1: f64,
    x2: f64,
    v1: f64,
    v2: f64,
    perturbation: Option<Perturbation<'_>>,
    contraction: Contraction,
) -> Result<FieldState> {
    if !(x1 < x2) {
        return Err(Error::KinksOutOfOrder { x1, x2 });
    }
    for v in [v1, v2] {
        if !(v.abs() < 1.0) {
            return Err(Error::SpeedOutOfRange { v });
        }
    }
    let (need_lo, need_hi) = (x1 - TAIL_MARGIN, x2 + TAIL_MARGIN);
    if !grid.covers(need_lo, need_hi) {
        return Err(Error::GridTooSmall { lo: grid.x0, hi: grid.x_max(), need_lo, need_hi });
    }
    let anti = KinkSpec { orientation: Orientation::LeftAntikink, center: x1, boost_velocity: v1 };
    let kink = KinkSpec { orientation: Orientation::RightKink, center: x2, boost_velocity: v2 };
    let mut phi = Vec::with_capacity(grid.n);
    let mut pi = Vec::with_capacity(grid.n);
    for i in 0..grid.n {
        let x = grid.x(i);
        let (a, ar) = boosted_kink_field_with(&anti, x, 0.0, contraction)?;
        let (k, kr) = boosted_kink_field_with(&kink, x, 0.0, contraction)?;
        phi.push(a + k);
        pi.push(ar + kr);
    }
    if let Some(p) = perturbation {
        for s in [p.phi, p.pi] {
            if s.len() != grid.n {
                return Err(Error::LengthMismatch { left: s.len(), right: grid.n });
            }
        }
        phi.iter_mut().zip(p.phi).for_each(|(f, g)| *f += g);
        pi.iter_mut().zip(p.pi).for_each(|(f, g)| *f += g);
    }
    Ok(FieldState { x0: grid.x0, dx: grid.dx, phi, pi, t: 0.0 })
}

/// `φ_xx − U'(φ)` at interior nodes; zero on the clamped boundary nodes.
fn acceleration(phi: &[f64], dx: f64, order: StencilOrder, out: &mut [f64]) {
    let n = phi.len();
    let inv = 1.0 / (dx * dx);
    out[0] = 0.0;
    out[n - 1] = 0.0;
    let second = |i: usize| (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * inv;
    match order {
        StencilOrder::Second => {
            for i in 1..n - 1 {
                out[i] = second(i) - potential_d1(phi[i]);
            }
        }
        StencilOrder::Fourth => {
            let c = inv / 12.0;
            out[1] = second(1) - potential_d1(phi[1]);
            out[n - 2] = second(n - 2) - potential_d1(phi[n - 2]);
            for i in 2..n - 2 {
                let lap = (-phi[i + 2] + 16.0 * phi[i + 1] - 30.0 * phi[i] + 16.0 * phi[i - 1]
                    - phi[i - 2])
                    * c;
                out[i] = lap - potential_d1(phi[i]);
            }
        }
    }
}

fn sponge_profile(grid: &Grid, cfg: &SolverConfig) -> Option<Vec<f64>> {
    if cfg.sponge_width <= 0.0 || cfg.sponge_strength <= 0.0 {
        return None;
    }
    let (lo, hi) = (grid.x0, grid.x_max());
    Some(grid.sample(|x| {
        let depth = (lo + cfg.sponge_width - x).max(x - (hi - cfg.sponge_width)).max(0.0);
        let r = depth / cfg.sponge_width;
        cfg.sponge_strength * r * r
    }))
}

/// Stateful integrator that reuses the end-of-step acceleration.
pub struct Integrator {
    cfg: SolverConfig,
    acc: Vec<f64>,
    sponge: Option<Vec<f64>>,
    t0: f64,
    steps: u64,
}

impl Integrator {
    pub fn new(state: &FieldState, cfg: SolverConfig) -> Result<Self> {
        if state.phi.len() != state.pi.len() {
            return Err(Error::LengthMismatch { left: state.phi.len(), right: state.pi.len() });
        }
        if state.n() < Grid::MIN_POINTS {
            return Err(Error::TooFewSamples { needed: Grid::MIN_POINTS, got: state.n() });
        }
        cfg.validate(state.dx)?;
        let mut acc = vec![0.0; state.n()];
        acceleration(&state.phi, state.dx, cfg.stencil_order, &mut acc);
        Ok(Self { cfg, acc, sponge: sponge_profile(&state.grid(), &cfg), t0: state.t, steps: 0 })
    }

    pub fn advance(&mut self, state: &mut FieldState) -> Result<()> {
        let dt = self.cfg.dt;
        let h = 0.5 * dt;
        let n = state.n();
        for (p, a) in state.pi.iter_mut().zip(&self.acc) {
            *p += h * a;
        }
        state.pi[0] = 0.0;
        state.pi[n - 1] = 0.0;
        for (f, p) in state.phi.iter_mut().zip(&state.pi) {
            *f += dt * p;
        }
        acceleration(&state.phi, state.dx, self.cfg.stencil_order, &mut self.acc);
        for (p, a) in state.pi.iter_mut().zip(&self.acc) {
            *p += h * a;
        }
        if let Some(s) = &self.sponge {
            for (p, si) in state.pi.iter_mut().zip(s) {
                *p *= 1.0 - dt * si;
            }
        }
        let last_valid_t = state.t;
        self.steps += 1;
        state.t = self.t0 + self.steps as f64 * dt;
        if state.phi.iter().chain(&state.pi).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: state.t, last_valid_t });
        }
        Ok(())
    }
}

/// One kick–drift–kick step.
pub fn step(state: &FieldState, cfg: &SolverConfig) -> Result<FieldState> {
    let mut next = state.clone();
    Integrator::new(state, *cfg)?.advance(&mut next)?;
    Ok(next)
}

/// Number of steps of size `dt` needed to reach `t_end` from `t`.
pub fn step_count(t: f64, t_end: f64, dt: f64) -> u64 {
    ((t_end - t) / dt - 1e-9).ceil().max(0.0) as u64
}

/// Evolves to `t_end`, keeping a snapshot every `cadence` steps plus the
/// initial and final states.
pub fn run(state: &FieldState, cfg: &SolverConfig, t_end: f64, cadence: u64) -> Result<Vec<FieldState>> {
    if !(t_end > state.t) {
        return Err(Error::InvalidConfig(format!("t_end {t_end} must exceed t {}", state.t)));
    }
    let cadence = cadence.max(1);
    let total = step_count(state.t, t_end, cfg.dt);
    let mut integ = Integrator::new(state, *cfg)?;
    let mut cur = state.clone();
    let mut out = vec![cur.clone()];
    for k in 1..=total {
        integ.advance(&mut cur)?;
        if k % cadence == 0 || k == total {
            out.push(cur.clone());
        }
    }
    Ok(out)
}

/// Evolves `steps` steps in place.
pub fn evolve_steps(state: &mut FieldState, cfg: &SolverConfig, steps: u64) -> Result<()> {
    let mut integ = Integrator::new(state, *cfg)?;
    for _ in 0..steps {
        integ.advance(state)?;
    }
    Ok(())
}
