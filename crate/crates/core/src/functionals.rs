//! Quadrature, energy functionals, the pair interaction energy, remainder
//! norms, smooth cut-offs and the Lyapunov functional.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::modulation::ModulationFrame;
use crate::pde::FieldState;
use crate::potential_kinks::{
    antikink_curvature, antikink_slope, antikink_value, kink_curvature, kink_slope, kink_value,
    potential, potential_d1, potential_d2, potential_d3,
};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Step used by [`interaction_energy`] and its derivatives.
pub const INTERACTION_DX: f64 = 0.01;
/// Tail margin beyond the outermost kink center.
pub const TAIL_MARGIN: f64 = 40.0;

// ---------------------------------------------------------------- quadrature

/// Composite Simpson weights for `n` equally spaced samples.
///
/// An even sample count closes the last three intervals with the 3/8 rule.
pub fn simpson_weights(n: usize, dx: f64) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    let mut w = vec![0.0; n];
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 4 };
    if simpson_end > 0 {
        for (i, wi) in w.iter_mut().enumerate().take(simpson_end + 1) {
            *wi = if i == 0 || i == simpson_end {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
        }
        for wi in w.iter_mut().take(simpson_end + 1) {
            *wi *= dx / 3.0;
        }
    }
    if n.is_multiple_of(2) {
        let s = n - 4;
        for (k, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
            w[s + k] += c * 3.0 * dx / 8.0;
        }
    }
    Ok(w)
}

/// Composite Simpson integral of equally spaced samples.
pub fn integrate(samples: &[f64], dx: f64) -> Result<f64> {
    let w = simpson_weights(samples.len(), dx)?;
    Ok(dot(&w, samples))
}

/// Precomputed quadrature weights for repeated integrals on one grid.
#[derive(Debug, Clone)]
pub struct Quadrature {
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(n: usize, dx: f64) -> Result<Self> {
        Ok(Self { weights: simpson_weights(n, dx)? })
    }

    pub fn for_grid(grid: &Grid) -> Result<Self> {
        Self::new(grid.n, grid.dx)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.weights.len());
        dot(&self.weights, f)
    }

    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), self.weights.len());
        debug_assert_eq!(b.len(), self.weights.len());
        self.weights.iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum()
    }

    /// `∫ f(x)` where `f` is evaluated node by node.
    pub fn integrate_with(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * f(i)).sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ----------------------------------------------------------- differentiation

/// Second-order centered first derivative, one-sided at the two ends.
pub fn centered_derivative(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        return d;
    }
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    d
}

const CENTERED_COEFFS: [&[f64]; 4] = [
    &[1.0 / 2.0],
    &[2.0 / 3.0, -1.0 / 12.0],
    &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
    &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
];

/// Eighth-order centered first derivative, dropping order near the edges.
pub fn high_order_derivative(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        return d;
    }
    for i in 1..n - 1 {
        let m = i.min(n - 1 - i).min(4);
        let c = CENTERED_COEFFS[m - 1];
        let mut s = 0.0;
        for (k, ck) in c.iter().enumerate() {
            s += ck * (f[i + k + 1] - f[i - k - 1]);
        }
        d[i] = s / dx;
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    d
}

// ------------------------------------------------------------------ energies

/// `∫₀¹ √(2U(φ)) dφ`, the potential energy of one static kink.
pub fn reference_energy() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let n = 1001;
        let h = 1.0 / (n - 1) as f64;
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let p = i as f64 * h;
                (2.0 * potential(p)).sqrt()
            })
            .collect();
        integrate(&samples, h).expect("fixed sample count")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub e_kin: f64,
    pub e_pot: f64,
    pub e_total: f64,
    /// `e_total − 2·E_ref`.
    pub epsilon: f64,
}

fn check_state(state: &FieldState) -> Result<()> {
    if state.phi.len() != state.pi.len() {
        return Err(Error::LengthMismatch { left: state.phi.len(), right: state.pi.len() });
    }
    if state.phi.len() < Grid::MIN_POINTS {
        return Err(Error::TooFewSamples { needed: Grid::MIN_POINTS, got: state.phi.len() });
    }
    Ok(())
}

/// `½∫φ_x² + ∫U(φ)`.
pub fn potential_energy(state: &FieldState) -> Result<f64> {
    check_state(state)?;
    let d = high_order_derivative(&state.phi, state.dx);
    let density: Vec<f64> =
        state.phi.iter().zip(&d).map(|(p, dp)| 0.5 * dp * dp + potential(*p)).collect();
    integrate(&density, state.dx)
}

/// `½∫π²`.
pub fn kinetic_energy(state: &FieldState) -> Result<f64> {
    check_state(state)?;
    let density: Vec<f64> = state.pi.iter().map(|p| 0.5 * p * p).collect();
    integrate(&density, state.dx)
}

pub fn energy_breakdown(state: &FieldState) -> Result<EnergyBreakdown> {
    let e_kin = kinetic_energy(state)?;
    let e_pot = potential_energy(state)?;
    let e_total = e_kin + e_pot;
    Ok(EnergyBreakdown { e_kin, e_pot, e_total, epsilon: e_total - 2.0 * reference_energy() })
}

// -------------------------------------------------------- interaction energy

/// Antikink at `−z/2`, kink at `+z/2`, sampled on a symmetric grid.
struct PairSamples {
    quad: Quadrature,
    anti: Vec<f64>,
    anti_slope: Vec<f64>,
    kink: Vec<f64>,
    kink_slope: Vec<f64>,
}

fn pair_samples(z: f64, dx: f64) -> Result<PairSamples> {
    if !(z > 0.0) {
        return Err(Error::NonPositiveSeparation { z });
    }
    let grid = Grid::symmetric(0.0, z / 2.0 + TAIL_MARGIN, dx)?;
    let h = z / 2.0;
    Ok(PairSamples {
        quad: Quadrature::for_grid(&grid)?,
        anti: grid.sample(|x| antikink_value(x + h)),
        anti_slope: grid.sample(|x| antikink_slope(x + h)),
        kink: grid.sample(|x| kink_value(x - h)),
        kink_slope: grid.sample(|x| kink_slope(x - h)),
    })
}

/// Potential energy of the antikink–kink superposition at separation `z`.
pub fn interaction_energy(z: f64) -> Result<f64> {
    interaction_energy_with_step(z, INTERACTION_DX)
}

pub fn interaction_energy_with_step(z: f64, dx: f64) -> Result<f64> {
    let s = pair_samples(z, dx)?;
    Ok(s.quad.integrate_with(|i| {
        let d = s.anti_slope[i] + s.kink_slope[i];
        0.5 * d * d + potential(s.anti[i] + s.kink[i])
    }))
}

/// `dA/dz = ∫ H₂'·[U'(H₁) + U'(H₂) − U'(H₁+H₂)]`.
pub fn interaction_energy_prime(z: f64) -> Result<f64> {
    interaction_energy_prime_with_step(z, INTERACTION_DX)
}

pub fn interaction_energy_prime_with_step(z: f64, dx: f64) -> Result<f64> {
    let s = pair_samples(z, dx)?;
    Ok(s.quad.integrate_with(|i| {
        let (a, k) = (s.anti[i], s.kink[i]);
        s.kink_slope[i] * (potential_d1(a) + potential_d1(k) - potential_d1(a + k))
    }))
}

/// `d²A/dz² = ∫ H₂'·H₁'·[U''(H₁) − U''(H₁+H₂)]`.
pub fn interaction_energy_double_prime(z: f64) -> Result<f64> {
    interaction_energy_double_prime_with_step(z, INTERACTION_DX)
}

pub fn interaction_energy_double_prime_with_step(z: f64, dx: f64) -> Result<f64> {
    let s = pair_samples(z, dx)?;
    Ok(s.quad.integrate_with(|i| {
        let (a, k) = (s.anti[i], s.kink[i]);
        s.kink_slope[i] * s.anti_slope[i] * (potential_d2(a) - potential_d2(a + k))
    }))
}

/// Leading-order asymptotic excess `2√2·e^{−√2 z}` of the interaction energy.
pub fn interaction_asymptote(z: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * (-std::f64::consts::SQRT_2 * z).exp()
}

// ------------------------------------------------------------------- norms

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderNorms {
    pub h1_norm_g: f64,
    pub l2_norm_gt: f64,
    /// `h1_norm_g + l2_norm_gt`.
    pub combined: f64,
}

pub fn l2_norm(f: &[f64], dx: f64) -> Result<f64> {
    let sq: Vec<f64> = f.iter().map(|v| v * v).collect();
    Ok(integrate(&sq, dx)?.max(0.0).sqrt())
}

pub fn h1_norm(f: &[f64], dx: f64) -> Result<f64> {
    let d = centered_derivative(f, dx);
    let density: Vec<f64> = f.iter().zip(&d).map(|(v, dv)| v * v + dv * dv).collect();
    Ok(integrate(&density, dx)?.max(0.0).sqrt())
}

pub fn remainder_norms(g: &[f64], g_t: &[f64], dx: f64) -> Result<RemainderNorms> {
    if g.len() != g_t.len() {
        return Err(Error::LengthMismatch { left: g.len(), right: g_t.len() });
    }
    let h1_norm_g = h1_norm(g, dx)?;
    let l2_norm_gt = l2_norm(g_t, dx)?;
    Ok(RemainderNorms { h1_norm_g, l2_norm_gt, combined: h1_norm_g + l2_norm_gt })
}

/// `−φ_xx + U'(φ)` at interior nodes; zero at the two boundary nodes.
pub fn epot_gradient_residual(state: &FieldState) -> Vec<f64> {
    let phi = &state.phi;
    let n = phi.len();
    let mut r = vec![0.0; n];
    if n < 3 {
        return r;
    }
    let inv = 1.0 / (state.dx * state.dx);
    for i in 1..n - 1 {
        r[i] = -(phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * inv + potential_d1(phi[i]);
    }
    r
}

// -------------------------------------------------------------- cut-offs

fn bump_exp(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn bump_exp_derivative(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp() / (s * s)
    } else {
        0.0
    }
}

/// C^∞ step: 0 for `s ≤ 0`, 1 for `s ≥ 1`.
pub fn smooth_step(s: f64) -> f64 {
    let a = bump_exp(s);
    let b = bump_exp(1.0 - s);
    a / (a + b)
}

pub fn smooth_step_derivative(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    let a = bump_exp(s);
    let b = bump_exp(1.0 - s);
    let da = bump_exp_derivative(s);
    let db = bump_exp_derivative(1.0 - s);
    (da * b + a * db) / ((a + b) * (a + b))
}

/// Smooth cut equal to 1 for `ξ ≤ start` and 0 for `ξ ≥ end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub start: f64,
    pub end: f64,
}

impl Transition {
    /// Window used by the Lyapunov functional.
    pub const LYAPUNOV: Transition = Transition { start: 0.75, end: 0.8 };

    pub fn value(&self, xi: f64) -> f64 {
        1.0 - smooth_step((xi - self.start) / (self.end - self.start))
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        let w = self.end - self.start;
        -smooth_step_derivative((xi - self.start) / w) / w
    }
}

// -------------------------------------------------------- Lyapunov functional

/// Value of the corrected quadratic functional for a modulated frame.
pub fn lyapunov_f(frame: &ModulationFrame, xdot1: f64, xdot2: f64) -> Result<f64> {
    let z = frame.x2 - frame.x1;
    if !(z > 0.0) {
        return Err(Error::NonPositiveSeparation { z });
    }
    if frame.g.len() != frame.g_t.len() {
        return Err(Error::LengthMismatch { left: frame.g.len(), right: frame.g_t.len() });
    }
    let grid = frame.grid;
    let quad = Quadrature::for_grid(&grid)?;
    let g = &frame.g;
    let gt = &frame.g_t;
    let gx = centered_derivative(g, grid.dx);
    let window = Transition::LYAPUNOV;
    Ok(quad.integrate_with(|i| {
        let x = grid.x(i);
        let h1 = antikink_value(x - frame.x1);
        let h2 = kink_value(x - frame.x2);
        let hs = h1 + h2;
        let gi = g[i];
        let quadratic = gt[i] * gt[i] + gx[i] * gx[i] + potential_d2(hs) * gi * gi;
        let interaction = -2.0 * gi * (potential_d1(h1) + potential_d1(h2) - potential_d1(hs));
        let motion = 2.0
            * gi
            * (xdot1 * xdot1 * antikink_curvature(x - frame.x1)
                + xdot2 * xdot2 * kink_curvature(x - frame.x2));
        let w = window.value((x - frame.x1) / z);
        let momentum = 2.0 * gt[i] * gx[i] * (xdot1 * w + xdot2 * (1.0 - w));
        let cubic = potential_d3(hs) * gi * gi * gi / 3.0;
        quadratic + interaction + motion + momentum + cubic
    }))
}

/// `∫ g_t² + g_x² + U''(H₁+H₂)g²`, the second variation of the energy at the pair.
pub fn second_variation(frame: &ModulationFrame) -> Result<f64> {
    let grid = frame.grid;
    let quad = Quadrature::for_grid(&grid)?;
    let gx = centered_derivative(&frame.g, grid.dx);
    Ok(quad.integrate_with(|i| {
        let x = grid.x(i);
        let hs = antikink_value(x - frame.x1) + kink_value(x - frame.x2);
        frame.g_t[i] * frame.g_t[i] + gx[i] * gx[i] + potential_d2(hs) * frame.g[i] * frame.g[i]
    }))
}

/// Empirical coercivity ratio `⟨D²E g, g⟩ / ‖g‖²_{H¹}` of the static part.
pub fn coercivity_ratio(frame: &ModulationFrame) -> Result<f64> {
    let grid = frame.grid;
    let quad = Quadrature::for_grid(&grid)?;
    let gx = centered_derivative(&frame.g, grid.dx);
    let form = quad.integrate_with(|i| {
        let x = grid.x(i);
        let hs = antikink_value(x - frame.x1) + kink_value(x - frame.x2);
        gx[i] * gx[i] + potential_d2(hs) * frame.g[i] * frame.g[i]
    });
    let norm_sq = quad.integrate_with(|i| frame.g[i] * frame.g[i] + gx[i] * gx[i]);
    if norm_sq <= 0.0 {
        return Err(Error::Degenerate("zero remainder".into()));
    }
    Ok(form / norm_sq)
}
