//! Modulated decomposition `φ = H₋₁,₀(·−x₁) + H₀,₁(·−x₂) + g` with `g`
//! orthogonal to both translation modes, plus modulation velocities and the
//! cut-off corrected momenta.

use crate::error::{Error, Result};
use crate::functionals::{centered_derivative, remainder_norms, Quadrature, RemainderNorms, Transition};
use crate::grid::Grid;
use crate::pde::FieldState;
use crate::potential_kinks::{
    antikink_curvature, antikink_slope, antikink_value, kink_curvature, kink_slope, kink_value,
};
use serde::{Deserialize, Serialize};

/// `‖H'‖²_{L²} = 1/(2√2)`.
pub const SLOPE_NORM_SQ: f64 = 0.353_553_390_593_273_8;
/// Relative orthogonality tolerance, scaled by `‖H'‖·‖g‖`.
pub const ORTHO_REL_TOL: f64 = 1e-10;
/// Absolute floor on the orthogonality tolerance (round-off level of `⟨g, H'⟩`).
pub const ORTHO_ABS_FLOOR: f64 = 1e-14;
pub const MAX_NEWTON_ITERS: usize = 50;
/// Below this separation frames are declared invalid.
pub const MIN_SEPARATION: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulationFrame {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub z: f64,
    pub grid: Grid,
    pub g: Vec<f64>,
    /// `π + ẋ₁·∂ₓH₁ + ẋ₂·∂ₓH₂`.
    pub g_t: Vec<f64>,
    pub xdot1: f64,
    pub xdot2: f64,
    pub ortho_residuals: (f64, f64),
    pub norms: RemainderNorms,
    pub newton_iters: usize,
    pub matrix_det: f64,
    pub valid: bool,
}

impl ModulationFrame {
    /// Placeholder for a frame where the decomposition was not attempted or failed.
    pub fn invalid(state: &FieldState, x1: f64, x2: f64) -> Self {
        let nan = f64::NAN;
        Self {
            t: state.t,
            x1,
            x2,
            z: x2 - x1,
            grid: state.grid(),
            g: Vec::new(),
            g_t: Vec::new(),
            xdot1: nan,
            xdot2: nan,
            ortho_residuals: (nan, nan),
            norms: RemainderNorms { h1_norm_g: nan, l2_norm_gt: nan, combined: nan },
            newton_iters: 0,
            matrix_det: nan,
            valid: false,
        }
    }

    pub fn g_l2_norm(&self) -> f64 {
        Quadrature::for_grid(&self.grid).map(|q| q.inner(&self.g, &self.g).max(0.0).sqrt()).unwrap_or(f64::NAN)
    }

    /// Tolerance the orthogonality residuals are held to.
    pub fn ortho_tolerance(&self) -> f64 {
        ortho_tolerance(self.g_l2_norm())
    }

    pub fn ortho_satisfied(&self) -> bool {
        let tol = self.ortho_tolerance();
        self.ortho_residuals.0.abs() <= tol && self.ortho_residuals.1.abs() <= tol
    }
}

pub fn ortho_tolerance(g_l2: f64) -> f64 {
    ORTHO_REL_TOL * SLOPE_NORM_SQ.sqrt() * g_l2 + ORTHO_ABS_FLOOR
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationVelocities {
    pub xdot1: f64,
    pub xdot2: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Profiles of the modulated pair at every grid node.
struct PairProfiles {
    anti: Vec<f64>,
    anti_slope: Vec<f64>,
    anti_curv: Vec<f64>,
    kink: Vec<f64>,
    kink_slope: Vec<f64>,
    kink_curv: Vec<f64>,
}

impl PairProfiles {
    fn new(grid: &Grid, x1: f64, x2: f64) -> Self {
        Self {
            anti: grid.sample(|x| antikink_value(x - x1)),
            anti_slope: grid.sample(|x| antikink_slope(x - x1)),
            anti_curv: grid.sample(|x| antikink_curvature(x - x1)),
            kink: grid.sample(|x| kink_value(x - x2)),
            kink_slope: grid.sample(|x| kink_slope(x - x2)),
            kink_curv: grid.sample(|x| kink_curvature(x - x2)),
        }
    }

    fn remainder(&self, phi: &[f64]) -> Vec<f64> {
        phi.iter().zip(&self.anti).zip(&self.kink).map(|((p, a), k)| p - a - k).collect()
    }
}

/// Symmetric 2×2 matrix `[[a, b], [b, d]]`.
#[derive(Debug, Clone, Copy)]
struct Sym2 {
    a: f64,
    b: f64,
    d: f64,
}

impl Sym2 {
    fn det(&self) -> f64 {
        self.a * self.d - self.b * self.b
    }

    fn solve(&self, r: (f64, f64)) -> Result<(f64, f64)> {
        let det = self.det();
        if !(det.abs() >= 1e-8) {
            return Err(Error::SingularMatrix { det });
        }
        Ok(((self.d * r.0 - self.b * r.1) / det, (self.a * r.1 - self.b * r.0) / det))
    }
}

fn modulation_matrix(quad: &Quadrature, p: &PairProfiles, g: &[f64]) -> Sym2 {
    Sym2 {
        a: quad.inner(&p.anti_slope, &p.anti_slope) - quad.inner(g, &p.anti_curv),
        b: quad.inner(&p.anti_slope, &p.kink_slope),
        d: quad.inner(&p.kink_slope, &p.kink_slope) - quad.inner(g, &p.kink_curv),
    }
}

fn residual(quad: &Quadrature, p: &PairProfiles, g: &[f64]) -> (f64, f64) {
    (quad.inner(g, &p.anti_slope), quad.inner(g, &p.kink_slope))
}

fn rnorm(r: (f64, f64)) -> f64 {
    r.0.hypot(r.1)
}

/// Finds centers making the remainder orthogonal to both translation modes.
pub fn decompose(state: &FieldState, guess: (f64, f64)) -> Result<ModulationFrame> {
    let (mut x1, mut x2) = guess;
    if !(x1 < x2) {
        return Err(Error::KinksOutOfOrder { x1, x2 });
    }
    if x2 - x1 < MIN_SEPARATION {
        return Err(Error::Collapsed { z: x2 - x1 });
    }
    let grid = state.grid();
    let quad = Quadrature::for_grid(&grid)?;

    let mut prof = PairProfiles::new(&grid, x1, x2);
    let mut g = prof.remainder(&state.phi);
    let mut r = residual(&quad, &prof, &g);
    let mut iters = 0;
    loop {
        let tol = ortho_tolerance(quad.inner(&g, &g).max(0.0).sqrt());
        let converged = r.0.abs() <= 1e-2 * tol && r.1.abs() <= 1e-2 * tol;
        if converged || iters >= MAX_NEWTON_ITERS {
            break;
        }
        iters += 1;
        let m = modulation_matrix(&quad, &prof, &g);
        let (s1, s2) = m.solve(r)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let (c1, c2) = (x1 - lambda * s1, x2 - lambda * s2);
            if c2 - c1 < 1.0 {
                lambda *= 0.5;
                continue;
            }
            let p = PairProfiles::new(&grid, c1, c2);
            let gc = p.remainder(&state.phi);
            let rc = residual(&quad, &p, &gc);
            if rnorm(rc) < rnorm(r) {
                (x1, x2, prof, g, r) = (c1, c2, p, gc, rc);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted || (lambda * s1).abs().max((lambda * s2).abs()) < 1e-14 {
            break;
        }
    }
    let tol = ortho_tolerance(quad.inner(&g, &g).max(0.0).sqrt());
    if !(r.0.abs() <= tol && r.1.abs() <= tol) {
        return Err(Error::NewtonFailed { iterations: iters, residual: rnorm(r) });
    }
    if x2 - x1 < 1.0 {
        return Err(Error::Collapsed { z: x2 - x1 });
    }

    let m = modulation_matrix(&quad, &prof, &g);
    let det = m.det();
    let rhs = (-quad.inner(&state.pi, &prof.anti_slope), -quad.inner(&state.pi, &prof.kink_slope));
    let (xdot1, xdot2) = m.solve(rhs)?;
    let g_t: Vec<f64> = (0..grid.n)
        .map(|i| state.pi[i] + xdot1 * prof.anti_slope[i] + xdot2 * prof.kink_slope[i])
        .collect();
    let norms = remainder_norms(&g, &g_t, grid.dx)?;
    Ok(ModulationFrame {
        t: state.t,
        x1,
        x2,
        z: x2 - x1,
        grid,
        g,
        g_t,
        xdot1,
        xdot2,
        ortho_residuals: r,
        norms,
        newton_iters: iters,
        matrix_det: det,
        valid: true,
    })
}

/// Exponent `γ = ln ln(1/ε) / ln(1/ε)` of the momentum cut-off.
pub fn cut_exponent(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < (-1.0f64).exp()) {
        return Err(Error::InvalidEpsilon { eps: epsilon });
    }
    let l = (1.0 / epsilon).ln();
    Ok(l.ln() / l)
}

/// Cut `χ` with `χ = 1` below `θ(1−γ)` and `χ = 0` above `θ = (1−γ)/(2−γ)`.
pub fn momentum_cut(epsilon: f64) -> Result<Transition> {
    let gamma = cut_exponent(epsilon)?;
    let theta = (1.0 - gamma) / (2.0 - gamma);
    Ok(Transition { start: theta * (1.0 - gamma), end: theta })
}

/// Modulation velocities and corrected momenta for a decomposed frame.
pub fn modulation_velocities(frame: &ModulationFrame, pi: &[f64], epsilon: f64) -> Result<ModulationVelocities> {
    let grid = frame.grid;
    if pi.len() != grid.n || frame.g.len() != grid.n {
        return Err(Error::LengthMismatch { left: pi.len(), right: grid.n });
    }
    let quad = Quadrature::for_grid(&grid)?;
    let prof = PairProfiles::new(&grid, frame.x1, frame.x2);
    let m = modulation_matrix(&quad, &prof, &frame.g);
    let rhs = (-quad.inner(pi, &prof.anti_slope), -quad.inner(pi, &prof.kink_slope));
    let (xdot1, xdot2) = m.solve(rhs)?;

    let cut = momentum_cut(epsilon)?;
    let z = frame.x2 - frame.x1;
    let gx = centered_derivative(&frame.g, grid.dx);
    let chi: Vec<f64> = grid.sample(|x| cut.value((x - frame.x1) / z));
    let dchi: Vec<f64> = grid.sample(|x| cut.derivative((x - frame.x1) / z) / z);
    let g = &frame.g;
    let left = quad.integrate_with(|i| pi[i] * (prof.anti_slope[i] + dchi[i] * g[i] + chi[i] * gx[i]));
    let right =
        quad.integrate_with(|i| pi[i] * (prof.kink_slope[i] - dchi[i] * g[i] + (1.0 - chi[i]) * gx[i]));
    Ok(ModulationVelocities { xdot1, xdot2, p1: -left / SLOPE_NORM_SQ, p2: -right / SLOPE_NORM_SQ })
}

/// Centers guessed from the crossings of `∓1/√2`.
pub fn heuristic_centers(state: &FieldState) -> Option<(f64, f64)> {
    let level = std::f64::consts::FRAC_1_SQRT_2;
    let grid = state.grid();
    let phi = &state.phi;
    let n = phi.len();
    let cross = |i: usize, c: f64| {
        let (a, b) = (phi[i] - c, phi[i + 1] - c);
        grid.x(i) + grid.dx * a / (a - b)
    };
    let x1 = (0..n - 1).find(|&i| phi[i] < -level && phi[i + 1] >= -level).map(|i| cross(i, -level))?;
    let x2 = (0..n - 1).rev().find(|&i| phi[i] < level && phi[i + 1] >= level).map(|i| cross(i, level))?;
    (x1 < x2).then_some((x1, x2))
}

/// Sequential decomposition seeded by the previous frame's centers.
#[derive(Debug, Clone, Default)]
pub struct Tracker {
    seed: Option<(f64, f64)>,
}

impl Tracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Decomposes the next snapshot. The first call must succeed; later
    /// failures, and frames closer than [`MIN_SEPARATION`], come back invalid.
    pub fn push(&mut self, state: &FieldState) -> Result<ModulationFrame> {
        let Some(seed) = self.seed else {
            let guess = heuristic_centers(state)
                .ok_or_else(|| Error::InvalidConfig("no antikink/kink crossings in first snapshot".into()))?;
            let frame = decompose(state, guess)?;
            self.seed = Some((frame.x1, frame.x2));
            return Ok(frame);
        };
        let guess = if seed.1 - seed.0 >= MIN_SEPARATION {
            Some(seed)
        } else {
            heuristic_centers(state).filter(|(a, b)| b - a >= MIN_SEPARATION)
        };
        let Some(guess) = guess else {
            let (a, b) = heuristic_centers(state).unwrap_or((f64::NAN, f64::NAN));
            return Ok(ModulationFrame::invalid(state, a, b));
        };
        Ok(match decompose(state, guess) {
            Ok(f) => {
                self.seed = Some((f.x1, f.x2));
                if f.z >= MIN_SEPARATION {
                    f
                } else {
                    ModulationFrame::invalid(state, f.x1, f.x2)
                }
            }
            Err(_) => ModulationFrame::invalid(state, guess.0, guess.1),
        })
    }
}

/// Decomposes every snapshot in order; see [`Tracker::push`].
pub fn track(snapshots: &[FieldState]) -> Result<Vec<ModulationFrame>> {
    let mut tracker = Tracker::new();
    snapshots.iter().map(|s| tracker.push(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::TAIL_MARGIN;
    use crate::pde::{init_two_kink_state, run, SolverConfig};
    use crate::potential_kinks::Contraction;
    use proptest::prelude::*;

    fn planted(x1: f64, x2: f64, dx: f64) -> FieldState {
        let grid = Grid::covering(x1 - TAIL_MARGIN - 3.0, x2 + TAIL_MARGIN + 3.0, dx).unwrap();
        let phi = grid.sample(|x| antikink_value(x - x1) + kink_value(x - x2));
        FieldState { x0: grid.x0, dx, phi, pi: vec![0.0; grid.n], t: 0.0 }
    }

    fn translation_momentum(s: &FieldState, x1: f64, x2: f64, v: f64) -> Vec<f64> {
        s.grid().sample(|x| -v * (antikink_slope(x - x1) + kink_slope(x - x2)))
    }

    #[test]
    fn zero_remainder_recovers_planted_centers() {
        let s = planted(-5.1, 5.3, 0.05);
        let f = decompose(&s, (-5.0, 5.0)).unwrap();
        assert!((f.x1 + 5.1).abs() < 1e-10 && (f.x2 - 5.3).abs() < 1e-10, "{} {}", f.x1, f.x2);
        assert!(f.norms.h1_norm_g < 1e-9);
        assert!(f.ortho_satisfied());
        assert!(f.matrix_det > 0.0);
        assert!(f.valid && (f.z - 10.4).abs() < 1e-10);
    }

    #[test]
    fn small_bump_shifts_centers_proportionally() {
        let mut s = planted(-5.1, 5.3, 0.05);
        let grid = s.grid();
        for (p, b) in s.phi.iter_mut().zip(grid.sample(|x| 0.01 * (-(x - 5.3).powi(2)).exp())) {
            *p += b;
        }
        let f = decompose(&s, (-5.0, 5.0)).unwrap();
        assert!((f.x2 - 5.3).abs() <= 10.0 * 0.01, "x2 = {}", f.x2);
        assert!((f.x1 + 5.1).abs() <= 10.0 * 0.01);
        assert!(f.ortho_residuals.0.abs() <= f.ortho_tolerance());
        assert!(f.ortho_residuals.1.abs() <= f.ortho_tolerance());
        assert!(f.ortho_tolerance() <= 1e-10 * SLOPE_NORM_SQ.sqrt() * f.g_l2_norm() + ORTHO_ABS_FLOOR);
    }

    #[test]
    fn opposite_guesses_reach_the_same_frame() {
        let mut s = planted(-6.0, 6.5, 0.05);
        let grid = s.grid();
        for (p, b) in s.phi.iter_mut().zip(grid.sample(|x| 0.02 * (-(x + 4.0).powi(2) / 2.0).exp())) {
            *p += b;
        }
        let a = decompose(&s, (-6.5, 6.0)).unwrap();
        let b = decompose(&s, (-5.5, 7.0)).unwrap();
        assert!((a.x1 - b.x1).abs() < 1e-10 && (a.x2 - b.x2).abs() < 1e-10);

        // Brute-force scan of the residual norm brackets the Newton solution.
        let quad = Quadrature::for_grid(&grid).unwrap();
        let h = 0.05;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in -10..=10 {
            for j in -10..=10 {
                let (c1, c2) = (a.x1 + i as f64 * h, a.x2 + j as f64 * h);
                let p = PairProfiles::new(&grid, c1, c2);
                let r = rnorm(residual(&quad, &p, &p.remainder(&s.phi)));
                if r < best.0 {
                    best = (r, c1, c2);
                }
            }
        }
        assert!((best.1 - a.x1).abs() < h && (best.2 - a.x2).abs() < h);
    }

    #[test]
    fn remainder_reconstructs_field() {
        let grid = Grid::covering(-50.0, 50.0, 0.05).unwrap();
        let s = init_two_kink_state(&grid, -7.0, 8.0, 0.1, -0.2, None, Contraction::Lorentz).unwrap();
        let f = decompose(&s, (-7.2, 8.3)).unwrap();
        for i in 0..grid.n {
            let x = grid.x(i);
            let rebuilt = antikink_value(x - f.x1) + kink_value(x - f.x2) + f.g[i];
            assert!((rebuilt - s.phi[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn translation_momentum_gives_exact_velocity() {
        let s = planted(-6.0, 6.0, 0.05);
        let f = decompose(&s, (-6.0, 6.0)).unwrap();
        let pi = translation_momentum(&s, f.x1, f.x2, 0.1);
        let mv = modulation_velocities(&f, &pi, 1e-3).unwrap();
        assert!((mv.xdot1 - 0.1).abs() < 1e-12 && (mv.xdot2 - 0.1).abs() < 1e-12);

        let still = modulation_velocities(&f, &vec![0.0; s.n()], 1e-3).unwrap();
        assert_eq!((still.xdot1, still.xdot2, still.p1, still.p2), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn corrected_momenta_deviate_by_admissible_amount() {
        let grid = Grid::covering(-52.0, 52.0, 0.05).unwrap();
        let bump = grid.sample(|x| 1e-3 * (-x * x).exp());
        let zeros = vec![0.0; grid.n];
        let pert = crate::pde::Perturbation { phi: &bump, pi: &zeros };
        let s0 = init_two_kink_state(&grid, -6.0, 6.0, 0.05, -0.05, Some(pert), Contraction::Lorentz).unwrap();
        let eps = crate::functionals::energy_breakdown(&s0).unwrap().epsilon;
        let snaps = run(&s0, &SolverConfig::default(), 20.0, 100).unwrap();
        for f in track(&snaps).unwrap() {
            let pi = &snaps.iter().find(|s| s.t == f.t).unwrap().pi;
            let mv = modulation_velocities(&f, pi, eps).unwrap();
            let gn = f.norms.combined;
            let tail = f.z * (-std::f64::consts::SQRT_2 * f.z).exp();
            for (p, xd) in [(mv.p1, mv.xdot1), (mv.p2, mv.xdot2)] {
                let envelope = gn * xd.abs() + gn * gn + xd.abs() * tail;
                assert!((p - xd).abs() <= 10.0 * envelope, "t={}: |p−ẋ|={} env={envelope}", f.t, (p - xd).abs());
            }
        }
    }

    #[test]
    fn static_pair_track_is_stationary() {
        let grid = Grid::covering(-50.0, 50.0, 0.05).unwrap();
        let s = init_two_kink_state(&grid, -10.0, 10.0, 0.0, 0.0, None, Contraction::Lorentz).unwrap();
        let snaps = run(&s, &SolverConfig::default(), 10.0, 5).unwrap();
        assert_eq!(snaps.len(), 101);
        let frames = track(&snaps).unwrap();
        for f in &frames {
            assert!(f.valid && f.ortho_satisfied());
            assert!((f.x1 + 10.0).abs() < 1e-6 && (f.x2 - 10.0).abs() < 1e-6, "t={} {} {}", f.t, f.x1, f.x2);
        }
    }

    #[test]
    fn heuristic_guess_is_close() {
        let grid = Grid::covering(-60.0, 60.0, 0.05).unwrap();
        for (x1, x2, v) in [(-8.0, 8.0, 0.0), (-10.0, 4.0, 0.3), (-5.0, 5.0, 0.1)] {
            let s = init_two_kink_state(&grid, x1, x2, v, -v, None, Contraction::Lorentz).unwrap();
            let (h1, h2) = heuristic_centers(&s).unwrap();
            let f = decompose(&s, (h1, h2)).unwrap();
            assert!((h1 - f.x1).abs() < 0.5 && (h2 - f.x2).abs() < 0.5);
        }
        assert!(heuristic_centers(&FieldState::uniform(&grid, 1.0)).is_none());
    }

    #[test]
    fn tracker_fails_hard_only_on_first_frame() {
        let grid = Grid::covering(-50.0, 50.0, 0.1).unwrap();
        let vac = FieldState::uniform(&grid, 1.0);
        assert!(Tracker::new().push(&vac).is_err());

        let s = init_two_kink_state(&grid, -6.0, 6.0, 0.0, 0.0, None, Contraction::Lorentz).unwrap();
        let mut tr = Tracker::new();
        assert!(tr.push(&s).unwrap().valid);
        let later = tr.push(&vac).unwrap();
        assert!(!later.valid && later.xdot1.is_nan());
    }

    #[test]
    fn decompose_rejects_collapsed_or_unordered_guesses() {
        let s = planted(-5.0, 5.0, 0.1);
        assert!(matches!(decompose(&s, (1.0, 2.5)), Err(Error::Collapsed { .. })));
        assert!(matches!(decompose(&s, (3.0, -3.0)), Err(Error::KinksOutOfOrder { .. })));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = Sym2 { a: 1.0, b: 1.0, d: 1.0 };
        assert!(matches!(m.solve((1.0, 0.0)), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn cut_geometry() {
        let eps: f64 = 1e-3;
        let l = (1.0 / eps).ln();
        let gamma = cut_exponent(eps).unwrap();
        assert!((gamma - l.ln() / l).abs() < 1e-15);
        let cut = momentum_cut(eps).unwrap();
        let theta = (1.0 - gamma) / (2.0 - gamma);
        assert!((cut.end - theta).abs() < 1e-15 && (cut.start - theta * (1.0 - gamma)).abs() < 1e-15);
        assert!(cut.end < 0.5);
        assert!(cut_exponent(0.5).is_err() && cut_exponent(0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn planted_centers_are_recovered(x1 in -10.0f64..-2.0, z in 4.0f64..20.0, d1 in -0.4f64..0.4, d2 in -0.4f64..0.4) {
            let x2 = x1 + z;
            let s = planted(x1, x2, 0.05);
            let f = decompose(&s, (x1 + d1, x2 + d2)).unwrap();
            prop_assert!((f.x1 - x1).abs() < 1e-9 && (f.x2 - x2).abs() < 1e-9);
        }

        #[test]
        fn uniform_translation_velocity_is_exact(v in -0.9f64..0.9, z in 4.0f64..20.0) {
            let s = planted(-z / 2.0, z / 2.0, 0.05);
            let f = decompose(&s, (-z / 2.0, z / 2.0)).unwrap();
            let pi = translation_momentum(&s, f.x1, f.x2, v);
            let mv = modulation_velocities(&f, &pi, 1e-3).unwrap();
            prop_assert!((mv.xdot1 - v).abs() < 1e-12 && (mv.xdot2 - v).abs() < 1e-12);
            let residual_rate = s.grid().nodes().iter().zip(&pi)
                .map(|(x, p)| (p + mv.xdot1 * antikink_slope(x - f.x1) + mv.xdot2 * kink_slope(x - f.x2)).abs())
                .fold(0.0, f64::max);
            prop_assert!(residual_rate < 1e-12);
        }
    }
}
