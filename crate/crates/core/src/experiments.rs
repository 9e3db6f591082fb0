//! Scenario runner: initial data, evolution, modulation tracking, comparison
//! with the reduced dynamics, envelope verdicts and report files.

use crate::effective_ode::{center_rates, centers_d1_d2, params_from_initial, separation_d, EffectiveParams};
use crate::error::{Error, Result};
use crate::functionals::{energy_breakdown, lyapunov_f, TAIL_MARGIN};
use crate::grid::Grid;
use crate::modulation::{modulation_velocities, ModulationFrame, Tracker};
use crate::pde::{init_two_kink_state, step_count, FieldState, Integrator, Perturbation, SolverConfig};
use crate::potential_kinks::Contraction;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str =
    "t,x1,x2,z,d1,d2,d,z_minus_d,xdot1,xdot2,norm_g_h1,norm_gt_l2,eps_t,F_t";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Default acceptance bound on `max ‖g‖_{H¹}/√ε`.
pub const ORBITAL_C_MAX: f64 = 10.0;
/// Default two-sided bound on the energy-excess ratio.
pub const T2_RATIO_K: f64 = 10.0;

// ------------------------------------------------------------------ config

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinkData {
    pub x1: f64,
    pub x2: f64,
    #[serde(default)]
    pub v1: f64,
    #[serde(default)]
    pub v2: f64,
    #[serde(default)]
    pub contraction: Contraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// Added to `φ`.
    G0,
    /// Added to `∂ₜφ`.
    G1,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbationSpec {
    #[default]
    None,
    Gaussian { amplitude: f64, width: f64, center: f64, channel: Channel },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub grid: Grid,
    pub kinks: KinkData,
    #[serde(default)]
    pub perturbation: PerturbationSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    pub t_end: f64,
    #[serde(default = "default_cadence")]
    pub frame_cadence: u64,
    #[serde(default)]
    pub outputs: Option<PathBuf>,
    #[serde(default)]
    pub seed_label: String,
}

fn default_cadence() -> u64 {
    50
}

impl ScenarioConfig {
    /// Antikink at `−z0/2` with velocity `v`, kink at `+z0/2` with `−v`, on a
    /// symmetric grid with `extra` units beyond the standard tail margin.
    pub fn symmetric_pair(z0: f64, v: f64, dx: f64, dt: f64, t_end: f64, extra: f64, label: &str) -> Result<Self> {
        let grid = Grid::symmetric(0.0, z0 / 2.0 + TAIL_MARGIN + extra, dx)?;
        Ok(Self {
            grid,
            kinks: KinkData { x1: -z0 / 2.0, x2: z0 / 2.0, v1: v, v2: 0.0 - v, contraction: Contraction::Lorentz },
            perturbation: PerturbationSpec::None,
            solver: SolverConfig { dt, ..SolverConfig::default() },
            t_end,
            frame_cadence: default_cadence(),
            outputs: None,
            seed_label: label.to_string(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let k = &self.kinks;
        if !(k.x1 < k.x2) {
            return Err(Error::KinksOutOfOrder { x1: k.x1, x2: k.x2 });
        }
        for v in [k.v1, k.v2] {
            if !(v.abs() < 1.0) {
                return Err(Error::SpeedOutOfRange { v });
            }
        }
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidConfig(format!("t_end {} must be positive", self.t_end)));
        }
        if self.frame_cadence == 0 {
            return Err(Error::InvalidConfig("frame_cadence must be at least 1".into()));
        }
        Grid::new(self.grid.x0, self.grid.dx, self.grid.n)?;
        let (need_lo, need_hi) = (k.x1 - TAIL_MARGIN, k.x2 + TAIL_MARGIN);
        if !self.grid.covers(need_lo, need_hi) {
            return Err(Error::GridTooSmall { lo: self.grid.x0, hi: self.grid.x_max(), need_lo, need_hi });
        }
        if let PerturbationSpec::Gaussian { width, amplitude, center, .. } = self.perturbation {
            if !(width > 0.0) || !amplitude.is_finite() || !center.is_finite() {
                return Err(Error::InvalidConfig("gaussian perturbation needs finite amplitude/center and width > 0".into()));
            }
        }
        self.solver.validate(self.grid.dx)
    }

    /// Re-grids to spacing `dx` over the same extent. Without an explicit
    /// `dt` the time step is scaled to keep the CFL number.
    pub fn with_resolution(&self, dx: Option<f64>, dt: Option<f64>) -> Result<Self> {
        let mut out = self.clone();
        if let Some(dx) = dx {
            let lo = self.grid.x0;
            let hi = self.grid.x_max();
            out.grid = Grid::covering(lo, hi, dx)?;
            if dt.is_none() {
                out.solver.dt = self.solver.dt * dx / self.grid.dx;
                out.frame_cadence =
                    ((self.frame_cadence as f64 * self.solver.dt / out.solver.dt).round() as u64).max(1);
            }
        }
        if let Some(dt) = dt {
            out.solver.dt = dt;
        }
        Ok(out)
    }

    fn perturbation_samples(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self.perturbation {
            PerturbationSpec::None => None,
            PerturbationSpec::Gaussian { amplitude, width, center, channel } => {
                let bump = self.grid.sample(|x| amplitude * (-((x - center) / width).powi(2)).exp());
                let zero = vec![0.0; self.grid.n];
                Some(match channel {
                    Channel::G0 => (bump, zero),
                    Channel::G1 => (zero, bump),
                })
            }
        }
    }

    pub fn initial_state(&self) -> Result<FieldState> {
        let pert = self.perturbation_samples();
        let k = &self.kinks;
        init_two_kink_state(
            &self.grid,
            k.x1,
            k.x2,
            k.v1,
            k.v2,
            pert.as_ref().map(|(a, b)| Perturbation { phi: a, pi: b }),
            k.contraction,
        )
    }
}

/// The shipped scenario suite at resolution `(dx, dt)`.
pub fn default_suite(dx: f64, dt: f64) -> Result<Vec<ScenarioConfig>> {
    let mut suite = Vec::new();
    for z0 in [12.0, 16.0] {
        suite.push(ScenarioConfig::symmetric_pair(z0, 0.0, dx, dt, 100.0, 0.0, &format!("static_z{z0}"))?);
    }
    for v in [0.03, 0.05, 0.08] {
        suite.push(ScenarioConfig::symmetric_pair(16.0, v, dx, dt, 2.0 / v, 0.0, &format!("head_on_v{v}"))?);
    }
    for amplitude in [1e-4, 1e-3] {
        let mut cfg =
            ScenarioConfig::symmetric_pair(12.0, 0.0, dx, dt, 100.0, 0.0, &format!("perturbed_a{amplitude:e}"))?;
        cfg.perturbation = PerturbationSpec::Gaussian { amplitude, width: 1.0, center: 0.0, channel: Channel::G0 };
        suite.push(cfg);
    }
    Ok(suite)
}

// ------------------------------------------------------------------ report

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub z: f64,
    pub d1: f64,
    pub d2: f64,
    pub d: f64,
    pub z_minus_d: f64,
    pub xdot1: f64,
    pub xdot2: f64,
    pub d1dot: f64,
    pub d2dot: f64,
    pub norm_g_h1: f64,
    pub norm_gt_l2: f64,
    pub eps_t: f64,
    pub f_t: f64,
    pub p1: f64,
    pub p2: f64,
    /// `max_j |⟨g, ∂ₓH_j⟩|` relative to the frame's orthogonality tolerance.
    pub ortho_margin: f64,
    pub valid: bool,
}

impl ReportRow {
    /// `‖g‖_{H¹} + ‖∂ₜg‖_{L²}`.
    pub fn remainder(&self) -> f64 {
        self.norm_g_h1 + self.norm_gt_l2
    }

    /// `(e^{−√2z} + ‖ĝ‖² + ẋ₁² + ẋ₂²) / ε`.
    pub fn t2_ratio(&self, epsilon: f64) -> f64 {
        let r = self.remainder();
        ((-SQRT_2 * self.z).exp() + r * r + self.xdot1 * self.xdot1 + self.xdot2 * self.xdot2) / epsilon
    }

    fn csv_fields(&self) -> [f64; 14] {
        [
            self.t,
            self.x1,
            self.x2,
            self.z,
            self.d1,
            self.d2,
            self.d,
            self.z_minus_d,
            self.xdot1,
            self.xdot2,
            self.norm_g_h1,
            self.norm_gt_l2,
            self.eps_t,
            self.f_t,
        ]
    }

    fn from_csv_fields(f: &[f64; 14]) -> Self {
        let nan = f64::NAN;
        Self {
            t: f[0],
            x1: f[1],
            x2: f[2],
            z: f[3],
            d1: f[4],
            d2: f[5],
            d: f[6],
            z_minus_d: f[7],
            xdot1: f[8],
            xdot2: f[9],
            d1dot: nan,
            d2dot: nan,
            norm_g_h1: f[10],
            norm_gt_l2: f[11],
            eps_t: f[12],
            f_t: f[13],
            p1: nan,
            p2: nan,
            ortho_margin: nan,
            valid: f[10].is_finite() && f[11].is_finite() && f[3].is_finite(),
        }
    }
}

mod nullable_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Scalar summary of one scenario; non-finite values serialise as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(default)]
    pub label: String,
    #[serde(with = "nullable_f64")]
    pub epsilon: f64,
    #[serde(with = "nullable_f64")]
    pub v: f64,
    #[serde(with = "nullable_f64")]
    pub c: f64,
    #[serde(with = "nullable_f64")]
    pub a: f64,
    #[serde(with = "nullable_f64")]
    pub b: f64,
    #[serde(with = "nullable_f64")]
    pub max_abs_z_minus_d: f64,
    #[serde(with = "nullable_f64")]
    pub max_remainder: f64,
    #[serde(rename = "fitted_C_growth", with = "nullable_f64")]
    pub fitted_c_growth: f64,
    #[serde(default, rename = "fitted_C_tracking", with = "nullable_f64")]
    pub fitted_c_tracking: f64,
    #[serde(default, rename = "fitted_C_orbital", with = "nullable_f64")]
    pub fitted_c_orbital: f64,
    #[serde(default, with = "nullable_f64")]
    pub t2_ratio_min: f64,
    #[serde(default, with = "nullable_f64")]
    pub t2_ratio_max: f64,
    #[serde(default, with = "nullable_f64")]
    pub energy_drift: f64,
    #[serde(default, with = "nullable_f64")]
    pub coercivity_lower: f64,
    #[serde(default, with = "nullable_f64")]
    pub fdot_constant: f64,
    /// `A₁` of the Lyapunov lower bound at `A₂ =` [`LYAPUNOV_A2`].
    #[serde(default, rename = "lyapunov_A1", with = "nullable_f64")]
    pub lyapunov_a1: f64,
    #[serde(default)]
    pub frames: usize,
    #[serde(default)]
    pub valid_frames: usize,
    #[serde(default)]
    pub ortho_all_satisfied: bool,
    #[serde(default)]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

impl ComparisonReport {
    pub fn valid_rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.valid)
    }

    pub fn params(&self) -> EffectiveParams {
        EffectiveParams { v: self.summary.v, c: self.summary.c, a: self.summary.a, b: self.summary.b }
    }
}

fn max_finite(it: impl Iterator<Item = f64>) -> f64 {
    it.filter(|v| v.is_finite()).fold(f64::NAN, f64::max)
}

fn min_finite(it: impl Iterator<Item = f64>) -> f64 {
    it.filter(|v| v.is_finite()).fold(f64::NAN, f64::min)
}

/// Smallest `C` with `|z − d| ≤ C·min(√ε·t, ε·t²)` on every valid frame with `t > 0`.
pub fn fit_tracking_constant(rows: &[ReportRow], epsilon: f64) -> f64 {
    max_finite(rows.iter().filter(|r| r.valid && r.t > 0.0).map(|r| {
        let bound = (epsilon.sqrt() * r.t).min(epsilon * r.t * r.t);
        r.z_minus_d.abs() / bound
    }))
}

fn build_row(
    frame: &ModulationFrame,
    state: &FieldState,
    params: &EffectiveParams,
    epsilon0: f64,
) -> Result<ReportRow> {
    let eps_t = energy_breakdown(state)?.epsilon;
    let t = frame.t;
    let (d1, d2) = centers_d1_d2(t, params);
    let (d1dot, d2dot) = center_rates(t, params);
    let d = separation_d(t, params);
    if !frame.valid {
        let nan = f64::NAN;
        return Ok(ReportRow {
            t,
            x1: frame.x1,
            x2: frame.x2,
            z: frame.z,
            d1,
            d2,
            d,
            z_minus_d: frame.z - d,
            xdot1: nan,
            xdot2: nan,
            d1dot,
            d2dot,
            norm_g_h1: nan,
            norm_gt_l2: nan,
            eps_t,
            f_t: nan,
            p1: nan,
            p2: nan,
            ortho_margin: nan,
            valid: false,
        });
    }
    let (p1, p2) = match modulation_velocities(frame, &state.pi, epsilon0) {
        Ok(m) => (m.p1, m.p2),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let tol = frame.ortho_tolerance();
    Ok(ReportRow {
        t,
        x1: frame.x1,
        x2: frame.x2,
        z: frame.z,
        d1,
        d2,
        d,
        z_minus_d: frame.z - d,
        xdot1: frame.xdot1,
        xdot2: frame.xdot2,
        d1dot,
        d2dot,
        norm_g_h1: frame.norms.h1_norm_g,
        norm_gt_l2: frame.norms.l2_norm_gt,
        eps_t,
        f_t: lyapunov_f(frame, frame.xdot1, frame.xdot2)?,
        p1,
        p2,
        ortho_margin: frame.ortho_residuals.0.abs().max(frame.ortho_residuals.1.abs()) / tol,
        valid: true,
    })
}

/// Runs one scenario end to end and writes the report when `outputs` is set.
/// Failures after the first frame end the run early and are recorded in
/// `summary.failure`; the partial report is still returned and written.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ComparisonReport> {
    config.validate()?;
    let mut state = config.initial_state()?;
    let e0 = energy_breakdown(&state)?;
    let epsilon = e0.epsilon;
    let mut tracker = Tracker::new();
    let frame0 = tracker.push(&state)?;
    let params = params_from_initial(frame0.x1, frame0.x2, frame0.xdot1, frame0.xdot2)?;
    let mut rows = vec![build_row(&frame0, &state, &params, epsilon)?];
    let mut coercivity_lower = f64::NAN;
    if let Ok(r) = crate::functionals::coercivity_ratio(&frame0) {
        coercivity_lower = r;
    }
    let mut energy_drift: f64 = 0.0;
    let mut failure = None;

    let total = step_count(state.t, config.t_end, config.solver.dt);
    let mut integ = Integrator::new(&state, config.solver)?;
    for k in 1..=total {
        if let Err(e) = integ.advance(&mut state) {
            failure = Some(format!("frame {} (step {k}): {e}", rows.len()));
            break;
        }
        if k % config.frame_cadence == 0 || k == total {
            let outcome = tracker.push(&state).and_then(|frame| {
                if frame.valid {
                    if let Ok(r) = crate::functionals::coercivity_ratio(&frame) {
                        coercivity_lower = min_finite([coercivity_lower, r].into_iter());
                    }
                }
                build_row(&frame, &state, &params, epsilon)
            });
            match outcome {
                Ok(row) => {
                    energy_drift = energy_drift.max(((row.eps_t - epsilon) / e0.e_total).abs());
                    rows.push(row);
                }
                Err(e) => {
                    failure = Some(format!("frame {} (step {k}): {e}", rows.len()));
                    break;
                }
            }
        }
    }
    let summary = summarize(&config.seed_label, &rows, epsilon, &params, energy_drift, coercivity_lower, failure);
    let report = ComparisonReport { rows, summary };
    if let Some(dir) = &config.outputs {
        write_report(&report, dir)?;
    }
    Ok(report)
}

fn summarize(
    label: &str,
    rows: &[ReportRow],
    epsilon: f64,
    params: &EffectiveParams,
    energy_drift: f64,
    coercivity_lower: f64,
    failure: Option<String>,
) -> Summary {
    let valid: Vec<&ReportRow> = rows.iter().filter(|r| r.valid).collect();
    let growth = fit_growth_constant(rows, epsilon).unwrap_or(f64::NAN);
    Summary {
        label: label.to_string(),
        epsilon,
        v: params.v,
        c: params.c,
        a: params.a,
        b: params.b,
        max_abs_z_minus_d: max_finite(valid.iter().map(|r| r.z_minus_d.abs())),
        max_remainder: max_finite(valid.iter().map(|r| r.remainder())),
        fitted_c_growth: growth,
        fitted_c_tracking: fit_tracking_constant(rows, epsilon),
        fitted_c_orbital: max_finite(valid.iter().map(|r| r.norm_g_h1 / epsilon.sqrt())),
        t2_ratio_min: min_finite(valid.iter().map(|r| r.t2_ratio(epsilon))),
        t2_ratio_max: max_finite(valid.iter().map(|r| r.t2_ratio(epsilon))),
        energy_drift,
        coercivity_lower,
        fdot_constant: fit_fdot_constant(rows, epsilon),
        lyapunov_a1: fit_lyapunov_offset(rows, epsilon, LYAPUNOV_A2),
        frames: rows.len(),
        valid_frames: valid.len(),
        ortho_all_satisfied: valid.iter().all(|r| r.ortho_margin <= 1.0),
        failure,
    }
}

/// Smallest `K` with `|ΔF/Δt| ≤ K·(ε^{3/2}‖ĝ‖ + ε^{1/2}‖ĝ‖²/ln(1/ε))` between
/// consecutive valid frames.
pub fn fit_fdot_constant(rows: &[ReportRow], epsilon: f64) -> f64 {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return f64::NAN;
    }
    let l = (1.0 / epsilon).ln();
    max_finite(rows.windows(2).filter(|w| w[0].valid && w[1].valid).map(|w| {
        let rate = ((w[1].f_t - w[0].f_t) / (w[1].t - w[0].t)).abs();
        let g = 0.5 * (w[0].remainder() + w[1].remainder());
        let scale = epsilon.powf(1.5) * g + epsilon.sqrt() * g * g / l;
        rate / scale
    }))
}

/// Weight `A₂` used when fitting the Lyapunov lower bound.
pub const LYAPUNOV_A2: f64 = 0.25;

/// Smallest `A₁ ≥ 0` with `F + A₁ε² ≥ a2·‖ĝ‖²` on every valid frame.
pub fn fit_lyapunov_offset(rows: &[ReportRow], epsilon: f64, a2: f64) -> f64 {
    let worst = max_finite(rows.iter().filter(|r| r.valid).map(|r| {
        let g = r.remainder();
        (a2 * g * g - r.f_t) / (epsilon * epsilon)
    }));
    if worst.is_nan() {
        worst
    } else {
        worst.max(0.0)
    }
}

// ---------------------------------------------------------------- verdicts

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub measured: BTreeMap<String, f64>,
    pub message: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        let mut s = format!("{} {}", if self.pass { "PASS" } else { "FAIL" }, self.name);
        for (k, v) in &self.measured {
            let _ = write!(s, " {k}={v:.4e}");
        }
        if !self.message.is_empty() {
            let _ = write!(s, " ({})", self.message);
        }
        s
    }
}

/// `‖g‖_{H¹} ≤ C√ε`, `e^{−√2z} ≤ ε/2` on all frames, and the energy-excess
/// ratio within `[1/k, k]`.
pub fn verify_orbital_stability(report: &ComparisonReport) -> Verdict {
    verify_orbital_stability_with(report, ORBITAL_C_MAX, T2_RATIO_K)
}

pub fn verify_orbital_stability_with(report: &ComparisonReport, c_max: f64, k: f64) -> Verdict {
    let eps = report.summary.epsilon;
    let valid: Vec<&ReportRow> = report.valid_rows().collect();
    let c = max_finite(valid.iter().map(|r| r.norm_g_h1 / eps.sqrt()));
    let sep = max_finite(valid.iter().map(|r| (-SQRT_2 * r.z).exp())) / (eps / 2.0);
    let lo = min_finite(valid.iter().map(|r| r.t2_ratio(eps)));
    let hi = max_finite(valid.iter().map(|r| r.t2_ratio(eps)));
    let mut measured = BTreeMap::new();
    measured.insert("C_orbital".into(), c);
    measured.insert("separation_ratio".into(), sep);
    measured.insert("t2_ratio_min".into(), lo);
    measured.insert("t2_ratio_max".into(), hi);
    let ok_c = c <= c_max;
    let ok_sep = sep <= 1.0;
    let ok_ratio = lo >= 1.0 / k && hi <= k;
    let mut msg = Vec::new();
    if valid.is_empty() {
        msg.push("no valid frames".to_string());
    }
    if !ok_c {
        msg.push(format!("C_orbital > {c_max}"));
    }
    if !ok_sep {
        msg.push("separation bound violated".into());
    }
    if !ok_ratio {
        msg.push(format!("energy-excess ratio outside [1/{k}, {k}]"));
    }
    Verdict {
        name: format!("orbital_stability[{}]", report.summary.label),
        pass: !valid.is_empty() && ok_c && ok_sep && ok_ratio,
        measured,
        message: msg.join("; "),
    }
}

/// Smallest `C` with `‖ĝ(t)‖² ≤ C(‖ĝ(0)‖² + ε²)·exp(C√ε|t|/ln(1/ε))` on all valid frames.
pub fn fit_growth_constant(rows: &[ReportRow], epsilon: f64) -> Result<f64> {
    let valid: Vec<&ReportRow> = rows.iter().filter(|r| r.valid).collect();
    if valid.len() < 20 {
        return Err(Error::Degenerate(format!("need at least 20 valid frames, got {}", valid.len())));
    }
    if !(epsilon > 0.0) || (1.0 / epsilon).ln() <= 1.0 {
        return Err(Error::Degenerate(format!("ln(1/eps) must exceed 1, eps = {epsilon}")));
    }
    let t0 = valid[0].t;
    let g0 = valid[0].remainder();
    let base = g0 * g0 + epsilon * epsilon;
    let rate = epsilon.sqrt() / (1.0 / epsilon).ln();
    let holds = |c: f64| {
        valid.iter().all(|r| {
            let g = r.remainder();
            g * g <= c * base * (c * rate * (r.t - t0).abs()).exp()
        })
    };
    let mut hi = 1.0;
    while !holds(hi) {
        hi *= 2.0;
        if hi > 1e15 {
            return Err(Error::Degenerate("growth envelope cannot be fitted".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub fn verify_remainder_growth(report: &ComparisonReport) -> Result<Verdict> {
    let eps = report.summary.epsilon;
    let c = fit_growth_constant(&report.rows, eps)?;
    let last = report.valid_rows().last().copied();
    let first = report.valid_rows().next().copied();
    let final_ok = match (first, last) {
        (Some(f), Some(l)) => {
            let base = f.remainder().powi(2) + eps * eps;
            let rate = eps.sqrt() / (1.0 / eps).ln();
            l.remainder().powi(2) <= c * base * (c * rate * (l.t - f.t).abs()).exp() * (1.0 + 1e-12)
        }
        _ => false,
    };
    let mut measured = BTreeMap::new();
    measured.insert("C_growth".into(), c);
    Ok(Verdict {
        name: format!("remainder_growth[{}]", report.summary.label),
        pass: c.is_finite() && final_ok,
        measured,
        message: String::new(),
    })
}

// ---------------------------------------------------------- optimality probe

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub dx: f64,
    pub dt: f64,
    /// Hit threshold as a multiple of ε.
    pub kappa: f64,
    /// Steps between frames.
    pub cadence: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { dx: 0.05, dt: 0.02, kappa: 0.1, cadence: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeEntry {
    pub eps_target: f64,
    pub z0: f64,
    pub epsilon: f64,
    pub t_max: f64,
    pub t_hit: Option<f64>,
    /// `t_hit / (ln(1/ε)/√ε)`.
    pub hit_ratio: Option<f64>,
    pub fitted_c_growth: Option<f64>,
    pub max_remainder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub options: ProbeOptions,
    pub entries: Vec<ProbeEntry>,
    /// Largest ratio between `hit_ratio` values of entries whose ε differ by at least 4×.
    pub scaling_spread: Option<f64>,
}

impl ProbeReport {
    pub fn all_hit(&self) -> bool {
        self.entries.iter().all(|e| e.t_hit.is_some())
    }
}

/// Separation whose resting pair carries energy excess ≈ `eps`.
pub fn separation_for_excess(eps: f64) -> f64 {
    (2.0 * SQRT_2 / eps).ln() / SQRT_2
}

/// Time scale `ln(1/ε)/√ε`.
pub fn optimality_time_scale(eps: f64) -> f64 {
    (1.0 / eps).ln() / eps.sqrt()
}

pub fn probe_single(eps_target: f64, opts: &ProbeOptions) -> Result<(ProbeEntry, ComparisonReport)> {
    if !(eps_target > 0.0 && eps_target < (-1.0f64).exp()) {
        return Err(Error::InvalidEpsilon { eps: eps_target });
    }
    let z0 = separation_for_excess(eps_target);
    let mut cfg = ScenarioConfig::symmetric_pair(z0, 0.0, opts.dx, opts.dt, 1.0, 0.0, &format!("probe_eps{eps_target:e}"))?;
    let epsilon = energy_breakdown(&cfg.initial_state()?)?.epsilon;
    if !(epsilon > 0.0 && epsilon < (-1.0f64).exp()) {
        return Err(Error::InvalidEpsilon { eps: epsilon });
    }
    let t_max = 3.0 * optimality_time_scale(epsilon);
    // The pair repels at speed approaching 2v; widen the grid to keep the margins.
    let drift = (8.0 * (-SQRT_2 * z0).exp()).sqrt() * t_max;
    cfg = ScenarioConfig::symmetric_pair(z0, 0.0, opts.dx, opts.dt, t_max, drift, &cfg.seed_label)?;
    cfg.frame_cadence = opts.cadence.max(1);
    let report = run_scenario(&cfg)?;
    let threshold = opts.kappa * epsilon;
    let t_hit = first_crossing(&report.rows, threshold);
    let entry = ProbeEntry {
        eps_target,
        z0,
        epsilon,
        t_max,
        t_hit,
        hit_ratio: t_hit.map(|t| t / optimality_time_scale(epsilon)),
        fitted_c_growth: fit_growth_constant(&report.rows, epsilon).ok(),
        max_remainder: report.summary.max_remainder,
    };
    Ok((entry, report))
}

/// First time `‖ĝ‖` reaches `threshold`, linearly interpolated between frames.
pub fn first_crossing(rows: &[ReportRow], threshold: f64) -> Option<f64> {
    let mut prev: Option<&ReportRow> = None;
    for r in rows.iter().filter(|r| r.valid) {
        let g = r.remainder();
        if g >= threshold {
            return Some(match prev {
                Some(p) if g > p.remainder() => {
                    let s = (threshold - p.remainder()) / (g - p.remainder());
                    p.t + s * (r.t - p.t)
                }
                _ => r.t,
            });
        }
        prev = Some(r);
    }
    None
}

pub fn optimality_probe(eps_list: &[f64], opts: &ProbeOptions) -> Result<ProbeReport> {
    let mut entries = Vec::with_capacity(eps_list.len());
    for &e in eps_list {
        entries.push(probe_single(e, opts)?.0);
    }
    let mut spread: Option<f64> = None;
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            let r = a.eps_target.max(b.eps_target) / a.eps_target.min(b.eps_target);
            if let (true, Some(ha), Some(hb)) = (r >= 4.0 - 1e-9, a.hit_ratio, b.hit_ratio) {
                if ha > 0.0 && hb > 0.0 {
                    let s = ha.max(hb) / ha.min(hb);
                    spread = Some(spread.map_or(s, |p: f64| p.max(s)));
                }
            }
        }
    }
    Ok(ProbeReport { options: *opts, entries, scaling_spread: spread })
}

// ---------------------------------------------------------------- file I/O

pub fn csv_string(rows: &[ReportRow]) -> String {
    let mut s = String::with_capacity(64 + rows.len() * 200);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let fields = r.csv_fields();
        for (i, v) in fields.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:?}");
        }
        s.push('\n');
    }
    s
}

pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut f = [0.0; 14];
        let mut count = 0;
        for (i, tok) in line.split(',').enumerate() {
            if i >= 14 {
                return Err(Error::Parse(format!("line {}: too many fields", ln + 2)));
            }
            f[i] = tok.trim().parse().map_err(|e| Error::Parse(format!("line {}: {e}", ln + 2)))?;
            count += 1;
        }
        if count != 14 {
            return Err(Error::Parse(format!("line {}: expected 14 fields, got {count}", ln + 2)));
        }
        rows.push(ReportRow::from_csv_fields(&f));
    }
    Ok(rows)
}

/// Writes the trajectory CSV to `path`.
pub fn emit_csv(report: &ComparisonReport, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(&report.rows))?;
    Ok(())
}

pub fn emit_summary(report: &ComparisonReport, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&report.summary)?)?;
    Ok(())
}

/// Writes `trajectory.csv` and `summary.json` into `dir`.
pub fn write_report(report: &ComparisonReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    emit_csv(report, &dir.join(TRAJECTORY_FILE))?;
    emit_summary(report, &dir.join(SUMMARY_FILE))
}

pub fn read_report(dir: &Path) -> Result<ComparisonReport> {
    let rows = parse_csv(&std::fs::read_to_string(dir.join(TRAJECTORY_FILE))?)?;
    let summary: Summary = serde_json::from_str(&std::fs::read_to_string(dir.join(SUMMARY_FILE))?)?;
    Ok(ComparisonReport { rows, summary })
}
