//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use phi6_kinks::effective_ode::{
    conserved_quantity, integrate_reduced, params_from_initial, separation_d, separation_force,
    separation_rate,
};
use phi6_kinks::experiments::{
    default_suite, optimality_probe, run_scenario, ComparisonReport, ProbeOptions,
};
use phi6_kinks::functionals::{
    energy_breakdown, integrate, interaction_energy, reference_energy, TAIL_MARGIN,
};
use phi6_kinks::grid::Grid;
use phi6_kinks::modulation::decompose;
use phi6_kinks::pde::{evolve_steps, init_two_kink_state, run, FieldState, SolverConfig, StencilOrder};
use phi6_kinks::potential_kinks::{antikink_value, kink_slope, kink_value, Contraction};
use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: u32, name: &str, budget: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = out.pass && in_time;
    let timing = format!("{:.2}s of {:.0}s", elapsed.as_secs_f64(), budget.as_secs_f64());
    println!(
        "{} criterion {id} {name}: {} [{timing}{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        if in_time { "" } else { ", over budget" }
    );
    pass
}

fn closed_form_identities() -> Outcome {
    let grid = Grid::symmetric(0.0, 40.0, 0.01).unwrap();
    let slope_sq = integrate(&grid.sample(|x| kink_slope(x).powi(2)), grid.dx).unwrap();
    let overlap = integrate(
        &grid.sample(|x| {
            let h = kink_value(x);
            (8.0 * h.powi(3) - 6.0 * h.powi(5)) * (-SQRT_2 * x).exp()
        }),
        grid.dx,
    )
    .unwrap();
    let e1 = (slope_sq - 1.0 / (2.0 * SQRT_2)).abs();
    let e2 = (overlap - 2.0 * SQRT_2).abs();
    Outcome { pass: e1 <= 1e-8 && e2 <= 1e-8, detail: format!("|slope_norm_err|={e1:.2e} |overlap_err|={e2:.2e}") }
}

fn interaction_asymptotics() -> Outcome {
    let e_ref = reference_energy();
    let mut pass = true;
    let mut parts = Vec::new();
    for z in [6.0f64, 8.0, 10.0, 12.0] {
        let a = interaction_energy(z).unwrap();
        let dev = (a - 2.0 * e_ref - 2.0 * SQRT_2 * (-SQRT_2 * z).exp()).abs();
        let bound = 5.0 * z * (-2.0 * SQRT_2 * z).exp() + 1e-10;
        let k = dev / (z * (-2.0 * SQRT_2 * z).exp());
        pass &= dev <= bound;
        parts.push(format!("z={z}: dev={dev:.3e} bound={bound:.3e} K={k:.2}"));
    }
    let ratio = (interaction_energy(10.0).unwrap() - 2.0 * e_ref) / (2.0 * SQRT_2 * (-SQRT_2 * 10.0).exp());
    pass &= (0.99..=1.01).contains(&ratio);
    parts.push(format!("ratio(10)={ratio:.6}"));
    Outcome { pass, detail: parts.join("; ") }
}

fn static_kink_error(dx: f64, dt: f64, t_end: f64) -> f64 {
    let grid = Grid::symmetric(0.0, 40.0, dx).unwrap();
    let mut s = FieldState { x0: grid.x0, dx, phi: grid.sample(kink_value), pi: vec![0.0; grid.n], t: 0.0 };
    let cfg = SolverConfig { dt, stencil_order: StencilOrder::Second, ..SolverConfig::default() };
    evolve_steps(&mut s, &cfg, (t_end / dt).round() as u64).unwrap();
    (0..grid.n).map(|i| (s.phi[i] - kink_value(grid.x(i))).abs()).fold(0.0, f64::max)
}

fn solver_integrity() -> Outcome {
    let coarse = static_kink_error(0.05, 0.02, 200.0);
    let fine = static_kink_error(0.025, 0.01, 200.0);
    let ratio = coarse / fine;

    let cfg = SolverConfig { stencil_order: StencilOrder::Second, ..SolverConfig::default() };
    let grid = Grid::covering(-8.0 - TAIL_MARGIN - 10.0, 8.0 + TAIL_MARGIN + 10.0, 0.05).unwrap();
    let s0 = init_two_kink_state(&grid, -8.0, 8.0, 0.05, -0.05, None, Contraction::Lorentz).unwrap();
    let snaps = run(&s0, &cfg, 200.0, 50).unwrap();
    let e0 = energy_breakdown(&snaps[0]).unwrap().e_total;
    let drift = snaps
        .iter()
        .map(|s| ((energy_breakdown(s).unwrap().e_total - e0) / e0).abs())
        .fold(0.0, f64::max);

    let mut s = s0.clone();
    evolve_steps(&mut s, &cfg, 1000).unwrap();
    s.pi.iter_mut().for_each(|p| *p = -*p);
    evolve_steps(&mut s, &cfg, 1000).unwrap();
    s.pi.iter_mut().for_each(|p| *p = -*p);
    let reversal = s0
        .phi
        .iter()
        .zip(&s.phi)
        .chain(s0.pi.iter().zip(&s.pi))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let pass = coarse <= 1e-4 && drift <= 1e-5 && reversal <= 1e-10 && (3.5..=4.5).contains(&ratio);
    Outcome {
        pass,
        detail: format!(
            "sup_err={coarse:.3e} energy_drift={drift:.3e} reversal={reversal:.3e} convergence_ratio={ratio:.3}"
        ),
    }
}

fn modulation_correctness(suite: &[ComparisonReport]) -> Outcome {
    let grid = Grid::covering(-50.0, 50.0, 0.05).unwrap();
    let planted = |bump: f64| {
        let phi = grid.sample(|x| antikink_value(x + 5.1) + kink_value(x - 5.3) + bump * (-(x - 5.3).powi(2)).exp());
        FieldState { x0: grid.x0, dx: grid.dx, phi, pi: vec![0.0; grid.n], t: 0.0 }
    };
    let exact = decompose(&planted(0.0), (-5.0, 5.0)).unwrap();
    let err = (exact.x1 + 5.1).abs().max((exact.x2 - 5.3).abs());
    let bumped = decompose(&planted(0.01), (-5.0, 5.0)).unwrap();
    let shift = (bumped.x1 + 5.1).abs().max((bumped.x2 - 5.3).abs());
    let frames: usize = suite.iter().map(|r| r.summary.valid_frames).sum();
    let total: usize = suite.iter().map(|r| r.summary.frames).sum();
    let ortho = suite.iter().all(|r| r.summary.ortho_all_satisfied);
    let worst = suite
        .iter()
        .flat_map(|r| r.valid_rows().map(|row| row.ortho_margin))
        .fold(0.0, f64::max);
    Outcome {
        pass: err <= 1e-10 && shift <= 0.1 && ortho && bumped.ortho_satisfied(),
        detail: format!(
            "planted_err={err:.2e} bump_shift={shift:.3e} ortho_ok={ortho} worst_margin={worst:.2e} valid_frames={frames}/{total}"
        ),
    }
}

fn reduced_dynamics() -> Outcome {
    let (z0, zd0) = (10.0, -0.1);
    let p = params_from_initial(-z0 / 2.0, z0 / 2.0, -zd0 / 2.0, zd0 / 2.0).unwrap();
    let samples = integrate_reduced(z0, zd0, 100.0, 0.01).unwrap();
    let rk_err = samples.iter().map(|s| (s.z - separation_d(s.t, &p)).abs()).fold(0.0, f64::max);
    let q0 = conserved_quantity(z0, zd0);
    let drift_rate = samples
        .iter()
        .filter(|s| s.t > 0.0)
        .map(|s| (conserved_quantity(s.z, s.zdot) - q0).abs() / s.t)
        .fold(0.0, f64::max);
    let h = 0.25;
    let d = |t: f64| separation_d(t, &p);
    let accel_err = [0.0, 5.0, 50.0]
        .iter()
        .map(|&t| {
            let fd = (-d(t + 2.0 * h) + 16.0 * d(t + h) - 30.0 * d(t) + 16.0 * d(t - h) - d(t - 2.0 * h)) / (12.0 * h * h);
            let law = separation_force(d(t));
            ((fd - law) / law).abs()
        })
        .fold(0.0, f64::max);
    let trip = (separation_d(0.0, &p) - z0).abs().max((separation_rate(0.0, &p) - zd0).abs());
    Outcome {
        pass: rk_err <= 1e-8 && drift_rate <= 1e-10 && accel_err <= 1e-6 && trip <= 1e-12,
        detail: format!(
            "rk4_vs_closed={rk_err:.2e} conserved_drift_per_time={drift_rate:.2e} accel_rel_err={accel_err:.2e} round_trip={trip:.2e}"
        ),
    }
}

fn tracking(suite: &[ComparisonReport]) -> Outcome {
    let head_on: Vec<&ComparisonReport> = suite.iter().filter(|r| r.summary.label.starts_with("head_on")).collect();
    let c = head_on.iter().map(|r| r.summary.fitted_c_tracking).fold(0.0, f64::max);
    let parts: Vec<String> = head_on
        .iter()
        .map(|r| format!("{}: eps={:.3e} C={:.3e}", r.summary.label, r.summary.epsilon, r.summary.fitted_c_tracking))
        .collect();
    Outcome {
        pass: head_on.len() == 3 && c.is_finite() && c <= 20.0,
        detail: format!("C_max={c:.3e}; {}", parts.join("; ")),
    }
}

fn envelopes(suite: &[ComparisonReport]) -> Outcome {
    let c = suite.iter().map(|r| r.summary.fitted_c_orbital).fold(0.0, f64::max);
    let lo = suite.iter().map(|r| r.summary.t2_ratio_min).fold(f64::INFINITY, f64::min);
    let hi = suite.iter().map(|r| r.summary.t2_ratio_max).fold(0.0, f64::max);
    let complete = suite.iter().all(|r| r.summary.failure.is_none() && r.summary.valid_frames == r.summary.frames);
    Outcome {
        pass: complete && c <= 10.0 && lo >= 0.1 && hi <= 10.0,
        detail: format!("C_orbital={c:.3} t2_ratio=[{lo:.3}, {hi:.3}] all_frames_valid={complete}"),
    }
}

fn optimality() -> Outcome {
    let eps = [1e-2, 2.5e-3];
    let coarse = optimality_probe(&eps, &ProbeOptions::default()).unwrap();
    let fine = optimality_probe(&eps, &ProbeOptions { dx: 0.025, dt: 0.01, cadence: 20, ..ProbeOptions::default() }).unwrap();
    let first = &coarse.entries[0];
    let hit_ok = first.t_hit.is_some_and(|t| t <= first.t_max);
    let mut stable = true;
    let mut parts = vec![format!(
        "eps={:.3e} t_hit={} t_max={:.1}",
        first.epsilon,
        first.t_hit.map_or("none".into(), |t| format!("{t:.3}")),
        first.t_max
    )];
    for (a, b) in coarse.entries.iter().zip(&fine.entries) {
        match (a.fitted_c_growth, b.fitted_c_growth) {
            (Some(ca), Some(cb)) => {
                let r = ca.max(cb) / ca.min(cb);
                stable &= r <= 2.0;
                parts.push(format!("eps_target={:e}: C_growth {ca:.3} vs {cb:.3}", a.eps_target));
            }
            _ => {
                stable = false;
                parts.push(format!("eps_target={:e}: growth fit failed", a.eps_target));
            }
        }
    }
    Outcome { pass: hit_ok && stable, detail: parts.join("; ") }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut all = true;
    all &= check(1, "closed-form identities", secs(1), closed_form_identities);
    all &= check(2, "interaction-energy asymptotics", secs(5), interaction_asymptotics);
    all &= check(3, "solver integrity", secs(120), solver_integrity);

    let suite_start = Instant::now();
    let suite: Vec<ComparisonReport> =
        default_suite(0.05, 0.02).unwrap().iter().map(|cfg| run_scenario(cfg).unwrap()).collect();
    let suite_time = suite_start.elapsed();
    println!("default suite ran in {:.2}s", suite_time.as_secs_f64());

    all &= check(4, "modulation correctness", secs(60), || modulation_correctness(&suite));
    all &= check(5, "reduced dynamics", secs(5), reduced_dynamics);
    all &= check(6, "tracking of reduced trajectories", secs(600).saturating_sub(suite_time), || tracking(&suite));
    all &= check(7, "orbital stability envelopes", secs(600), || envelopes(&suite));
    all &= check(8, "optimality probe", secs(600), optimality);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
