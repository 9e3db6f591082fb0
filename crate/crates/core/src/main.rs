use clap::{Parser, Subcommand};
use phi6_kinks::experiments::{
    default_suite, optimality_probe, read_report, run_scenario, verify_orbital_stability,
    verify_remainder_growth, ComparisonReport, ProbeOptions, ScenarioConfig, Verdict,
};
use phi6_kinks::Result;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "phi6", version, about = "Kink-antikink dynamics for the phi^6 wave equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write trajectory.csv and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dx: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "t-end")]
        t_end: Option<f64>,
    },
    /// Re-check the verdicts of a written report directory.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
    /// Measure the remainder growth time for resting pairs at the given energy excesses.
    Probe {
        /// Comma-separated list, e.g. 1e-2,2.5e-3.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        dx: f64,
        #[arg(long, default_value_t = 0.02)]
        dt: f64,
        #[arg(long, default_value_t = 0.1)]
        kappa: f64,
        /// Optional path for the JSON probe report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the default scenario suite as config files.
    Suite {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        dx: f64,
        #[arg(long, default_value_t = 0.02)]
        dt: f64,
    },
}

fn verdicts(report: &ComparisonReport) -> Vec<Verdict> {
    let mut v = vec![verify_orbital_stability(report)];
    match verify_remainder_growth(report) {
        Ok(g) => v.push(g),
        Err(e) => println!("SKIP remainder_growth[{}] ({e})", report.summary.label),
    }
    v
}

fn print_verdicts(vs: &[Verdict]) -> bool {
    for v in vs {
        println!("{}", v.line());
    }
    vs.iter().all(|v| v.pass)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out, dx, dt, t_end } => {
            let mut cfg = ScenarioConfig::load(&config)?.with_resolution(dx, dt)?;
            if let Some(t) = t_end {
                cfg.t_end = t;
            }
            if cfg.seed_label.is_empty() {
                cfg.seed_label = config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            }
            let dir = out
                .or_else(|| cfg.outputs.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(&cfg.seed_label));
            cfg.outputs = Some(dir.clone());
            let report = run_scenario(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&report.summary)?);
            println!("report written to {}", dir.display());
            if let Some(f) = &report.summary.failure {
                return Err(phi6_kinks::Error::InvalidConfig(format!("run aborted: {f}")));
            }
            Ok(print_verdicts(&verdicts(&report)))
        }
        Command::Verify { report } => {
            let report = read_report(&report)?;
            Ok(print_verdicts(&verdicts(&report)))
        }
        Command::Probe { eps, dx, dt, kappa, out } => {
            let opts = ProbeOptions { dx, dt, kappa, ..ProbeOptions::default() };
            let probe = optimality_probe(&eps, &opts)?;
            for e in &probe.entries {
                println!(
                    "eps_target={:e} z0={:.4} eps={:.4e} t_max={:.2} t_hit={} ratio={} C_growth={}",
                    e.eps_target,
                    e.z0,
                    e.epsilon,
                    e.t_max,
                    e.t_hit.map_or("none".into(), |t| format!("{t:.2}")),
                    e.hit_ratio.map_or("none".into(), |r| format!("{r:.4}")),
                    e.fitted_c_growth.map_or("none".into(), |c| format!("{c:.4e}")),
                );
            }
            if let Some(s) = probe.scaling_spread {
                println!("scaling spread {s:.3}");
            }
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&probe)?)?;
            }
            Ok(probe.all_hit())
        }
        Command::Suite { out, dx, dt } => {
            std::fs::create_dir_all(&out)?;
            for cfg in default_suite(dx, dt)? {
                let path = out.join(format!("{}.json", cfg.seed_label));
                std::fs::write(&path, cfg.to_json()?)?;
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
