#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dce::bogoliubov::spectrum;
use dce::scenarios::checks::{property_suite, run_presets};
use dce::scenarios::{self, output, presets, Gate, RunReport, ScenarioConfig};
use dce::{MirrorLaw, MooreEvaluator, SpectrumSettings};

/// Particle creation in a cavity with one oscillating mirror.
#[derive(Parser)]
#[command(name = "dce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a built-in preset with `--preset`).
    Run {
        #[arg(required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Built-in scenario name; see `dce presets`.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Output directory, overriding the file's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectrum of one mirror law, written as CSV.
    Spectrum {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        smax: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also dump the coefficient table here.
        #[arg(long)]
        coefficients: Option<PathBuf>,
    },
    /// `N3/N1` at `T = 2 L0` over peak speeds `v = 2πa/l0`.
    RatioSweep {
        #[arg(long = "L0", default_value_t = 1.0)]
        rest_length: f64,
        /// Comma-separated peak speeds.
        #[arg(long, value_delimiter = ',', required = true)]
        v: Vec<f64>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Moore function `R(z)` on a uniform grid.
    Moore {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Property suite: Moore residual, unitarity, static cavity, invariances.
    Check {
        /// Skip the unitarity sweep over the built-in scenarios.
        #[arg(long)]
        skip_presets: bool,
    },
    /// List the built-in scenarios.
    Presets,
}

#[derive(clap::Args)]
struct LawArgs {
    #[arg(long = "L0")]
    rest_length: f64,
    /// Oscillation period; defaults to `L0`.
    #[arg(long = "l0")]
    period: Option<f64>,
    #[arg(long)]
    a: f64,
    /// Duration of the motion; defaults to `2 L0`.
    #[arg(long = "T")]
    duration: Option<f64>,
}

impl LawArgs {
    fn law(&self) -> dce::Result<MirrorLaw> {
        let l0 = self.rest_length;
        MirrorLaw::new(
            l0,
            self.a,
            self.period.unwrap_or(l0),
            self.duration.unwrap_or(2.0 * l0),
        )
    }
}

fn print_gates(gates: &[Gate]) -> bool {
    for g in gates {
        let verdict = if g.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", g.name, g.detail);
    }
    gates.iter().all(|g| g.passed)
}

fn print_report(report: &RunReport) -> bool {
    for p in &report.points {
        let s = &p.spectrum;
        println!(
            "{} {}: total {:.6e}, defect {:.2e}, s_max {}, {:.2}s",
            report.name,
            p.label,
            s.total,
            s.unitarity_defect,
            s.truncation.s_max,
            p.wall.as_secs_f64()
        );
    }
    for path in &report.outputs {
        println!("wrote {}", path.display());
    }
    print_gates(&report.gates)
}

fn execute(command: Command) -> dce::Result<bool> {
    match command {
        Command::Run {
            config,
            preset,
            out,
        } => {
            let mut cfg = match (config, preset) {
                (Some(path), _) => ScenarioConfig::from_file(&path)?,
                (None, Some(name)) => presets::by_name(&name).ok_or_else(|| {
                    dce::Error::InvalidArgument(format!("no preset named `{name}`"))
                })?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            if out.is_some() {
                cfg.output_dir = out;
            }
            Ok(print_report(&scenarios::run(&cfg)?))
        }
        Command::Spectrum {
            law,
            nmax,
            smax,
            out,
            coefficients,
        } => {
            let law = law.law()?;
            let mut settings = SpectrumSettings::for_law(&law);
            if let Some(n) = nmax {
                settings = settings.with_n_max(n);
            }
            if let Some(s) = smax {
                settings.s_max = s;
            }
            let s = spectrum(&law, &settings)?;
            output::write_spectrum(&out, &s)?;
            if let Some(path) = coefficients {
                output::write_coefficients_for(&path, &s, settings.tol_t)?;
            }
            println!(
                "total {:.6e}, defect {:.2e}, n_max {}, s_max {}",
                s.total, s.unitarity_defect, s.truncation.n_max, s.truncation.s_max
            );
            Ok(print_gates(&[
                Gate::new(
                    "unitarity",
                    s.unitarity_defect < settings.unitarity_tol,
                    format!("{:.3e}", s.unitarity_defect),
                ),
                Gate::new(
                    "truncation",
                    s.converged,
                    format!("change {:.3e}", s.truncation_change),
                ),
            ]))
        }
        Command::RatioSweep {
            rest_length,
            v,
            nmax,
            out,
        } => {
            let mut cfg = ScenarioConfig::new(scenarios::ScenarioKind::RatioSweep);
            cfg.rest_length = rest_length;
            cfg.numerics.n_max = nmax;
            cfg.a_grid = v
                .iter()
                .map(|v| v * rest_length / std::f64::consts::TAU)
                .collect();
            let report = scenarios::run_ratio_sweep(&cfg)?;
            let rows = scenarios::ratio_rows(&report);
            output::write_ratios(&out, &rows)?;
            for row in &rows {
                match row.ratio {
                    Some(r) => println!("v = {:.6}: N3/N1 = {r:.6e}", row.speed),
                    None => println!("v = {:.6}: N1 below the spectrum floor", row.speed),
                }
            }
            Ok(print_gates(&report.gates))
        }
        Command::Moore {
            law,
            from,
            to,
            points,
            out,
        } => {
            if points < 2 || !(to > from) {
                return Err(dce::Error::InvalidArgument(
                    "need --to > --from and at least 2 points".into(),
                ));
            }
            let ev = MooreEvaluator::new(law.law()?);
            let step = (to - from) / (points - 1) as f64;
            let zs: Vec<f64> = (0..points).map(|k| from + step * k as f64).collect();
            output::write_moore(&out, &ev, &zs)?;
            Ok(true)
        }
        Command::Check { skip_presets } => {
            let reports = if skip_presets {
                Vec::new()
            } else {
                run_presets()?
            };
            let checks = property_suite(&reports)?;
            for c in &checks {
                println!("{} {}: {}", c.verdict(), c.name, c.detail);
            }
            Ok(checks.iter().all(|c| c.passed || !c.gated))
        }
        Command::Presets => {
            for cfg in presets::all() {
                println!("{} ({})", cfg.name, cfg.kind.as_str());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
