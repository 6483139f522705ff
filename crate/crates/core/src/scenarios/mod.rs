//! Declarative runs over grids of mirror laws, with CSV output.
//!
//! A [`ScenarioConfig`] names one of four kinds:
//!
//! - `total_vs_T`: exact total against the elliptic baseline over a `T` grid;
//! - `spectrum`: one spectrum at `T = 2 L0`;
//! - `ratio_sweep`: `N3 / N1` at `T = 2 L0` over an amplitude grid;
//! - `band_limit`: spectra at `T = 2 L0` for several `L0` at fixed `l0`.
//!
//! Grid points run in parallel. The data CSVs contain no timing, so the same
//! config always yields byte-identical files; wall times and convergence
//! details go to a separate `<name>_report.csv`.

pub mod checks;
pub mod config;
pub mod output;
pub mod presets;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analytic::n_app_total;
use crate::bogoliubov::{band_ratio_from, default_n_max, default_s_max, spectrum};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::{MirrorLaw, SpectrumResult, SpectrumSettings};

pub use config::{Amplitude, Numerics, ScenarioConfig, ScenarioKind};

/// One grid point: the law, its spectrum and how long it took.
#[derive(Debug, Clone)]
pub struct PointReport {
    pub label: String,
    pub spectrum: SpectrumResult,
    pub wall: Duration,
}

/// A named pass/fail condition on a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Gate {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub kind: ScenarioKind,
    pub unitarity_tol: f64,
    pub points: Vec<PointReport>,
    pub gates: Vec<Gate>,
    /// Files written, data first, report last.
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }

    pub fn worst_defect(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.spectrum.unitarity_defect)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalRow {
    pub duration: f64,
    pub exact: f64,
    pub approx: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub speed: f64,
    pub n1: f64,
    pub n3: f64,
    /// `None` when `N1` is below the spectrum floor.
    pub ratio: Option<f64>,
}

/// Settings for `law` from the config's numerics, with coefficients taken at
/// `t = T`.
pub fn settings_for(law: &MirrorLaw, numerics: &Numerics) -> SpectrumSettings {
    let n_max = numerics
        .n_max
        .unwrap_or_else(|| default_n_max(law.rest_length()));
    let mut quadrature = QuadratureSpec::new(law.duration());
    quadrature.panels_per_period = numerics.panels_per_period;
    quadrature.points_per_panel = numerics.points_per_panel;
    SpectrumSettings {
        n_max,
        s_max: numerics.s_max.unwrap_or_else(|| default_s_max(n_max)),
        quadrature,
        tol_t: numerics.tol_t,
        unitarity_tol: numerics.unitarity_tol,
        convergence_tol: numerics.convergence_tol,
        max_escalations: numerics.max_escalations,
    }
}

/// Runs whatever `cfg.kind` asks for and writes its files if
/// `cfg.output_dir` is set.
pub fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    match cfg.kind {
        ScenarioKind::TotalVsT => run_total_vs_t(cfg),
        ScenarioKind::Spectrum | ScenarioKind::BandLimit => run_spectrum(cfg),
        ScenarioKind::RatioSweep => run_ratio_sweep(cfg),
    }
}

fn amplitude(cfg: &ScenarioConfig) -> Result<Amplitude> {
    cfg.amplitude
        .ok_or_else(|| Error::InvalidArgument(format!("{} needs an amplitude", cfg.kind.as_str())))
}

fn expect_kind(cfg: &ScenarioConfig, kinds: &[ScenarioKind]) -> Result<()> {
    if kinds.contains(&cfg.kind) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "config kind {} cannot run here",
            cfg.kind.as_str()
        )))
    }
}

fn compute(cfg: &ScenarioConfig, laws: Vec<(String, MirrorLaw)>) -> Result<Vec<PointReport>> {
    laws.into_par_iter()
        .map(|(label, law)| {
            let start = Instant::now();
            let spectrum = spectrum(&law, &settings_for(&law, &cfg.numerics))?;
            Ok(PointReport {
                label,
                spectrum,
                wall: start.elapsed(),
            })
        })
        .collect()
}

fn health_gates(cfg: &ScenarioConfig, points: &[PointReport]) -> Vec<Gate> {
    let tol = cfg.numerics.unitarity_tol;
    let bad_defect: Vec<&str> = points
        .iter()
        .filter(|p| !(p.spectrum.unitarity_defect < tol))
        .map(|p| p.label.as_str())
        .collect();
    let unconverged: Vec<&str> = points
        .iter()
        .filter(|p| !p.spectrum.converged)
        .map(|p| p.label.as_str())
        .collect();
    vec![
        Gate::new(
            "unitarity",
            bad_defect.is_empty(),
            if bad_defect.is_empty() {
                format!("all defects < {tol:e}")
            } else {
                format!("defect >= {tol:e} at {}", bad_defect.join(", "))
            },
        ),
        Gate::new(
            "truncation",
            unconverged.is_empty(),
            if unconverged.is_empty() {
                "all points converged".to_owned()
            } else {
                format!("unconverged at {}", unconverged.join(", "))
            },
        ),
    ]
}

fn finish(cfg: &ScenarioConfig, points: Vec<PointReport>, mut gates: Vec<Gate>) -> RunReport {
    let mut all = health_gates(cfg, &points);
    all.append(&mut gates);
    RunReport {
        name: cfg.name.clone(),
        kind: cfg.kind,
        unitarity_tol: cfg.numerics.unitarity_tol,
        points,
        gates: all,
        outputs: Vec::new(),
    }
}

fn write_all(
    cfg: &ScenarioConfig,
    report: &mut RunReport,
    data: impl FnOnce(&std::path::Path, &RunReport) -> Result<Vec<PathBuf>>,
) -> Result<()> {
    let Some(dir) = &cfg.output_dir else {
        return Ok(());
    };
    std::fs::create_dir_all(dir)?;
    let mut outputs = data(dir, report)?;
    let report_path = dir.join(format!("{}_report.csv", cfg.name));
    output::write_report(&report_path, report)?;
    outputs.push(report_path);
    report.outputs = outputs;
    Ok(())
}

/// Exact total against `N_app(T)` for each `T` in the grid. Needs a resonant
/// law (`l0 = L0`).
pub fn run_total_vs_t(cfg: &ScenarioConfig) -> Result<RunReport> {
    expect_kind(cfg, &[ScenarioKind::TotalVsT])?;
    let l0 = cfg.rest_length;
    if (cfg.period_for(l0) - l0).abs() > 1e-12 * l0 {
        return Err(Error::InvalidArgument(
            "total_vs_T compares against the resonant baseline and needs l0 = L0".into(),
        ));
    }
    let a = amplitude(cfg)?.resolve(l0);
    let laws = cfg
        .t_grid
        .iter()
        .map(|&t| Ok((format!("T={t}"), MirrorLaw::new(l0, a, l0, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut report = finish(cfg, compute(cfg, laws)?, Vec::new());
    write_all(cfg, &mut report, |dir, r| {
        let path = dir.join(format!("{}_total_vs_T.csv", cfg.name));
        output::write_totals(&path, &total_rows(r)?)?;
        Ok(vec![path])
    })?;
    Ok(report)
}

/// `(T, N_exact, N_app)` per point of a `total_vs_T` report.
pub fn total_rows(report: &RunReport) -> Result<Vec<TotalRow>> {
    report
        .points
        .iter()
        .map(|p| {
            let law = &p.spectrum.law;
            let approx = if law.amplitude() == 0.0 {
                0.0
            } else {
                n_app_total(law.epsilon(), law.duration(), law.rest_length())?
            };
            Ok(TotalRow {
                duration: law.duration(),
                exact: p.spectrum.total,
                approx,
            })
        })
        .collect()
}

/// One spectrum at `T = 2 L0`, or for `band_limit` one per `L0` in
/// `L0_grid` (default `1, 4`).
pub fn run_spectrum(cfg: &ScenarioConfig) -> Result<RunReport> {
    expect_kind(cfg, &[ScenarioKind::Spectrum, ScenarioKind::BandLimit])?;
    let amp = amplitude(cfg)?;
    let lengths = match cfg.kind {
        ScenarioKind::BandLimit if cfg.l0_grid.is_empty() => vec![1.0, 4.0],
        ScenarioKind::BandLimit => cfg.l0_grid.clone(),
        _ => vec![cfg.rest_length],
    };
    let laws = lengths
        .iter()
        .map(|&l0| {
            let t = cfg.duration.unwrap_or(2.0 * l0);
            let law = MirrorLaw::new(l0, amp.resolve(l0), cfg.period_for(l0), t)?;
            Ok((format!("L0={l0}"), law))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = finish(cfg, compute(cfg, laws)?, Vec::new());
    let band = cfg.kind == ScenarioKind::BandLimit;
    write_all(cfg, &mut report, |dir, r| {
        let mut paths = Vec::new();
        for p in &r.points {
            let stem = if band {
                format!("{}_L0_{}", cfg.name, p.spectrum.law.rest_length())
            } else {
                cfg.name.clone()
            };
            let path = dir.join(format!("{stem}_spectrum.csv"));
            output::write_spectrum(&path, &p.spectrum)?;
            paths.push(path);
            if cfg.coefficients {
                let path = dir.join(format!("{stem}_coefficients.csv"));
                output::write_coefficients_for(&path, &p.spectrum, cfg.numerics.tol_t)?;
                paths.push(path);
            }
        }
        Ok(paths)
    })?;
    Ok(report)
}

/// `N3 / N1` at `T = 2 L0` for each amplitude in the grid, plus a gate
/// requiring the ratio to increase with `v`.
pub fn run_ratio_sweep(cfg: &ScenarioConfig) -> Result<RunReport> {
    expect_kind(cfg, &[ScenarioKind::RatioSweep])?;
    let l0 = cfg.rest_length;
    let period = cfg.period_for(l0);
    if (period - l0).abs() > 1e-12 * l0 {
        return Err(Error::InvalidArgument("ratio_sweep needs l0 = L0".into()));
    }
    let laws = cfg
        .a_grid
        .iter()
        .map(|&a| Ok((format!("a={a}"), MirrorLaw::new(l0, a, period, 2.0 * l0)?)))
        .collect::<Result<Vec<_>>>()?;
    let points = compute(cfg, laws)?;
    let rows = ratio_rows_of(&points);
    let undefined: Vec<&str> = rows
        .iter()
        .zip(&points)
        .filter(|(r, _)| r.ratio.is_none())
        .map(|(_, p)| p.label.as_str())
        .collect();
    let mut ordered: Vec<&RatioRow> = rows.iter().collect();
    ordered.sort_by(|a, b| a.speed.total_cmp(&b.speed));
    let monotone = ordered
        .windows(2)
        .all(|w| matches!((w[0].ratio, w[1].ratio), (Some(x), Some(y)) if y > x));
    let gates = vec![
        Gate::new(
            "ratio defined",
            undefined.is_empty(),
            if undefined.is_empty() {
                "N1 above the floor everywhere".to_owned()
            } else {
                format!("N1 below the floor at {}", undefined.join(", "))
            },
        ),
        Gate::new("ratio monotone", monotone, "N3/N1 increasing in v"),
    ];
    let mut report = finish(cfg, points, gates);
    write_all(cfg, &mut report, |dir, _| {
        let path = dir.join(format!("{}_ratio.csv", cfg.name));
        output::write_ratios(&path, &rows)?;
        Ok(vec![path])
    })?;
    Ok(report)
}

fn ratio_rows_of(points: &[PointReport]) -> Vec<RatioRow> {
    points
        .iter()
        .map(|p| RatioRow {
            speed: p.spectrum.law.max_velocity(),
            n1: p.spectrum.occupation(1),
            n3: p.spectrum.occupation(3),
            ratio: band_ratio_from(&p.spectrum).ok(),
        })
        .collect()
}

/// `(v, N1, N3, N3/N1)` per point of a `ratio_sweep` report.
pub fn ratio_rows(report: &RunReport) -> Vec<RatioRow> {
    ratio_rows_of(&report.points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ScenarioKind) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::new(kind);
        cfg.numerics.n_max = Some(6);
        cfg.numerics.s_max = Some(48);
        cfg
    }

    #[test]
    fn static_spectrum_is_empty_and_passes() {
        let mut cfg = small(ScenarioKind::Spectrum);
        cfg.amplitude = Some(Amplitude::Absolute(0.0));
        let report = run(&cfg).unwrap();
        assert!(report.passed());
        assert!(report.points[0]
            .spectrum
            .occupations
            .iter()
            .all(|&n| n < 1e-24));
    }

    #[test]
    fn total_vs_t_rows() {
        let mut cfg = small(ScenarioKind::TotalVsT);
        cfg.amplitude = Some(Amplitude::Relative(0.01));
        cfg.t_grid = vec![0.0, 2.0];
        let rows = total_rows(&run(&cfg).unwrap()).unwrap();
        assert!(rows[0].exact < 1e-24);
        assert_eq!(rows[0].approx, 0.0);
        assert!((rows[1].exact / rows[1].approx - 1.0).abs() < 0.01);
    }

    #[test]
    fn total_vs_t_needs_resonance() {
        let mut cfg = small(ScenarioKind::TotalVsT);
        cfg.amplitude = Some(Amplitude::Relative(0.01));
        cfg.period = Some(0.5);
        cfg.t_grid = vec![1.0];
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn ratio_gates() {
        let mut cfg = small(ScenarioKind::RatioSweep);
        cfg.a_grid = vec![0.01, 0.0];
        let report = run(&cfg).unwrap();
        let rows = ratio_rows(&report);
        assert!(rows[0].ratio.unwrap() > 0.0);
        assert!(rows[1].ratio.is_none());
        assert!(!report.passed());
        assert!(report
            .gates
            .iter()
            .any(|g| g.name == "ratio defined" && !g.passed));
    }

    #[test]
    fn band_limit_defaults_to_two_lengths() {
        let mut cfg = small(ScenarioKind::BandLimit);
        cfg.amplitude = Some(Amplitude::Absolute(0.0));
        cfg.period = Some(1.0);
        let report = run(&cfg).unwrap();
        let lengths: Vec<f64> = report
            .points
            .iter()
            .map(|p| p.spectrum.law.rest_length())
            .collect();
        assert_eq!(lengths, vec![1.0, 4.0]);
    }

    #[test]
    fn wrong_runner_is_rejected() {
        let cfg = small(ScenarioKind::Spectrum);
        assert!(run_ratio_sweep(&cfg).is_err());
        assert!(run_total_vs_t(&cfg).is_err());
    }
}
