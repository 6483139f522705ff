//! Flat `key = value` scenario files.
//!
//! ```text
//! # Fundamental-mode spectrum at two round trips
//! kind = spectrum
//! name = slow_mirror
//! L0 = 1
//! l0 = 1
//! epsilon = 0.01
//! T = 2
//! output_dir = out
//! ```
//!
//! Blank lines and `#` comments are ignored. Grids are comma-separated lists
//! or `start:step:stop` ranges (inclusive). Keys:
//!
//! | key | meaning |
//! |-----|---------|
//! | `kind` | `total_vs_T`, `spectrum`, `ratio_sweep` or `band_limit` |
//! | `name` | prefix for output files (default: the kind) |
//! | `L0`, `l0` | rest length and oscillation period (`l0` defaults to `L0`) |
//! | `a` / `epsilon` | amplitude, either absolute or as `a = ε L0` |
//! | `T` | duration (defaults to `2 L0` for spectra) |
//! | `T_grid` | durations for `total_vs_T` |
//! | `a_grid` / `v_grid` | amplitudes or peak speeds `v = 2πa/l0` for `ratio_sweep` |
//! | `L0_grid` | rest lengths for `band_limit` (default `1, 4`) |
//! | `n_max`, `s_max` | truncation (defaults scale with `L0`) |
//! | `panels_per_period`, `points_per_panel` | quadrature resolution |
//! | `tol_t`, `unitarity_tol`, `convergence_tol`, `max_escalations` | tolerances |
//! | `coefficients` | `true` to also dump the coefficient table (spectra only) |
//! | `output_dir` | where CSVs go, relative to the config file |

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bogoliubov::{DEFAULT_CONVERGENCE_TOL, DEFAULT_MAX_ESCALATIONS, DEFAULT_UNITARITY_TOL};
use crate::error::{Error, Result};
use crate::moore::DEFAULT_TOL_T;
use crate::quadrature::{DEFAULT_PANELS_PER_PERIOD, DEFAULT_POINTS_PER_PANEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    TotalVsT,
    Spectrum,
    RatioSweep,
    BandLimit,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TotalVsT => "total_vs_T",
            Self::Spectrum => "spectrum",
            Self::RatioSweep => "ratio_sweep",
            Self::BandLimit => "band_limit",
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "total_vs_T" | "total_vs_t" => Ok(Self::TotalVsT),
            "spectrum" => Ok(Self::Spectrum),
            "ratio_sweep" => Ok(Self::RatioSweep),
            "band_limit" => Ok(Self::BandLimit),
            other => Err(format!("unknown kind `{other}`")),
        }
    }
}

/// Amplitude as given in the file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitude {
    Absolute(f64),
    Relative(f64),
}

impl Amplitude {
    pub fn resolve(self, rest_length: f64) -> f64 {
        match self {
            Self::Absolute(a) => a,
            Self::Relative(eps) => eps * rest_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub n_max: Option<usize>,
    pub s_max: Option<usize>,
    pub panels_per_period: f64,
    pub points_per_panel: usize,
    pub tol_t: f64,
    pub unitarity_tol: f64,
    pub convergence_tol: f64,
    pub max_escalations: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            n_max: None,
            s_max: None,
            panels_per_period: DEFAULT_PANELS_PER_PERIOD,
            points_per_panel: DEFAULT_POINTS_PER_PANEL,
            tol_t: DEFAULT_TOL_T,
            unitarity_tol: DEFAULT_UNITARITY_TOL,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
            max_escalations: DEFAULT_MAX_ESCALATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub name: String,
    pub rest_length: f64,
    /// Oscillation period `l0`; `None` means `l0 = L0` (for band-limit runs
    /// this stays `None` only if every `L0` should be resonant).
    pub period: Option<f64>,
    pub amplitude: Option<Amplitude>,
    pub duration: Option<f64>,
    pub t_grid: Vec<f64>,
    /// Absolute amplitudes for ratio sweeps.
    pub a_grid: Vec<f64>,
    pub l0_grid: Vec<f64>,
    pub numerics: Numerics,
    pub coefficients: bool,
    pub output_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    /// A config of `kind` with `L0 = l0 = 1` and everything else unset.
    pub fn new(kind: ScenarioKind) -> Self {
        Self {
            kind,
            name: kind.as_str().to_owned(),
            rest_length: 1.0,
            period: None,
            amplitude: None,
            duration: None,
            t_grid: Vec::new(),
            a_grid: Vec::new(),
            l0_grid: Vec::new(),
            numerics: Numerics::default(),
            coefficients: false,
            output_dir: None,
        }
    }

    pub fn period_for(&self, rest_length: f64) -> f64 {
        self.period.unwrap_or(rest_length)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_owned();
            if let Some((prev, _)) = entries.insert(key.clone(), (line_no, value.trim().to_owned()))
            {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("`{key}` already set on line {prev}"),
                });
            }
        }

        let mut take = |key: &str| entries.remove(key);
        let (kind_line, kind) = take("kind").ok_or(Error::Config {
            line: 0,
            message: "missing `kind`".into(),
        })?;
        let kind: ScenarioKind = kind.parse().map_err(|message| Error::Config {
            line: kind_line,
            message,
        })?;
        let mut cfg = Self::new(kind);

        if let Some((_, v)) = take("name") {
            cfg.name = v;
        }
        if let Some(v) = take("L0") {
            cfg.rest_length = number(&v)?;
        }
        if let Some(v) = take("l0") {
            cfg.period = Some(number(&v)?);
        }
        match (take("a"), take("epsilon")) {
            (Some((line, _)), Some(_)) => {
                return Err(Error::Config {
                    line,
                    message: "give either `a` or `epsilon`, not both".into(),
                })
            }
            (Some(v), None) => cfg.amplitude = Some(Amplitude::Absolute(number(&v)?)),
            (None, Some(v)) => cfg.amplitude = Some(Amplitude::Relative(number(&v)?)),
            (None, None) => {}
        }
        if let Some(v) = take("T") {
            cfg.duration = Some(number(&v)?);
        }
        if let Some(v) = take("T_grid") {
            cfg.t_grid = grid(&v)?;
        }
        match (take("a_grid"), take("v_grid")) {
            (Some((line, _)), Some(_)) => {
                return Err(Error::Config {
                    line,
                    message: "give either `a_grid` or `v_grid`, not both".into(),
                })
            }
            (Some(v), None) => cfg.a_grid = grid(&v)?,
            (None, Some(v)) => {
                let l0 = cfg.period_for(cfg.rest_length);
                cfg.a_grid = grid(&v)?.into_iter().map(|v| v * l0 / TAU).collect();
            }
            (None, None) => {}
        }
        if let Some(v) = take("L0_grid") {
            cfg.l0_grid = grid(&v)?;
        }

        let n = &mut cfg.numerics;
        if let Some(v) = take("n_max") {
            n.n_max = Some(number(&v)?);
        }
        if let Some(v) = take("s_max") {
            n.s_max = Some(number(&v)?);
        }
        if let Some(v) = take("panels_per_period") {
            n.panels_per_period = number(&v)?;
        }
        if let Some(v) = take("points_per_panel") {
            n.points_per_panel = number(&v)?;
        }
        if let Some(v) = take("tol_t") {
            n.tol_t = number(&v)?;
        }
        if let Some(v) = take("unitarity_tol") {
            n.unitarity_tol = number(&v)?;
        }
        if let Some(v) = take("convergence_tol") {
            n.convergence_tol = number(&v)?;
        }
        if let Some(v) = take("max_escalations") {
            n.max_escalations = number(&v)?;
        }
        if let Some(v) = take("coefficients") {
            cfg.coefficients = number(&v)?;
        }
        if let Some((_, v)) = take("output_dir") {
            cfg.output_dir = Some(PathBuf::from(v));
        }

        if let Some((key, (line, _))) = entries.into_iter().next() {
            return Err(Error::Config {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `output_dir` is taken relative to the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::parse(&std::fs::read_to_string(path)?)?;
        if let Some(dir) = &cfg.output_dir {
            if dir.is_relative() {
                let base = path.parent().unwrap_or_else(|| Path::new("."));
                cfg.output_dir = Some(base.join(dir));
            }
        }
        Ok(cfg)
    }

    /// Checks that the keys needed by `kind` are present and the grids are
    /// non-empty. Law-level constraints are left to `MirrorLaw::new`.
    pub fn validate(&self) -> Result<()> {
        let missing = |what: &str| Error::Config {
            line: 0,
            message: format!("{} needs {what}", self.kind.as_str()),
        };
        if self.amplitude.is_none() && self.kind != ScenarioKind::RatioSweep {
            return Err(missing("`a` or `epsilon`"));
        }
        match self.kind {
            ScenarioKind::TotalVsT if self.t_grid.is_empty() => {
                Err(missing("a non-empty `T_grid`"))
            }
            ScenarioKind::RatioSweep if self.a_grid.is_empty() => {
                Err(missing("a non-empty `a_grid` or `v_grid`"))
            }
            ScenarioKind::Spectrum | ScenarioKind::RatioSweep => match self.duration {
                Some(t) if (t - 2.0 * self.rest_length).abs() > 1e-9 * self.rest_length => {
                    Err(Error::Config {
                        line: 0,
                        message: format!(
                            "{} runs at T = 2 L0 = {}, got T = {t}",
                            self.kind.as_str(),
                            2.0 * self.rest_length
                        ),
                    })
                }
                _ => Ok(()),
            },
            ScenarioKind::BandLimit if self.duration.is_some() => Err(Error::Config {
                line: 0,
                message: "band_limit sets T = 2 L0 for each L0; drop `T`".into(),
            }),
            _ => Ok(()),
        }
    }
}

fn number<V: FromStr>((line, text): &(usize, String)) -> Result<V> {
    text.parse().map_err(|_| Error::Config {
        line: *line,
        message: format!("cannot parse `{text}`"),
    })
}

fn grid((line, text): &(usize, String)) -> Result<Vec<f64>> {
    let bad = |message: String| Error::Config {
        line: *line,
        message,
    };
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| bad(format!("cannot parse `{}` as a number", s.trim())))
    };
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, step, stop] = parts[..] else {
            return Err(bad(format!("range `{text}` must be start:step:stop")));
        };
        let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
        if !(step > 0.0) || stop < start {
            return Err(bad(format!("range `{text}` is empty")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=count).map(|k| start + step * k as f64).collect()
    } else {
        text.split(',').map(parse).collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid".into()));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spectrum_file() {
        let cfg = ScenarioConfig::parse(
            "# comment\nkind = spectrum\nname = fig\nL0 = 1\nepsilon = 0.1 # trailing\nT = 2\nn_max = 12\ncoefficients = true\n",
        )
        .unwrap();
        assert_eq!(cfg.kind, ScenarioKind::Spectrum);
        assert_eq!(cfg.name, "fig");
        assert_eq!(cfg.amplitude, Some(Amplitude::Relative(0.1)));
        assert_eq!(cfg.numerics.n_max, Some(12));
        assert!(cfg.coefficients);
        assert_eq!(cfg.period_for(1.0), 1.0);
    }

    #[test]
    fn ranges_and_lists() {
        let cfg =
            ScenarioConfig::parse("kind = total_vs_T\nepsilon = 0.01\nT_grid = 0:0.5:2\n").unwrap();
        assert_eq!(cfg.t_grid, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let cfg = ScenarioConfig::parse("kind = ratio_sweep\nv_grid = 0.1, 0.3\n").unwrap();
        assert!((cfg.a_grid[1] - 0.3 / TAU).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            "kind = spectrum\nepsilon = 0.1\nbogus = 1\n",
            "kind = spectrum\nepsilon = 0.1\nepsilon = 0.2\n",
            "kind = spectrum\na = 0.1\nepsilon = 0.1\n",
            "kind = spectrum\nepsilon = 0.1\nT = 4\n",
            "kind = total_vs_T\nepsilon = 0.1\n",
            "kind = ratio_sweep\nv_grid = 1:1:0\n",
            "kind = wobble\n",
            "epsilon = 0.1\n",
            "kind spectrum\n",
            "kind = spectrum\nepsilon = x\n",
        ];
        for text in cases {
            assert!(ScenarioConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn error_names_the_line() {
        let err = ScenarioConfig::parse("kind = spectrum\n\nepsilon = nope\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
    }

    #[test]
    fn output_dir_is_relative_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "kind = spectrum\nepsilon = 0.01\noutput_dir = out\n").unwrap();
        let cfg = ScenarioConfig::from_file(&path).unwrap();
        assert_eq!(cfg.output_dir, Some(dir.path().join("out")));
    }
}
