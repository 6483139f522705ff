//! Built-in scenarios, also shipped as files under `configs/`.

use std::f64::consts::TAU;

use super::config::{Amplitude, ScenarioConfig, ScenarioKind};

/// `ε = 0.01`, `T = 0, 2, …, 10`.
pub fn slow_mirror_totals() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(ScenarioKind::TotalVsT);
    cfg.name = "slow_mirror_totals".into();
    cfg.amplitude = Some(Amplitude::Relative(0.01));
    cfg.t_grid = vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0];
    cfg
}

/// `ε = 0.1`, `T = 2, 4`. Longer runs steepen `R` past what the default
/// escalation budget resolves.
pub fn fast_mirror_totals() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(ScenarioKind::TotalVsT);
    cfg.name = "fast_mirror_totals".into();
    cfg.amplitude = Some(Amplitude::Relative(0.1));
    cfg.t_grid = vec![2.0, 4.0];
    cfg
}

/// `ε = 0.01` at `T = 2 L0`.
pub fn slow_mirror_spectrum() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(ScenarioKind::Spectrum);
    cfg.name = "slow_mirror_spectrum".into();
    cfg.amplitude = Some(Amplitude::Relative(0.01));
    cfg.duration = Some(2.0);
    cfg
}

/// `ε = 0.1` at `T = 2 L0`.
pub fn fast_mirror_spectrum() -> ScenarioConfig {
    let mut cfg = slow_mirror_spectrum();
    cfg.name = "fast_mirror_spectrum".into();
    cfg.amplitude = Some(Amplitude::Relative(0.1));
    cfg
}

/// Peak speeds `v = 2πa` from `2π·10⁻³` to `2π·10⁻¹`.
pub fn velocity_ratio_sweep() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(ScenarioKind::RatioSweep);
    cfg.name = "velocity_ratio_sweep".into();
    cfg.duration = Some(2.0);
    cfg.a_grid = [TAU * 1e-3, TAU * 1e-2, 0.1, 0.3, TAU * 1e-1]
        .iter()
        .map(|v| v / TAU)
        .collect();
    cfg
}

/// `L0 = 1, 4` with `l0 = 1`, `a = 0.01`.
pub fn band_limit_slow() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(ScenarioKind::BandLimit);
    cfg.name = "band_limit_slow".into();
    cfg.period = Some(1.0);
    cfg.amplitude = Some(Amplitude::Absolute(0.01));
    cfg.l0_grid = vec![1.0, 4.0];
    cfg
}

/// `L0 = 1, 4` with `l0 = 1`, `a = 0.1`.
pub fn band_limit_fast() -> ScenarioConfig {
    let mut cfg = band_limit_slow();
    cfg.name = "band_limit_fast".into();
    cfg.amplitude = Some(Amplitude::Absolute(0.1));
    cfg
}

pub fn all() -> Vec<ScenarioConfig> {
    vec![
        slow_mirror_totals(),
        fast_mirror_totals(),
        slow_mirror_spectrum(),
        fast_mirror_spectrum(),
        velocity_ratio_sweep(),
        band_limit_slow(),
        band_limit_fast(),
    ]
}

pub fn by_name(name: &str) -> Option<ScenarioConfig> {
    all().into_iter().find(|c| c.name == name)
}
