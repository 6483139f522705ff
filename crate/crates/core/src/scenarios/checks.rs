//! Property suite run by `dce check`.
//!
//! Each check reports a measured figure against a fixed threshold. The
//! general-`t` variation of `|β|` is informational only: it is logged but
//! never fails the suite.

use super::{presets, run, settings_for, RunReport};
use crate::analytic::EllipticModulus;
use crate::bogoliubov::{evaluate, spectrum, Truncation, SPECTRUM_FLOOR};
use crate::error::Result;
use crate::{MirrorLaw, MooreEvaluator, QuadratureSpec, SpectrumSettings};

pub const MOORE_SAMPLES: usize = 10_000;
pub const MOORE_RESIDUAL_TOL: f64 = 1e-9;
pub const STATIC_TOL: f64 = 1e-12;
pub const SHIFT_TOL: f64 = 1e-9;
pub const DOUBLING_TOL: f64 = 1e-3;
pub const LEGENDRE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `false` for checks that are reported but cannot fail the suite.
    pub gated: bool,
    pub detail: String,
}

impl Check {
    fn gated(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: value < tol,
            gated: true,
            detail: format!("{value:.3e} (< {tol:e})"),
        }
    }

    pub fn verdict(&self) -> &'static str {
        match (self.gated, self.passed) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        }
    }
}

/// `max |R(t + L(t)) - R(t - L(t)) - 2|` over `samples` instants spread
/// evenly across `[-L0, T + L0]`.
pub fn moore_residual(law: &MirrorLaw, samples: usize) -> Result<f64> {
    let ev = MooreEvaluator::new(*law);
    let l0 = law.rest_length();
    let (lo, hi) = (-l0, law.duration() + l0);
    let step = (hi - lo) / (samples.max(2) - 1) as f64;
    let mut worst = 0.0f64;
    for k in 0..samples {
        let t = lo + step * k as f64;
        let l = law.position(t);
        let d = ev.r(t + l)? - ev.r(t - l)? - 2.0;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// For a mirror that never moves: the largest `|β|`, and the largest
/// deviation of `α` from a diagonal of unit-modulus phases.
pub fn static_defects(rest_length: f64, truncation: Truncation) -> Result<(f64, f64)> {
    let law = MirrorLaw::new(rest_length, 0.0, rest_length, 2.0 * rest_length)?;
    let eval = evaluate(
        &law,
        &QuadratureSpec::new(law.duration()),
        1e-12,
        truncation,
    )?;
    let (mut beta, mut alpha) = (0.0f64, 0.0f64);
    for r in 1..=truncation.n_max {
        for s in 1..=truncation.s_max {
            beta = beta.max(eval.table.beta(r, s).norm());
            let a = eval.table.alpha(r, s).norm();
            alpha = alpha.max(if r == s { (a - 1.0).abs() } else { a });
        }
    }
    Ok((beta, alpha))
}

/// `max_{r,s} | |β_rs(t₁)| - |β_rs(t₀)| |` between coefficients taken at
/// `t₀ = T` and `t₁ = T + shift`.
pub fn beta_shift_variation(law: &MirrorLaw, truncation: Truncation, shift: f64) -> Result<f64> {
    let t = law.duration();
    let at = |t_eval: f64| evaluate(law, &QuadratureSpec::new(t_eval), 1e-12, truncation);
    let (a, b) = (at(t)?, at(t + shift)?);
    let mut worst = 0.0f64;
    for r in 1..=truncation.n_max {
        for s in 1..=truncation.s_max {
            let d = a.table.beta(r, s).norm() - b.table.beta(r, s).norm();
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

/// Largest relative change of any `N_n` above the spectrum floor when the
/// panel density doubles at the converged truncation.
pub fn density_doubling_change(law: &MirrorLaw, settings: &SpectrumSettings) -> Result<f64> {
    let base = spectrum(law, settings)?;
    let fine = evaluate(
        law,
        &base.quadrature.refined(2.0),
        settings.tol_t,
        base.truncation,
    )?;
    let mut worst = 0.0f64;
    for (i, &n) in base.occupations.iter().enumerate() {
        if n > SPECTRUM_FLOOR {
            worst = worst.max(((fine.table.occupation(i + 1) - n) / n).abs());
        }
    }
    Ok(worst)
}

/// `max |E(κ)K(κ') + E(κ')K(κ) - K(κ)K(κ') - π/2|` over `κ = 0.01 … 0.99`.
pub fn legendre_defect() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..100 {
        let m = EllipticModulus::new(f64::from(i) / 100.0)?;
        let (k, e) = m.integrals();
        let (kc, ec) = EllipticModulus::new(m.complement())?.integrals();
        worst = worst.max((e * kc + ec * k - k * kc - std::f64::consts::FRAC_PI_2).abs());
    }
    Ok(worst)
}

/// Runs every preset without writing files.
pub fn run_presets() -> Result<Vec<RunReport>> {
    presets::all().iter().map(run).collect()
}

fn fast_law() -> Result<MirrorLaw> {
    MirrorLaw::new(1.0, 0.1, 1.0, 2.0)
}

/// The full suite. `reports` are preset runs whose unitarity defects are
/// checked; pass the output of [`run_presets`] or an empty slice to skip.
pub fn property_suite(reports: &[RunReport]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let laws = [
        fast_law()?,
        MirrorLaw::new(1.0, 0.1, 1.0, 6.0)?,
        MirrorLaw::new(4.0, 0.1, 1.0, 8.0)?,
    ];
    let mut residual = 0.0f64;
    for law in &laws {
        residual = residual.max(moore_residual(law, MOORE_SAMPLES)?);
    }
    checks.push(Check::gated("Moore residual", residual, MOORE_RESIDUAL_TOL));

    for report in reports {
        checks.push(Check::gated(
            format!("unitarity {}", report.name),
            report.worst_defect(),
            report.unitarity_tol,
        ));
    }

    let truncation = Truncation {
        n_max: 40,
        s_max: 320,
    };
    let (beta, alpha) = static_defects(1.0, truncation)?;
    checks.push(Check::gated("static cavity beta", beta, STATIC_TOL));
    checks.push(Check::gated("static cavity alpha", alpha, STATIC_TOL));
    let still = MirrorLaw::new(1.0, 0.0, 1.0, 2.0)?;
    let flat = spectrum(&still, &SpectrumSettings::for_law(&still))?;
    let largest = flat.occupations.iter().copied().fold(0.0, f64::max);
    checks.push(Check::gated(
        "static cavity spectrum",
        largest,
        STATIC_TOL * STATIC_TOL,
    ));

    let law = fast_law()?;
    let l0 = law.rest_length();
    checks.push(Check::gated(
        "2 L0 shift of |beta|",
        beta_shift_variation(&law, truncation, 2.0 * l0)?,
        SHIFT_TOL,
    ));

    for (name, law) in [
        ("slow", MirrorLaw::new(1.0, 0.01, 1.0, 2.0)?),
        ("fast", law),
    ] {
        let settings = settings_for(&law, &Default::default());
        checks.push(Check::gated(
            format!("density doubling {name}"),
            density_doubling_change(&law, &settings)?,
            DOUBLING_TOL,
        ));
    }

    checks.push(Check::gated(
        "Legendre relation",
        legendre_defect()?,
        LEGENDRE_TOL,
    ));

    let drift = beta_shift_variation(&law, truncation, 0.5 * l0)?;
    checks.push(Check {
        name: "L0/2 shift of |beta|".into(),
        passed: true,
        gated: false,
        detail: format!("{drift:.3e}"),
    });

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_is_small_on_a_short_law() {
        let law = MirrorLaw::new(1.0, 0.05, 0.5, 1.0).unwrap();
        assert!(moore_residual(&law, 500).unwrap() < MOORE_RESIDUAL_TOL);
    }

    #[test]
    fn static_table_is_trivial() {
        let (beta, alpha) = static_defects(
            1.0,
            Truncation {
                n_max: 4,
                s_max: 16,
            },
        )
        .unwrap();
        assert!(beta < STATIC_TOL && alpha < STATIC_TOL, "{beta} {alpha}");
    }

    #[test]
    fn legendre() {
        assert!(legendre_defect().unwrap() < LEGENDRE_TOL);
    }

    #[test]
    fn verdicts() {
        assert_eq!(Check::gated("x", 1.0, 2.0).verdict(), "PASS");
        assert_eq!(Check::gated("x", 3.0, 2.0).verdict(), "FAIL");
    }
}
