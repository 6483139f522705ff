//! CSV writers. Floats carry 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{RatioRow, RunReport, TotalRow};
use crate::bogoliubov::evaluate;
use crate::error::Result;
use crate::{CoefficientTable, MooreEvaluator, SpectrumResult};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// `n,omega_over_pi_L0,N_n`, where `omega_over_pi_L0 = ω_n / π = n / L0`,
/// followed by a `#` footer with truncation and health figures.
pub fn write_spectrum(path: &Path, s: &SpectrumResult) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "n,omega_over_pi_L0,N_n")?;
    let l0 = s.law.rest_length();
    for (i, &n_n) in s.occupations.iter().enumerate() {
        let n = i + 1;
        writeln!(w, "{n},{},{}", fmt_f(n as f64 / l0), fmt_f(n_n))?;
    }
    writeln!(
        w,
        "# n_max={} s_max={} unitarity_defect={} truncation_change={} converged={}",
        s.truncation.n_max,
        s.truncation.s_max,
        fmt_f(s.unitarity_defect),
        fmt_f(s.truncation_change),
        s.converged
    )?;
    w.flush()?;
    Ok(())
}

/// `r,s,re_alpha,im_alpha,re_beta,im_beta` for every entry of the table.
pub fn write_coefficients(path: &Path, table: &CoefficientTable) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "r,s,re_alpha,im_alpha,re_beta,im_beta")?;
    let t = table.truncation();
    for r in 1..=t.n_max {
        for s in 1..=t.s_max {
            let (a, b) = (table.alpha(r, s), table.beta(r, s));
            writeln!(
                w,
                "{r},{s},{},{},{},{}",
                fmt_f(a.re),
                fmt_f(a.im),
                fmt_f(b.re),
                fmt_f(b.im)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Rebuilds the table at the spectrum's final truncation and writes it.
pub fn write_coefficients_for(path: &Path, s: &SpectrumResult, tol_t: f64) -> Result<()> {
    let eval = evaluate(&s.law, &s.quadrature, tol_t, s.truncation)?;
    write_coefficients(path, &eval.table)
}

/// `z,R,n_reflections` at each `z`.
pub fn write_moore(path: &Path, evaluator: &MooreEvaluator, zs: &[f64]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "z,R,n_reflections")?;
    for &z in zs {
        let (r, n) = evaluator.r_with_count(z)?;
        writeln!(w, "{},{},{n}", fmt_f(z), fmt_f(r))?;
    }
    w.flush()?;
    Ok(())
}

/// `T,N_exact,N_approx,abs_diff`.
pub fn write_totals(path: &Path, rows: &[TotalRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "T,N_exact,N_approx,abs_diff")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f(r.duration),
            fmt_f(r.exact),
            fmt_f(r.approx),
            fmt_f((r.exact - r.approx).abs())
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `v,N1,N3,ratio`; an undefined ratio is written as `nan`.
pub fn write_ratios(path: &Path, rows: &[RatioRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "v,N1,N3,ratio")?;
    for r in rows {
        let ratio = r.ratio.map_or_else(|| "nan".to_owned(), fmt_f);
        writeln!(
            w,
            "{},{},{},{ratio}",
            fmt_f(r.speed),
            fmt_f(r.n1),
            fmt_f(r.n3)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Per-point convergence details and wall time, then one `#` line per gate.
pub fn write_report(path: &Path, report: &RunReport) -> Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "point,unitarity_defect,truncation_change,converged,escalations,n_max,s_max,nodes,max_slope,wall_seconds"
    )?;
    for p in &report.points {
        let s = &p.spectrum;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{:.3}",
            p.label,
            fmt_f(s.unitarity_defect),
            fmt_f(s.truncation_change),
            s.converged,
            s.escalations,
            s.truncation.n_max,
            s.truncation.s_max,
            s.nodes,
            fmt_f(s.max_slope),
            p.wall.as_secs_f64()
        )?;
    }
    for g in &report.gates {
        let verdict = if g.passed { "PASS" } else { "FAIL" };
        writeln!(w, "# {verdict} {}: {}", g.name, g.detail)?;
    }
    w.flush()?;
    Ok(())
}
