//! Slow reference implementations used to cross-check the main paths.
//!
//! Nothing here shares code with `dce::moore` or `dce::quadrature`: the Moore
//! recursion uses plain bisection, coefficient integrals use the trapezoid
//! rule on a uniform grid, and the elliptic integrals use their Maclaurin
//! series. Only the mirror law itself is borrowed.

use dce::{Complex, MirrorLaw};
use std::f64::consts::{FRAC_PI_2, PI};

pub const BISECTION_TOL: f64 = 1e-14;
pub const MIN_TRAPEZOID_NODES: usize = 1000;
pub const SERIES_MAX_MODULUS: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooFewNodes(usize),
    OutOfRange(f64),
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TooFewNodes(n) => write!(f, "need at least {MIN_TRAPEZOID_NODES} nodes, got {n}"),
            Self::OutOfRange(k) => write!(f, "modulus {k} outside the series range [0, 0.9]"),
        }
    }
}

impl std::error::Error for OracleError {}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn trace(law: &MirrorLaw, z: f64) -> (f64, u32) {
    let l0 = law.rest_length();
    let span = law.amplitude() + 1.0;
    let mut z = z;
    let mut n = 0u32;
    while z > l0 {
        // t + L(t) = z
        let t = bisect(|t| t + law.position(t) - z, z - l0 - span, z - l0 + span);
        z -= 2.0 * law.position(t);
        n += 1;
    }
    (2.0 * f64::from(n) + z / l0, n)
}

/// `R(z)`, following rays back through the moving mirror with bisection.
pub fn oracle_moore_r(law: &MirrorLaw, z: f64) -> f64 {
    trace(law, z).0
}

/// Number of reflections the oracle takes at `z`.
pub fn oracle_reflections(law: &MirrorLaw, z: f64) -> u32 {
    trace(law, z).1
}

fn trapezoid(
    law: &MirrorLaw,
    t_eval: f64,
    n_nodes: usize,
    phase: impl Fn(f64, f64) -> f64,
) -> Result<Complex, OracleError> {
    if n_nodes < MIN_TRAPEZOID_NODES {
        return Err(OracleError::TooFewNodes(n_nodes));
    }
    let l0 = law.rest_length();
    let lo = t_eval / l0 - 1.0;
    let h = 2.0 / (n_nodes - 1) as f64;
    let mut acc = Complex::new(0.0, 0.0);
    for j in 0..n_nodes {
        let x = lo + h * j as f64;
        let w = if j == 0 || j == n_nodes - 1 {
            0.5 * h
        } else {
            h
        };
        let r = oracle_moore_r(law, l0 * x);
        acc += Complex::from_polar(w, -PI * phase(r, x));
    }
    Ok(acc)
}

/// `β_rs = -½ √(r/s) ∫ exp(-iπ[s R(L0 x) + r x]) dx` over `[t/L0 - 1, t/L0 + 1]`.
pub fn oracle_beta(
    law: &MirrorLaw,
    r: u32,
    s: u32,
    t_eval: f64,
    n_nodes: usize,
) -> Result<Complex, OracleError> {
    let (rf, sf) = (f64::from(r), f64::from(s));
    let integral = trapezoid(law, t_eval, n_nodes, |big_r, x| sf * big_r + rf * x)?;
    Ok(integral * (-0.5 * (rf / sf).sqrt()))
}

/// `α_rs = ½ √(r/s) ∫ exp(-iπ[s R(L0 x) - r x]) dx`.
pub fn oracle_alpha(
    law: &MirrorLaw,
    r: u32,
    s: u32,
    t_eval: f64,
    n_nodes: usize,
) -> Result<Complex, OracleError> {
    let (rf, sf) = (f64::from(r), f64::from(s));
    let integral = trapezoid(law, t_eval, n_nodes, |big_r, x| sf * big_r - rf * x)?;
    Ok(integral * (0.5 * (rf / sf).sqrt()))
}

/// `(K(κ), E(κ))` from their Maclaurin series in `κ²`, summed until the
/// terms stop contributing.
pub fn oracle_elliptic(kappa: f64) -> Result<(f64, f64), OracleError> {
    if !(0.0..=SERIES_MAX_MODULUS).contains(&kappa) {
        return Err(OracleError::OutOfRange(kappa));
    }
    let m = kappa * kappa;
    let (mut k, mut e) = (1.0, 1.0);
    // c_n = ((2n)! / (4^n n!²))²
    let mut c = 1.0;
    let mut mn = 1.0;
    for n in 1..10_000u32 {
        let nf = f64::from(n);
        let ratio = (2.0 * nf - 1.0) / (2.0 * nf);
        c *= ratio * ratio;
        mn *= m;
        let term = c * mn;
        k += term;
        e -= term / (2.0 * nf - 1.0);
        if term < 1e-18 {
            break;
        }
    }
    Ok((FRAC_PI_2 * k, FRAC_PI_2 * e))
}
