//! Perturbative baselines for the resonant law (`a = εL0`, `l0 = L0`):
//!
//! ```text
//! N_app(T)     = (1/π²) [(1 - κ²/2) K(κ)² - E(κ) K(κ)]
//! N_app^(1)(T) = (2/π²) K(κ) E(κ) - 1/2
//! κ            = sqrt(1 - exp(-4επT/L0))
//! ```
//!
//! `K` and `E` take the *modulus* `κ`, not the parameter `m = κ²`. Only with
//! the modulus convention do both formulas vanish at `T = 0`, where
//! `K(0) = E(0) = π/2`.

use crate::error::{Error, Result};
use crate::scalar::Real;

const AGM_MAX_ITERATIONS: usize = 64;

/// Elliptic modulus `κ ∈ [0, 1)`, stored with its complement
/// `κ' = sqrt(1 - κ²)` so that moduli close to 1 keep full precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus<T> {
    kappa: T,
    complement: T,
}

impl<T: Real> EllipticModulus<T> {
    pub fn new(kappa: T) -> Result<Self> {
        if !(kappa >= T::zero() && kappa < T::one()) {
            return Err(Error::EllipticDomain(kappa.to_f64_lossy()));
        }
        Ok(Self {
            kappa,
            complement: ((T::one() - kappa) * (T::one() + kappa)).sqrt(),
        })
    }

    /// `κ = sqrt(1 - exp(-4επT/L0))`, built from `κ' = exp(-2επT/L0)`.
    pub fn for_resonance(epsilon: T, duration: T, rest_length: T) -> Result<Self> {
        if !(epsilon >= T::zero()) || !(duration >= T::zero()) || !(rest_length > T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "need ε >= 0, T >= 0, L0 > 0 (got {epsilon}, {duration}, {rest_length})"
            )));
        }
        let complement = (-T::lit(2.0) * epsilon * T::PI() * duration / rest_length).exp();
        if !(complement > T::zero()) {
            return Err(Error::EllipticDomain(1.0));
        }
        let kappa = (-complement.mul_add(complement, -T::one())).sqrt();
        Ok(Self { kappa, complement })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn complement(&self) -> T {
        self.complement
    }

    /// `(K(κ), E(κ))` by the arithmetic–geometric mean.
    pub fn integrals(&self) -> (T, T) {
        let tol = T::lit(1e-15).max(T::epsilon());
        let half = T::lit(0.5);
        let mut a = T::one();
        let mut b = self.complement;
        let mut c = self.kappa;
        // E/K = 1 - Σ 2^{n-1} c_n²
        let mut weight = half;
        let mut sum = weight * c * c;
        for _ in 0..AGM_MAX_ITERATIONS {
            if (a - b).abs() <= tol * a {
                break;
            }
            let next_a = (a + b) * half;
            let next_b = (a * b).sqrt();
            c = (a - b) * half;
            weight *= T::lit(2.0);
            sum += weight * c * c;
            a = next_a;
            b = next_b;
        }
        let k = T::PI() / (T::lit(2.0) * a);
        (k, k * (T::one() - sum))
    }
}

/// Complete elliptic integral of the first kind, modulus convention.
pub fn elliptic_k<T: Real>(kappa: T) -> Result<T> {
    Ok(EllipticModulus::new(kappa)?.integrals().0)
}

/// Complete elliptic integral of the second kind, modulus convention.
pub fn elliptic_e<T: Real>(kappa: T) -> Result<T> {
    Ok(EllipticModulus::new(kappa)?.integrals().1)
}

fn check_resonance_args<T: Real>(epsilon: T, duration: T) -> Result<()> {
    if !(epsilon > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "ε = {epsilon} must be positive"
        )));
    }
    if !(duration >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "T = {duration} must be non-negative"
        )));
    }
    Ok(())
}

/// Approximate total number of created particles.
pub fn n_app_total<T: Real>(epsilon: T, duration: T, rest_length: T) -> Result<T> {
    check_resonance_args(epsilon, duration)?;
    let modulus = EllipticModulus::for_resonance(epsilon, duration, rest_length)?;
    let (k, e) = modulus.integrals();
    let kappa_sq = modulus.kappa() * modulus.kappa();
    let bracket = (T::one() - kappa_sq * T::lit(0.5)) * k * k - e * k;
    Ok((bracket / (T::PI() * T::PI())).max(T::zero()))
}

/// Approximate number of particles in the fundamental mode.
pub fn n_app_mode1<T: Real>(epsilon: T, duration: T, rest_length: T) -> Result<T> {
    check_resonance_args(epsilon, duration)?;
    let (k, e) = EllipticModulus::for_resonance(epsilon, duration, rest_length)?.integrals();
    let value = T::lit(2.0) * k * e / (T::PI() * T::PI()) - T::lit(0.5);
    Ok(value.max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_modulus() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn half_modulus_frozen_series_values() {
        // Maclaurin series in κ², summed to convergence (dce-oracles).
        assert_relative_eq!(elliptic_k(0.5).unwrap(), K_HALF, epsilon = 1e-14);
        assert_relative_eq!(elliptic_e(0.5).unwrap(), E_HALF, epsilon = 1e-14);
    }

    const K_HALF: f64 = 1.685750354812596;
    const E_HALF: f64 = 1.4674622093394272;

    #[test]
    fn boundary_behaviour() {
        let k: f64 = elliptic_k(0.999999).unwrap();
        assert!(k.is_finite() && k > 7.0);
        assert!(matches!(elliptic_k(1.0), Err(Error::EllipticDomain(_))));
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_e(f64::NAN).is_err());
    }

    #[test]
    fn legendre_relation() {
        for i in 1..100 {
            let kappa = f64::from(i) / 100.0;
            let m = EllipticModulus::new(kappa).unwrap();
            let (k, e) = m.integrals();
            let (kc, ec) = EllipticModulus::new(m.complement()).unwrap().integrals();
            assert!(
                (e * kc + ec * k - k * kc - FRAC_PI_2).abs() < 1e-10,
                "κ = {kappa}"
            );
        }
    }

    #[test]
    fn monotone_in_modulus() {
        let vals: Vec<(f64, f64)> = (0..99)
            .map(|i| {
                EllipticModulus::new(f64::from(i) / 100.0)
                    .unwrap()
                    .integrals()
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1));
    }

    #[test]
    fn approximations_vanish_at_zero_duration() {
        assert_eq!(n_app_total(0.01, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(n_app_mode1(0.01, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn fundamental_mode_at_two_round_trips() {
        let n1: f64 = n_app_mode1(0.01, 2.0, 1.0).unwrap();
        assert!((n1 - 0.001).abs() < 0.0002, "{n1}");
    }

    #[test]
    fn approximations_increase_with_duration() {
        let mut prev = (0.0, 0.0);
        for i in 1..40 {
            let t = 0.5 * f64::from(i);
            let cur = (
                n_app_total(0.01, t, 1.0).unwrap(),
                n_app_mode1(0.01, t, 1.0).unwrap(),
            );
            assert!(cur.0 > prev.0 && cur.1 > prev.1);
            prev = cur;
        }
    }

    #[test]
    fn resonance_modulus_keeps_complement_precise() {
        let m = EllipticModulus::<f64>::for_resonance(0.1, 40.0, 1.0).unwrap();
        // κ itself rounds to 1 here; the integrals only use the complement.
        assert!(m.complement() > 0.0);
        assert!(m.integrals().0.is_finite());
        assert_relative_eq!(m.complement(), (-0.2 * std::f64::consts::PI * 40.0).exp());
    }

    #[test]
    fn single_precision() {
        let k = elliptic_k(0.5f32).unwrap();
        assert!((f64::from(k) - K_HALF).abs() < 1e-6);
    }
}
