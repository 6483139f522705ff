//! Law of motion of the oscillating mirror.
//!
//! The mirror sits at `L0` for `t < 0`, follows `L0 + a sin(2πt/l0)` on
//! `[0, T]` and is back at rest at `L0` for `t > T`. Units are natural
//! (`c = 1`), so speeds are fractions of the speed of light.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sinusoidal mirror trajectory with static extensions on both sides.
///
/// Construction enforces the physical constraints: positive rest length and
/// period, non-negative amplitude and duration, `a < L0`, subluminal peak
/// speed `2πa/l0 < 1`, and closure (`2T/l0` an integer so that `L(T) = L0`).
/// A zero amplitude is accepted and describes a static cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorLaw<T> {
    rest_length: T,
    amplitude: T,
    period: T,
    duration: T,
}

impl<T: Real> MirrorLaw<T> {
    pub fn new(rest_length: T, amplitude: T, period: T, duration: T) -> Result<Self> {
        let finite = [rest_length, amplitude, period, duration]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidLaw("parameters must be finite".into()));
        }
        if rest_length <= T::zero() {
            return Err(Error::InvalidLaw(format!(
                "L0 = {rest_length} must be positive"
            )));
        }
        if period <= T::zero() {
            return Err(Error::InvalidLaw(format!("l0 = {period} must be positive")));
        }
        if amplitude < T::zero() {
            return Err(Error::InvalidLaw(format!(
                "a = {amplitude} must be non-negative"
            )));
        }
        if duration < T::zero() {
            return Err(Error::InvalidLaw(format!(
                "T = {duration} must be non-negative"
            )));
        }
        if amplitude >= rest_length {
            return Err(Error::InvalidLaw(format!(
                "a = {amplitude} must be smaller than L0 = {rest_length}"
            )));
        }
        let v_max = T::TAU() * amplitude / period;
        if v_max >= T::one() {
            return Err(Error::InvalidLaw(format!(
                "peak speed 2πa/l0 = {v_max} is not subluminal"
            )));
        }
        let half_periods = T::lit(2.0) * duration / period;
        let nearest = half_periods.round();
        let slack = T::lit(1e3) * T::epsilon() * nearest.max(T::one());
        if (half_periods - nearest).abs() > slack {
            return Err(Error::InvalidLaw(format!(
                "2T/l0 = {half_periods} is not an integer, so L(T) != L0"
            )));
        }
        Ok(Self {
            rest_length,
            amplitude,
            period,
            duration,
        })
    }

    /// Resonant law `a = εL0`, `l0 = L0`.
    pub fn resonant(rest_length: T, epsilon: T, duration: T) -> Result<Self> {
        Self::new(rest_length, epsilon * rest_length, rest_length, duration)
    }

    /// Mirror at rest forever.
    pub fn static_cavity(rest_length: T) -> Result<Self> {
        Self::new(rest_length, T::zero(), rest_length, T::zero())
    }

    pub fn rest_length(&self) -> T {
        self.rest_length
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    /// `a / L0`.
    pub fn epsilon(&self) -> T {
        self.amplitude / self.rest_length
    }

    /// Oscillation frequency `ω0 = 2π/l0`.
    pub fn omega(&self) -> T {
        T::TAU() / self.period
    }

    pub fn is_static(&self) -> bool {
        self.amplitude == T::zero() || self.duration == T::zero()
    }

    /// Phase `2πt/l0` reduced to `[0, 2π)` before taking sin/cos.
    fn phase(&self, t: T) -> T {
        let cycles = t / self.period;
        T::TAU() * (cycles - cycles.floor())
    }

    /// Mirror position `L(t)`.
    pub fn position(&self, t: T) -> T {
        // Endpoints short-circuit so that L(0) = L(T) = L0 holds exactly.
        if t <= T::zero() || t >= self.duration {
            return self.rest_length;
        }
        self.rest_length + self.amplitude * self.phase(t).sin()
    }

    /// Mirror velocity `L'(t)`. At the kinks `t = 0` and `t = T` the interior
    /// one-sided value is returned.
    pub fn velocity(&self, t: T) -> T {
        if t < T::zero() || t > self.duration || self.duration == T::zero() {
            return T::zero();
        }
        self.max_velocity() * self.phase(t).cos()
    }

    /// Peak speed `2πa/l0`.
    pub fn max_velocity(&self) -> T {
        T::TAU() * self.amplitude / self.period
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn law(a: f64) -> MirrorLaw<f64> {
        MirrorLaw::new(1.0, a, 1.0, 2.0).unwrap()
    }

    #[test]
    fn position_examples() {
        let l = law(0.1);
        assert_eq!(l.position(-5.0), 1.0);
        assert_relative_eq!(l.position(0.25), 1.1, epsilon = 1e-15);
        assert_eq!(l.position(2.0), 1.0);
        assert_eq!(l.position(0.0), 1.0);
    }

    #[test]
    fn velocity_examples() {
        assert_relative_eq!(
            law(0.1).velocity(0.0),
            0.2 * std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            law(0.01).velocity(0.0),
            0.02 * std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert_eq!(law(0.1).velocity(3.0), 0.0);
        assert_relative_eq!(
            law(0.1).velocity(2.0),
            0.2 * std::f64::consts::PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn max_velocity_examples() {
        assert_relative_eq!(law(0.1).max_velocity(), 0.6283185307179586, epsilon = 1e-15);
        assert_eq!(law(0.0).max_velocity(), 0.0);
        let scaled = MirrorLaw::new(1.0, 0.05, 0.5, 1.0).unwrap();
        assert_relative_eq!(scaled.max_velocity(), 0.6283185307179586, epsilon = 1e-15);
    }

    #[test]
    fn rejects_unphysical_laws() {
        // 2π·0.2 > 1
        assert!(matches!(
            MirrorLaw::new(1.0, 0.2, 1.0, 2.0),
            Err(Error::InvalidLaw(_))
        ));
        // 2T/l0 = 2.6
        assert!(MirrorLaw::new(1.0, 0.1, 1.0, 1.3).is_err());
        assert!(MirrorLaw::new(1.0, 0.1, 10.0, 5.0).is_ok());
        assert!(MirrorLaw::new(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(MirrorLaw::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(MirrorLaw::new(1.0, 0.1, 0.0, 1.0).is_err());
        assert!(MirrorLaw::new(1.0, 0.1, 1.0, -1.0).is_err());
        assert!(MirrorLaw::new(f64::NAN, 0.1, 1.0, 1.0).is_err());
        // a >= L0, with l0 large enough to stay subluminal
        assert!(MirrorLaw::new(1.0, 1.0, 100.0, 50.0).is_err());
    }

    #[test]
    fn resonant_and_static_constructors() {
        let l = MirrorLaw::resonant(4.0, 0.01, 8.0).unwrap();
        assert_eq!(l.amplitude(), 0.04);
        assert_eq!(l.period(), 4.0);
        assert_relative_eq!(l.epsilon(), 0.01);
        assert!(MirrorLaw::<f64>::static_cavity(1.0).unwrap().is_static());
    }

    #[test]
    fn works_in_single_precision() {
        let l = MirrorLaw::<f32>::new(1.0, 0.1, 1.0, 2.0).unwrap();
        assert!((l.position(0.25) - 1.1).abs() < 1e-6);
        assert_eq!(l.position(2.0), 1.0);
    }

    proptest! {
        #[test]
        fn position_stays_in_band(t in -3.0f64..6.0, a in 0.0f64..0.15, k in 0u32..8) {
            let l = MirrorLaw::new(1.0, a, 1.0, 0.5 * f64::from(k)).unwrap();
            let x = l.position(t);
            prop_assert!(x >= 1.0 - a - 1e-15 && x <= 1.0 + a + 1e-15);
            prop_assert!(l.velocity(t).abs() < 1.0);
        }

        #[test]
        fn position_is_continuous(t in -1.0f64..5.0, a in 0.0f64..0.15) {
            let l = MirrorLaw::new(1.0, a, 1.0, 3.0).unwrap();
            let h = 1e-9;
            prop_assert!((l.position(t + h) - l.position(t)).abs() <= l.max_velocity() * h + 1e-14);
        }
    }
}
