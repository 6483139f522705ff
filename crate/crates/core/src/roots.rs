//! Bracketed root finding for strictly increasing functions.
//!
//! Regula falsi with the Illinois weighting, falling back to bisection
//! whenever a secant step fails to halve the bracket. Convergence is
//! guaranteed by the bracket; the secant steps make it fast on the smooth
//! pieces between the mirror's velocity kinks.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RootFailure<T> {
    NotBracketed { g_lo: T, g_hi: T },
    Iterations,
}

pub(crate) const MAX_ITERATIONS: usize = 200;

/// Finds `x` in `[lo, hi]` with `g(x) = 0`, given `g` increasing with
/// `g(lo) <= 0 <= g(hi)`. Stops once the bracket is narrower than `tol` (or
/// cannot shrink further in floating point).
pub(crate) fn increasing_root<T, G>(g: G, lo: T, hi: T, tol: T) -> Result<T, RootFailure<T>>
where
    T: Real,
    G: Fn(T) -> T,
{
    let (mut lo, mut hi) = (lo, hi);
    let (mut g_lo, mut g_hi) = (g(lo), g(hi));
    if g_lo > T::zero() || g_hi < T::zero() || g_lo.is_nan() || g_hi.is_nan() {
        return Err(RootFailure::NotBracketed { g_lo, g_hi });
    }
    if g_lo == T::zero() {
        return Ok(lo);
    }
    if g_hi == T::zero() {
        return Ok(hi);
    }

    let half = T::lit(0.5);
    // Which side was retained last step: -1 lo, +1 hi, 0 none.
    let mut side = 0i8;
    let mut stalled = 0u8;
    for _ in 0..MAX_ITERATIONS {
        let width = hi - lo;
        if width <= tol {
            return Ok(if -g_lo < g_hi { lo } else { hi });
        }
        let secant = lo - g_lo * width / (g_hi - g_lo);
        let x = if stalled >= 2 || !(secant > lo && secant < hi) {
            stalled = 0;
            lo + half * width
        } else {
            secant
        };
        if x <= lo || x >= hi {
            // Bracket is down to adjacent floats.
            return Ok(if -g_lo < g_hi { lo } else { hi });
        }
        let gx = g(x);
        if gx == T::zero() {
            return Ok(x);
        }
        if gx < T::zero() {
            lo = x;
            g_lo = gx;
            if side == -1 {
                g_hi *= half;
            }
            side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if side == 1 {
                g_lo *= half;
            }
            side = 1;
        }
        if hi - lo > half * width {
            stalled += 1;
        } else {
            stalled = 0;
        }
    }
    Err(RootFailure::Iterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = increasing_root(|x: f64| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn handles_kinked_function() {
        // Slope jumps at 0.3, root at 0.5.
        let g = |x: f64| {
            if x < 0.3 {
                0.1 * (x - 0.3) - 0.2
            } else {
                x - 0.5
            }
        };
        let r = increasing_root(g, -1.0, 2.0, 1e-14).unwrap();
        assert!((r - 0.5).abs() < 1e-13);
    }

    #[test]
    fn endpoint_roots() {
        assert_eq!(increasing_root(|x: f64| x, 0.0, 1.0, 1e-12), Ok(0.0));
        assert_eq!(increasing_root(|x: f64| x - 1.0, 0.0, 1.0, 1e-12), Ok(1.0));
    }

    #[test]
    fn reports_missing_bracket() {
        let err = increasing_root(|x: f64| x - 5.0, 0.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, RootFailure::NotBracketed { .. }));
    }

    #[test]
    fn tolerance_below_float_resolution_terminates() {
        let r = increasing_root(|x: f32| x - 0.3, 0.0, 1.0, 1e-14).unwrap();
        assert!((r - 0.3).abs() < 1e-6);
    }
}
