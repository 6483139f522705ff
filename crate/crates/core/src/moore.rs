//! Moore function `R(z)` by backward ray tracing.
//!
//! A null line with coordinate `z > L0` is followed back to the mirror: it
//! left the mirror at the instant `t` solving `t + L(t) = z`, having arrived
//! there along the line `z' = t - L(t)`. Each reflection adds 2 to `R`, so
//! after `n` reflections the chain lands in the static zone `z_n <= L0` where
//! `R(z) = z / L0`, giving `R(z) = 2n + (z - 2 Σ L(t_i)) / L0`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::{increasing_root, RootFailure};
use crate::scalar::Real;
use crate::trajectory::MirrorLaw;

/// Default absolute tolerance on reflection instants.
pub const DEFAULT_TOL_T: f64 = 1e-12;

/// The chain of reflections that connects a null line to the static zone.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionTrace<T> {
    pub z: T,
    /// Reflection instants, strictly decreasing.
    pub instants: Vec<T>,
    /// `z - 2 Σ L(t_i)`; always `<= L0`.
    pub terminal_z: T,
}

impl<T: Real> ReflectionTrace<T> {
    /// Number of reflections `n(z)`.
    pub fn count(&self) -> usize {
        self.instants.len()
    }
}

/// Evaluates `R(z)` for one mirror law.
#[derive(Debug, Clone, Copy)]
pub struct MooreEvaluator<T> {
    law: MirrorLaw<T>,
    tol_t: T,
}

impl<T: Real> MooreEvaluator<T> {
    pub fn new(law: MirrorLaw<T>) -> Self {
        Self {
            law,
            tol_t: T::lit(DEFAULT_TOL_T),
        }
    }

    pub fn with_tolerance(law: MirrorLaw<T>, tol_t: T) -> Result<Self> {
        if !(tol_t > T::zero()) || !tol_t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tol_t = {tol_t} must be positive"
            )));
        }
        Ok(Self { law, tol_t })
    }

    pub fn law(&self) -> &MirrorLaw<T> {
        &self.law
    }

    pub fn tolerance(&self) -> T {
        self.tol_t
    }

    fn margin(&self, z: T) -> T {
        self.tol_t
            + T::lit(16.0)
                * T::epsilon()
                * (z.abs() + self.law.rest_length() + self.law.amplitude())
    }

    fn root_error(&self, z: T, lo: T, hi: T, failure: RootFailure<T>) -> Error {
        match failure {
            RootFailure::NotBracketed { g_lo, g_hi } => Error::Bracket {
                z: z.to_f64_lossy(),
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
                g_lo: g_lo.to_f64_lossy(),
                g_hi: g_hi.to_f64_lossy(),
            },
            RootFailure::Iterations => Error::RootIterations {
                z: z.to_f64_lossy(),
                iterations: crate::roots::MAX_ITERATIONS,
            },
        }
    }

    /// Solves `t + L(t) = z` and returns `(t, z - 2 L(t))`.
    ///
    /// `t + L(t)` is strictly increasing because `|L'| < 1`, and
    /// `|L - L0| <= a` pins the root inside `[z - L0 - a, z - L0 + a]`.
    pub fn reflect_back(&self, z: T) -> Result<(T, T)> {
        let law = &self.law;
        let l0 = law.rest_length();
        let a = law.amplitude();
        let margin = self.margin(z);
        let lo = z - l0 - a - margin;
        let hi = z - l0 + a + margin;
        let t = if a == T::zero() {
            z - l0
        } else {
            increasing_root(|t| t + law.position(t) - z, lo, hi, self.tol_t)
                .map_err(|f| self.root_error(z, lo, hi, f))?
        };
        Ok((t, z - T::lit(2.0) * law.position(t)))
    }

    /// Forward image of a null line: solves `t - L(t) = u` and returns
    /// `t + L(t)`, so that `R(result) = R(u) + 2`.
    pub fn reflect_forward(&self, u: T) -> Result<(T, T)> {
        let law = &self.law;
        let l0 = law.rest_length();
        let a = law.amplitude();
        let margin = self.margin(u);
        let lo = u + l0 - a - margin;
        let hi = u + l0 + a + margin;
        let t = if a == T::zero() {
            u + l0
        } else {
            increasing_root(|t| t - law.position(t) - u, lo, hi, self.tol_t)
                .map_err(|f| self.root_error(u, lo, hi, f))?
        };
        Ok((t, u + T::lit(2.0) * law.position(t)))
    }

    fn reflection_cap(&self, z: T) -> usize {
        let step = T::lit(2.0) * (self.law.rest_length() - self.law.amplitude());
        (z / step).ceil().to_usize().unwrap_or(usize::MAX - 8) + 8
    }

    /// Walks the chain back to the static zone, calling `visit(t_i)` per
    /// reflection. Returns `(n, terminal_z)`.
    fn walk(&self, z: T, mut visit: impl FnMut(T)) -> Result<(usize, T)> {
        let l0 = self.law.rest_length();
        let mut current = z;
        let mut count = 0usize;
        if current <= l0 {
            return Ok((0, current));
        }
        let cap = self.reflection_cap(z);
        while current > l0 {
            if count >= cap {
                return Err(Error::ReflectionCap {
                    z: z.to_f64_lossy(),
                    cap,
                });
            }
            let (t, next) = self.reflect_back(current)?;
            visit(t);
            current = next;
            count += 1;
        }
        Ok((count, current))
    }

    pub fn trace(&self, z: T) -> Result<ReflectionTrace<T>> {
        let mut instants = Vec::new();
        let (_, terminal_z) = self.walk(z, |t| instants.push(t))?;
        Ok(ReflectionTrace {
            z,
            instants,
            terminal_z,
        })
    }

    /// `R(z)`.
    pub fn r(&self, z: T) -> Result<T> {
        self.r_with_count(z).map(|(r, _)| r)
    }

    /// `R(z)` together with the number of reflections `n(z)`.
    pub fn r_with_count(&self, z: T) -> Result<(T, usize)> {
        let (n, terminal) = self.walk(z, |_| ())?;
        let two_n = T::lit(2.0) * T::from_usize(n).expect("reflection count fits");
        Ok((two_n + terminal / self.law.rest_length(), n))
    }

    /// `R(z)` and its derivative. Differentiating the chain gives
    /// `R'(z) = (1/L0) Π (1 - L'(t_i)) / (1 + L'(t_i))`.
    pub fn r_and_slope(&self, z: T) -> Result<(T, T)> {
        let law = self.law;
        let mut slope = T::one() / law.rest_length();
        let (n, terminal) = self.walk(z, |t| {
            let v = law.velocity(t);
            slope = slope * (T::one() - v) / (T::one() + v);
        })?;
        let two_n = T::lit(2.0) * T::from_usize(n).expect("reflection count fits");
        Ok((two_n + terminal / law.rest_length(), slope))
    }

    /// Points in `[lo, hi]` where `R'` is discontinuous.
    ///
    /// `L'` jumps only at `t = 0` and `t = T`; their outgoing null lines
    /// `L0` and `T + L0` seed the set, and every later reflection of a kink
    /// line is again a kink. Returned sorted and de-duplicated.
    pub fn kinks(&self, lo: T, hi: T) -> Result<Vec<T>> {
        let law = self.law;
        if law.is_static() {
            return Ok(Vec::new());
        }
        let l0 = law.rest_length();
        let mut out = Vec::new();
        for seed in [l0, law.duration() + l0] {
            let mut z = seed;
            let cap = self.reflection_cap(hi.max(z)) + 1;
            for _ in 0..cap {
                if z > hi {
                    break;
                }
                if z >= lo {
                    out.push(z);
                }
                z = self.reflect_forward(z)?.1;
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite kinks"));
        let close = T::lit(8.0) * self.tol_t + T::lit(64.0) * T::epsilon() * hi.abs();
        out.dedup_by(|b, a| {
            let merge = (*b - *a).abs() <= close;
            // Seeds are exact; forward images carry root error. Keep the later
            // one when it is the seed T + L0.
            if merge && *b == law.duration() + l0 {
                *a = *b;
            }
            merge
        });
        Ok(out)
    }
}

/// `R(z)` with the default tolerance.
pub fn moore_r<T: Real>(law: &MirrorLaw<T>, z: T) -> Result<T> {
    MooreEvaluator::new(*law).r(z)
}

/// One backward reflection with the default tolerance.
pub fn reflect_back<T: Real>(law: &MirrorLaw<T>, z: T) -> Result<(T, T)> {
    MooreEvaluator::new(*law).reflect_back(z)
}

/// `R` tabulated at fixed abscissae, shared read-only by every coefficient
/// integral that consumes those nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MooreCache<T> {
    window: (T, T),
    nodes: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> MooreCache<T> {
    /// Evaluates `R` at every abscissa (in parallel) and verifies strict
    /// monotonicity.
    pub fn build(evaluator: &MooreEvaluator<T>, window: (T, T), abscissae: &[T]) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::InvalidArgument("cache window is reversed".into()));
        }
        if abscissae.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "cache abscissae must be strictly ascending".into(),
            ));
        }
        let values = abscissae
            .par_iter()
            .map(|&z| evaluator.r(z))
            .collect::<Result<Vec<_>>>()?;
        for (i, w) in values.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::NonMonotone {
                    index: i + 1,
                    z_prev: abscissae[i].to_f64_lossy(),
                    r_prev: w[0].to_f64_lossy(),
                    z: abscissae[i + 1].to_f64_lossy(),
                    r: w[1].to_f64_lossy(),
                });
            }
        }
        Ok(Self {
            window,
            nodes: abscissae.to_vec(),
            values,
        })
    }

    pub fn window(&self) -> (T, T) {
        self.window
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
