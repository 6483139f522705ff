//! Exact particle creation by the dynamical Casimir effect in a 1D cavity
//! with one oscillating mirror.
//!
//! The pipeline is: [`trajectory::MirrorLaw`] → Moore function `R(z)` by
//! backward ray tracing ([`moore`]) → Bogoliubov coefficients by composite
//! Gauss–Legendre quadrature over a shared Moore cache ([`bogoliubov`]) →
//! spectra, totals and the `N3/N1` band ratio. [`analytic`] holds the
//! perturbative elliptic-integral baselines and [`scenarios`] the declarative
//! runners behind the `dce` CLI.
//!
//! The numerical core is generic over the scalar (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the scenarios use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bogoliubov;
pub mod error;
pub mod moore;
pub mod quadrature;
mod roots;
pub mod scalar;
pub mod scenarios;
pub mod summation;
pub mod trajectory;

pub use error::{Error, Result};
pub use scalar::Real;

pub type MirrorLaw = trajectory::MirrorLaw<f64>;
pub type MirrorLawF32 = trajectory::MirrorLaw<f32>;
pub type MooreEvaluator = moore::MooreEvaluator<f64>;
pub type MooreCache = moore::MooreCache<f64>;
pub type ReflectionTrace = moore::ReflectionTrace<f64>;
pub type QuadratureSpec = quadrature::QuadratureSpec<f64>;
pub type QuadratureGrid = quadrature::QuadratureGrid<f64>;
pub type BogoliubovRow = bogoliubov::BogoliubovRow<f64>;
pub type CoefficientTable = bogoliubov::CoefficientTable<f64>;
pub type SpectrumSettings = bogoliubov::SpectrumSettings<f64>;
pub type SpectrumResult = bogoliubov::SpectrumResult<f64>;
pub type EllipticModulus = analytic::EllipticModulus<f64>;
pub type Complex = num_complex::Complex<f64>;
