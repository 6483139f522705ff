use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mirror law: {0}")]
    InvalidLaw(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Root of `t + L(t) = z` not bracketed. Cannot happen for a valid law; the
    /// payload carries enough to reproduce.
    #[error("reflection root not bracketed for z = {z}: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    Bracket {
        z: f64,
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("root finder did not converge for z = {z} after {iterations} iterations")]
    RootIterations { z: f64, iterations: usize },

    #[error("reflection chain from z = {z} exceeded the cap of {cap} reflections")]
    ReflectionCap { z: f64, cap: usize },

    /// Cached Moore values must increase strictly; a violation means the root
    /// tolerance is too loose for the node spacing.
    #[error("Moore function not increasing at node {index}: R({z_prev}) = {r_prev}, R({z}) = {r}")]
    NonMonotone {
        index: usize,
        z_prev: f64,
        r_prev: f64,
        z: f64,
        r: f64,
    },

    #[error("cache window [{cache_lo}, {cache_hi}] does not match quadrature window [{grid_lo}, {grid_hi}]")]
    WindowMismatch {
        cache_lo: f64,
        cache_hi: f64,
        grid_lo: f64,
        grid_hi: f64,
    },

    #[error("elliptic modulus {0} outside [0, 1)")]
    EllipticDomain(f64),

    #[error("band ratio undefined: N1 = {n1} is below the spectrum floor")]
    UndefinedRatio { n1: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
