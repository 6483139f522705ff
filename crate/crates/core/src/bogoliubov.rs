//! Bogoliubov coefficients and created-particle spectra.
//!
//! For output mode `r` and summed mode `s`,
//!
//! ```text
//! β_rs = -½ √(r/s) ∫ dx exp(-iπ[s R(L0 x) + r x])
//! α_rs = +½ √(r/s) ∫ dx exp(-iπ[s R(L0 x) - r x])
//! ```
//!
//! over `x ∈ [t/L0 - 1, t/L0 + 1]`. The number of particles in mode `r` is
//! `N_r = Σ_s |β_rs|²` and unitarity requires `Σ_s (|α_rs|² - |β_rs|²) = 1`.
//!
//! `R` at the quadrature nodes does not depend on `(r, s)`, so one
//! [`MooreCache`] feeds the whole table. Rows for distinct `s` are computed
//! in parallel; each reduction runs in a fixed pairwise order, which keeps
//! the output bit-reproducible.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moore::{MooreCache, MooreEvaluator, DEFAULT_TOL_T};
use crate::quadrature::{QuadratureGrid, QuadratureSpec};
use crate::scalar::Real;
use crate::summation::pairwise_sum;
use crate::trajectory::MirrorLaw;

/// Occupations below this are quadrature noise.
pub const SPECTRUM_FLOOR: f64 = 1e-12;
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-3;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_ESCALATIONS: usize = 3;

/// `(β sums, α sums)` over `r` for one `s`.
type RowSums<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// Nodes per block in the inner accumulation loop.
const BLOCK: usize = 256;

/// `n_max` default: 40 for `L0 = 1`, 80 for `L0 = 4`.
pub fn default_n_max(rest_length: f64) -> usize {
    (20.0 * rest_length).ceil().max(40.0) as usize
}

pub fn default_s_max(n_max: usize) -> usize {
    (8 * n_max).max(64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub n_max: usize,
    pub s_max: usize,
}

/// Coefficients for a fixed output mode `r`, indexed by `s = 1..=s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovRow<T> {
    pub out_mode: usize,
    pub alphas: Vec<Complex<T>>,
    pub betas: Vec<Complex<T>>,
}

impl<T: Real> BogoliubovRow<T> {
    pub fn s_max(&self) -> usize {
        self.betas.len()
    }

    pub fn occupation(&self) -> T {
        let sq: Vec<T> = self.betas.iter().map(|b| b.norm_sqr()).collect();
        pairwise_sum(&sq)
    }

    /// `|Σ_s (|α|² - |β|²) - 1|`.
    pub fn unitarity_defect(&self) -> T {
        let terms: Vec<T> = self
            .alphas
            .iter()
            .zip(&self.betas)
            .map(|(a, b)| a.norm_sqr() - b.norm_sqr())
            .collect();
        (pairwise_sum(&terms) - T::one()).abs()
    }
}

/// `e^{-iπ y}` with `y` reduced modulo 2 first.
#[inline]
fn unit_phase<T: Real>(y: T) -> Complex<T> {
    let two = T::lit(2.0);
    let reduced = y - two * (y / two).floor();
    let (sin, cos) = (T::PI() * reduced).sin_cos();
    Complex::new(cos, -sin)
}

fn check_alignment<T: Real>(
    cache: &MooreCache<T>,
    grid: &QuadratureGrid<T>,
    law: &MirrorLaw<T>,
) -> Result<()> {
    let l0 = law.rest_length();
    let (glo, ghi) = grid.window();
    let (clo, chi) = cache.window();
    let slack = T::lit(1e-12) * (T::one() + ghi.abs()) * l0;
    if (clo - glo * l0).abs() > slack || (chi - ghi * l0).abs() > slack {
        return Err(Error::WindowMismatch {
            cache_lo: clo.to_f64_lossy(),
            cache_hi: chi.to_f64_lossy(),
            grid_lo: (glo * l0).to_f64_lossy(),
            grid_hi: (ghi * l0).to_f64_lossy(),
        });
    }
    if cache.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "cache has {} nodes but the grid has {}",
            cache.len(),
            grid.len()
        )));
    }
    Ok(())
}

fn prefactor<T: Real>(r: usize, s: usize) -> T {
    let r = T::from_usize(r).expect("mode index fits");
    let s = T::from_usize(s).expect("mode index fits");
    T::lit(0.5) * (r / s).sqrt()
}

/// All `α_rs`, `β_rs` for `r <= n_max`, `s <= s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    n_max: usize,
    s_max: usize,
    /// Row-major in `r`: entry `(r-1) * s_max + (s-1)`.
    alphas: Vec<Complex<T>>,
    betas: Vec<Complex<T>>,
}

impl<T: Real> CoefficientTable<T> {
    pub fn compute(
        cache: &MooreCache<T>,
        grid: &QuadratureGrid<T>,
        law: &MirrorLaw<T>,
        n_max: usize,
        s_max: usize,
    ) -> Result<Self> {
        check_alignment(cache, grid, law)?;
        if n_max == 0 || s_max == 0 {
            return Err(Error::InvalidArgument(
                "n_max and s_max must be positive".into(),
            ));
        }
        let x = grid.nodes();
        let w = grid.weights();
        let rv = cache.values();
        let unit: Vec<Complex<T>> = x.iter().map(|&x| unit_phase(x)).collect();

        // Per s: (Σ_j w e^{-iπ(sR+rx)}, Σ_j w e^{-iπ(sR-rx)}) for each r.
        let sums: Vec<RowSums<T>> = (1..=s_max)
            .into_par_iter()
            .map(|s| {
                let sf = T::from_usize(s).expect("s fits");
                let blocks = x.len().div_ceil(BLOCK);
                let mut beta_blocks = vec![Complex::new(T::zero(), T::zero()); blocks * n_max];
                let mut alpha_blocks = beta_blocks.clone();
                for b in 0..blocks {
                    let pb = &mut beta_blocks[b * n_max..(b + 1) * n_max];
                    let pa = &mut alpha_blocks[b * n_max..(b + 1) * n_max];
                    for j in b * BLOCK..((b + 1) * BLOCK).min(x.len()) {
                        let e = unit_phase(sf * rv[j]) * w[j];
                        let u = unit[j];
                        let mut p = u;
                        for r in 0..n_max {
                            pb[r] += e * p;
                            pa[r] += e * p.conj();
                            p *= u;
                        }
                    }
                }
                let reduce = |blocks_flat: &[Complex<T>]| -> Vec<Complex<T>> {
                    (0..n_max)
                        .map(|r| {
                            let col: Vec<Complex<T>> =
                                (0..blocks).map(|b| blocks_flat[b * n_max + r]).collect();
                            pairwise_sum(&col)
                        })
                        .collect()
                };
                (reduce(&beta_blocks), reduce(&alpha_blocks))
            })
            .collect();

        let zero = Complex::new(T::zero(), T::zero());
        let mut alphas = vec![zero; n_max * s_max];
        let mut betas = vec![zero; n_max * s_max];
        for (si, (bsum, asum)) in sums.into_iter().enumerate() {
            let s = si + 1;
            for r in 1..=n_max {
                let c = prefactor::<T>(r, s);
                betas[(r - 1) * s_max + si] = bsum[r - 1] * (-c);
                alphas[(r - 1) * s_max + si] = asum[r - 1] * c;
            }
        }
        Ok(Self {
            n_max,
            s_max,
            alphas,
            betas,
        })
    }

    pub fn truncation(&self) -> Truncation {
        Truncation {
            n_max: self.n_max,
            s_max: self.s_max,
        }
    }

    fn index(&self, r: usize, s: usize) -> usize {
        assert!(
            (1..=self.n_max).contains(&r) && (1..=self.s_max).contains(&s),
            "mode ({r}, {s}) outside table {}x{}",
            self.n_max,
            self.s_max
        );
        (r - 1) * self.s_max + (s - 1)
    }

    pub fn alpha(&self, r: usize, s: usize) -> Complex<T> {
        self.alphas[self.index(r, s)]
    }

    pub fn beta(&self, r: usize, s: usize) -> Complex<T> {
        self.betas[self.index(r, s)]
    }

    pub fn row(&self, r: usize) -> BogoliubovRow<T> {
        let start = self.index(r, 1);
        BogoliubovRow {
            out_mode: r,
            alphas: self.alphas[start..start + self.s_max].to_vec(),
            betas: self.betas[start..start + self.s_max].to_vec(),
        }
    }

    /// `Σ_{s <= s_upto} |β_rs|²`.
    pub fn occupation_upto(&self, r: usize, s_upto: usize) -> T {
        let start = self.index(r, 1);
        let sq: Vec<T> = self.betas[start..start + s_upto.min(self.s_max)]
            .iter()
            .map(|b| b.norm_sqr())
            .collect();
        pairwise_sum(&sq)
    }

    pub fn occupation(&self, r: usize) -> T {
        self.occupation_upto(r, self.s_max)
    }

    pub fn unitarity_defect(&self, r: usize) -> T {
        self.row(r).unitarity_defect()
    }
}

/// Single `(α_rs, β_rs)` pair by direct quadrature over the cached nodes.
pub fn coefficient_pair<T: Real>(
    cache: &MooreCache<T>,
    grid: &QuadratureGrid<T>,
    law: &MirrorLaw<T>,
    r: usize,
    s: usize,
) -> Result<(Complex<T>, Complex<T>)> {
    check_alignment(cache, grid, law)?;
    if r == 0 || s == 0 {
        return Err(Error::InvalidArgument("mode indices start at 1".into()));
    }
    let rf = T::from_usize(r).expect("r fits");
    let sf = T::from_usize(s).expect("s fits");
    let (b_terms, a_terms): (Vec<_>, Vec<_>) = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(cache.values())
        .map(|((&x, &w), &rz)| {
            let e = unit_phase(sf * rz) * w;
            let p = unit_phase(rf * x);
            (e * p, e * p.conj())
        })
        .unzip();
    let c = prefactor::<T>(r, s);
    Ok((pairwise_sum(&a_terms) * c, pairwise_sum(&b_terms) * (-c)))
}

/// `Σ_{s=1}^{s_max} |β_rs|²`.
pub fn mode_occupation<T: Real>(
    cache: &MooreCache<T>,
    grid: &QuadratureGrid<T>,
    law: &MirrorLaw<T>,
    r: usize,
    s_max: usize,
) -> Result<T> {
    let terms = (1..=s_max)
        .map(|s| coefficient_pair(cache, grid, law, r, s).map(|(_, b)| b.norm_sqr()))
        .collect::<Result<Vec<T>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `|Σ_{s=1}^{s_max} (|α_ms|² - |β_ms|²) - 1|`.
pub fn unitarity_defect<T: Real>(
    cache: &MooreCache<T>,
    grid: &QuadratureGrid<T>,
    law: &MirrorLaw<T>,
    m: usize,
    s_max: usize,
) -> Result<T> {
    let terms = (1..=s_max)
        .map(|s| coefficient_pair(cache, grid, law, m, s).map(|(a, b)| a.norm_sqr() - b.norm_sqr()))
        .collect::<Result<Vec<T>>>()?;
    Ok((pairwise_sum(&terms) - T::one()).abs())
}

/// Truncation, resolution and acceptance thresholds for a spectrum run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSettings<T> {
    pub n_max: usize,
    pub s_max: usize,
    pub quadrature: QuadratureSpec<T>,
    pub tol_t: T,
    pub unitarity_tol: T,
    pub convergence_tol: T,
    pub max_escalations: usize,
}

impl<T: Real> SpectrumSettings<T> {
    /// Defaults for a law: coefficients at `t = T`, `n_max` from `L0`.
    pub fn for_law(law: &MirrorLaw<T>) -> Self {
        let n_max = default_n_max(law.rest_length().to_f64_lossy());
        Self {
            n_max,
            s_max: default_s_max(n_max),
            quadrature: QuadratureSpec::new(law.duration()),
            tol_t: T::lit(DEFAULT_TOL_T),
            unitarity_tol: T::lit(DEFAULT_UNITARITY_TOL),
            convergence_tol: T::lit(DEFAULT_CONVERGENCE_TOL),
            max_escalations: DEFAULT_MAX_ESCALATIONS,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self.s_max = default_s_max(n_max);
        self
    }
}

/// Grid, Moore cache and coefficient table for one truncation.
#[derive(Debug, Clone)]
pub struct Evaluation<T> {
    pub grid: QuadratureGrid<T>,
    pub cache: MooreCache<T>,
    pub table: CoefficientTable<T>,
}

/// Builds grid, cache and table without any escalation.
pub fn evaluate<T: Real>(
    law: &MirrorLaw<T>,
    quadrature: &QuadratureSpec<T>,
    tol_t: T,
    truncation: Truncation,
) -> Result<Evaluation<T>> {
    let evaluator = MooreEvaluator::with_tolerance(*law, tol_t)?;
    let grid = QuadratureGrid::build(&evaluator, quadrature, truncation.s_max, truncation.n_max)?;
    let l0 = law.rest_length();
    let (lo, hi) = grid.window();
    let cache = MooreCache::build(&evaluator, (lo * l0, hi * l0), &grid.abscissae(l0))?;
    let table = CoefficientTable::compute(&cache, &grid, law, truncation.n_max, truncation.s_max)?;
    Ok(Evaluation { grid, cache, table })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    pub law: MirrorLaw<T>,
    /// `N_n` for `n = 1..=n_max` (index `n - 1`).
    pub occupations: Vec<T>,
    pub total: T,
    /// Worst row defect over `m = 1..=n_max`.
    pub unitarity_defect: T,
    pub truncation: Truncation,
    pub quadrature: QuadratureSpec<T>,
    /// Largest relative change of any `N_n` above the floor between
    /// `s_max / 2` and `s_max`.
    pub truncation_change: T,
    pub converged: bool,
    pub escalations: usize,
    pub nodes: usize,
    pub max_slope: T,
}

impl<T: Real> SpectrumResult<T> {
    pub fn occupation(&self, n: usize) -> T {
        self.occupations[n - 1]
    }
}

/// Spectrum `N_n`, `n = 1..=n_max`, doubling `s_max` until the unitarity
/// defect and the truncation change are both under tolerance. Runs that
/// exhaust the escalation budget come back with `converged = false`.
pub fn spectrum<T: Real>(
    law: &MirrorLaw<T>,
    settings: &SpectrumSettings<T>,
) -> Result<SpectrumResult<T>> {
    let q = settings.quadrature;
    let slack = T::lit(1e-12) * (T::one() + law.duration());
    if q.t_eval < law.duration() - slack {
        return Err(Error::InvalidArgument(format!(
            "t_eval = {} precedes the end of motion T = {}",
            q.t_eval,
            law.duration()
        )));
    }
    if settings.n_max == 0 || settings.s_max < 2 {
        return Err(Error::InvalidArgument(
            "need n_max >= 1 and s_max >= 2".into(),
        ));
    }
    let floor = T::lit(SPECTRUM_FLOOR);
    let mut s_max = settings.s_max;
    let mut escalations = 0;
    loop {
        let truncation = Truncation {
            n_max: settings.n_max,
            s_max,
        };
        let eval = evaluate(law, &q, settings.tol_t, truncation)?;
        let table = &eval.table;
        let occupations: Vec<T> = (1..=settings.n_max).map(|r| table.occupation(r)).collect();
        let truncation_change = (1..=settings.n_max)
            .filter(|&r| occupations[r - 1] > floor)
            .map(|r| {
                let full = occupations[r - 1];
                ((full - table.occupation_upto(r, s_max / 2)) / full).abs()
            })
            .fold(T::zero(), T::max);
        let unitarity_defect = (1..=settings.n_max)
            .map(|r| table.unitarity_defect(r))
            .fold(T::zero(), T::max);
        let converged = unitarity_defect < settings.unitarity_tol
            && truncation_change < settings.convergence_tol;
        if converged || escalations >= settings.max_escalations {
            return Ok(SpectrumResult {
                law: *law,
                total: pairwise_sum(&occupations),
                occupations,
                unitarity_defect,
                truncation,
                quadrature: q,
                truncation_change,
                converged,
                escalations,
                nodes: eval.grid.len(),
                max_slope: eval.grid.max_slope(),
            });
        }
        s_max *= 2;
        escalations += 1;
    }
}

/// Total created particles `Σ_{n<=n_max} N_n`, with the convergence flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalParticles<T> {
    pub total: T,
    pub converged: bool,
    pub unitarity_defect: T,
}

pub fn total_particles<T: Real>(
    law: &MirrorLaw<T>,
    settings: &SpectrumSettings<T>,
) -> Result<TotalParticles<T>> {
    let s = spectrum(law, settings)?;
    Ok(TotalParticles {
        total: s.total,
        converged: s.converged,
        unitarity_defect: s.unitarity_defect,
    })
}

/// `N_3 / N_1` for a law with `T = 2 L0`.
pub fn band_ratio<T: Real>(law: &MirrorLaw<T>, settings: &SpectrumSettings<T>) -> Result<T> {
    band_ratio_from(&spectrum(law, &ratio_settings(law, settings)?)?)
}

pub(crate) fn ratio_settings<T: Real>(
    law: &MirrorLaw<T>,
    settings: &SpectrumSettings<T>,
) -> Result<SpectrumSettings<T>> {
    let l0 = law.rest_length();
    if (law.duration() - T::lit(2.0) * l0).abs() > T::lit(1e-9) * l0 {
        return Err(Error::InvalidArgument(format!(
            "band ratio needs T = 2 L0, got T = {} with L0 = {l0}",
            law.duration()
        )));
    }
    let mut s = *settings;
    if s.n_max < 3 {
        s = s.with_n_max(3);
    }
    Ok(s)
}

/// `N_3 / N_1` from a finished spectrum.
pub fn band_ratio_from<T: Real>(spectrum: &SpectrumResult<T>) -> Result<T> {
    let n1 = spectrum.occupation(1);
    if !(n1 > T::lit(SPECTRUM_FLOOR)) {
        return Err(Error::UndefinedRatio {
            n1: n1.to_f64_lossy(),
        });
    }
    Ok(spectrum.occupation(3) / n1)
}
