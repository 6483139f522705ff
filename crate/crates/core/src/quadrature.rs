//! Composite Gauss–Legendre grid for the coefficient integrals.
//!
//! The integrands are pure phases `exp(-iπ[s R(L0 x) ± r x])`. Their local
//! frequency is `s L0 R'(L0 x) + r`, so panels are sized from the local slope
//! of `R`: every panel spans at most `1 / panels_per_period` of the fastest
//! local oscillation (`s = s_max`, `r = n_max`). Panel edges also land on the
//! kinks of `R`, keeping each panel's integrand smooth.
//!
//! Since `∫ R' dz = 2` over the window, the panel count stays close to
//! `panels_per_period · (s_max + n_max)` no matter how steep `R` becomes.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};
use crate::moore::MooreEvaluator;
use crate::scalar::Real;

pub const DEFAULT_PANELS_PER_PERIOD: f64 = 8.0;
pub const DEFAULT_POINTS_PER_PANEL: usize = 8;

/// Resolution settings and the instant `t` at which coefficients are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub panels_per_period: T,
    pub points_per_panel: usize,
    pub t_eval: T,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(t_eval: T) -> Self {
        Self {
            panels_per_period: T::lit(DEFAULT_PANELS_PER_PERIOD),
            points_per_panel: DEFAULT_POINTS_PER_PANEL,
            t_eval,
        }
    }

    /// Same spec with `factor` times as many panels.
    pub fn refined(self, factor: T) -> Self {
        Self {
            panels_per_period: self.panels_per_period * factor,
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.panels_per_period > T::zero()) || !self.panels_per_period.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "panels_per_period = {} must be positive",
                self.panels_per_period
            )));
        }
        if self.points_per_panel == 0 {
            return Err(Error::InvalidArgument(
                "points_per_panel must be positive".into(),
            ));
        }
        if !self.t_eval.is_finite() {
            return Err(Error::InvalidArgument("t_eval must be finite".into()));
        }
        Ok(())
    }
}

/// Nodes `x_j` and weights `w_j` over `[t/L0 - 1, t/L0 + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid<T> {
    window: (T, T),
    nodes: Vec<T>,
    weights: Vec<T>,
    panels: usize,
    max_slope: T,
    s_max: usize,
    n_max: usize,
}

impl<T: Real> QuadratureGrid<T> {
    /// Builds a grid resolving every `(r, s)` integrand with `r <= n_max`,
    /// `s <= s_max`.
    pub fn build(
        evaluator: &MooreEvaluator<T>,
        spec: &QuadratureSpec<T>,
        s_max: usize,
        n_max: usize,
    ) -> Result<Self> {
        spec.validate()?;
        if s_max == 0 || n_max == 0 {
            return Err(Error::InvalidArgument(
                "s_max and n_max must be positive".into(),
            ));
        }
        let l0 = evaluator.law().rest_length();
        let centre = spec.t_eval / l0;
        let (x_lo, x_hi) = (centre - T::one(), centre + T::one());

        // Kinks are located to the root tolerance; ones that land within a
        // hair of an existing break would only create sliver panels.
        let hair = T::lit(1e-9);
        let mut breaks = vec![x_lo];
        for k in evaluator.kinks(spec.t_eval - l0, spec.t_eval + l0)? {
            let x = k / l0;
            let last = *breaks.last().expect("non-empty");
            if x - last > hair && x_hi - x > hair {
                breaks.push(x);
            }
        }
        breaks.push(x_hi);

        let s = T::from_usize(s_max).expect("s_max fits");
        let r = T::from_usize(n_max).expect("n_max fits");
        let mut max_slope = T::zero();
        // Phase advance per unit x, in units of π.
        let mut rate = |x: T| -> Result<T> {
            let slope = evaluator.r_and_slope(l0 * x)?.1 * l0;
            max_slope = max_slope.max(slope);
            Ok(s * slope + r)
        };
        // One full period in x spans 2 / rate.
        let width_for = |rate: T| T::lit(2.0) / (rate * spec.panels_per_period);

        let mut edges = vec![x_lo];
        for seg in breaks.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let mut x = a;
            while x < b {
                let rate0 = rate(x)?;
                let mut h = width_for(rate0);
                let mut end = (x + h).min(b);
                for _ in 0..16 {
                    let mid = x + (end - x) * T::lit(0.5);
                    let worst = rate0.max(rate(mid)?).max(rate(end)?);
                    let fitted = width_for(worst);
                    if fitted >= (end - x) * T::lit(0.999) {
                        break;
                    }
                    h = fitted;
                    end = (x + h).min(b);
                }
                // Absorb a leftover sliver into this panel.
                if b - end < T::lit(0.01) * (end - x) {
                    end = b;
                }
                edges.push(end);
                x = end;
            }
        }

        let rule =
            GaussLegendre::new(NonZeroUsize::new(spec.points_per_panel).expect("validated above"));
        let mut pairs: Vec<(T, T)> = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(n, w)| (T::lit(n), T::lit(w)))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));

        let panels = edges.len() - 1;
        let mut nodes = Vec::with_capacity(panels * pairs.len());
        let mut weights = Vec::with_capacity(panels * pairs.len());
        let half = T::lit(0.5);
        for e in edges.windows(2) {
            let (mid, half_width) = ((e[0] + e[1]) * half, (e[1] - e[0]) * half);
            for &(n, w) in &pairs {
                nodes.push(mid + half_width * n);
                weights.push(half_width * w);
            }
        }

        Ok(Self {
            window: (x_lo, x_hi),
            nodes,
            weights,
            panels,
            max_slope,
            s_max,
            n_max,
        })
    }

    /// Window in the integration variable `x`.
    pub fn window(&self) -> (T, T) {
        self.window
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest `L0 R'` seen while sizing panels.
    pub fn max_slope(&self) -> T {
        self.max_slope
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The Moore-function abscissae `z_j = L0 x_j` this grid consumes.
    pub fn abscissae(&self, rest_length: T) -> Vec<T> {
        self.nodes.iter().map(|&x| x * rest_length).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::MirrorLaw;
    use approx::assert_relative_eq;

    #[test]
    fn static_grid_is_uniform_and_exact() {
        let ev = MooreEvaluator::new(MirrorLaw::static_cavity(1.0).unwrap());
        let g = QuadratureGrid::build(&ev, &QuadratureSpec::new(0.0), 4, 2).unwrap();
        assert_eq!(g.window(), (-1.0, 1.0));
        assert_relative_eq!(g.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-13);
        // Rate 4 + 2 = 6 → 6 periods × 8 panels over the window.
        assert_eq!(g.panels(), 48);
        let cos_int: f64 = g
            .nodes()
            .iter()
            .zip(g.weights())
            .map(|(x, w)| w * (std::f64::consts::PI * 5.0 * x).cos())
            .sum();
        assert!(cos_int.abs() < 1e-14);
    }

    #[test]
    fn panel_count_is_bounded_for_steep_moore_function() {
        let law = MirrorLaw::new(1.0, 0.1, 1.0, 6.0).unwrap();
        let ev = MooreEvaluator::new(law);
        let spec = QuadratureSpec::new(6.0);
        let g = QuadratureGrid::build(&ev, &spec, 64, 8).unwrap();
        assert!(g.max_slope() > 4.0);
        // 8 · (64 + 8) = 576 periods' worth, plus slack for kinks and growth.
        assert!(g.panels() < 2 * 576, "{} panels", g.panels());
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn panel_edges_contain_kinks() {
        let law = MirrorLaw::new(1.0, 0.1, 1.0, 2.0).unwrap();
        let ev = MooreEvaluator::new(law);
        let g = QuadratureGrid::build(&ev, &QuadratureSpec::new(2.0), 8, 2).unwrap();
        // Kink at z = 3 is the right window edge; z = 1 the left.
        assert_relative_eq!(g.window().0, 1.0);
        assert_relative_eq!(g.window().1, 3.0);
        assert_relative_eq!(g.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        let ev = MooreEvaluator::new(MirrorLaw::static_cavity(1.0).unwrap());
        let mut spec = QuadratureSpec::new(0.0);
        spec.points_per_panel = 0;
        assert!(QuadratureGrid::build(&ev, &spec, 4, 4).is_err());
        assert!(QuadratureGrid::build(&ev, &QuadratureSpec::new(0.0), 0, 4).is_err());
    }
}
