//! Grid-valued covariate densities: Gaussian kernel estimates and reference laws.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::quadrature::trapezoid;
use crate::numerics::stats;

pub const DEFAULT_GRID_POINTS: usize = 512;

/// A covariate density tabulated on an ascending grid.
///
/// The tabulated values are rescaled so that their trapezoidal integral is
/// exactly one; every `∫ f(s) h(s) ds` in the crate is the trapezoidal sum on
/// this grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateDensity {
    sample: Vec<f64>,
    bandwidth: f64,
    grid: Vec<f64>,
    density: Vec<f64>,
}

/// Silverman's rule of thumb, `0.9 min(sd, IQR/1.34) n^(-1/5)`.
pub fn silverman_bandwidth(sample: &[f64]) -> f64 {
    let sd = stats::std_dev(sample);
    let iqr = stats::quantile(sample, 0.75) - stats::quantile(sample, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * (sample.len() as f64).powf(-0.2)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Gaussian kernel density estimate with Silverman bandwidth on a 512-point
/// grid spanning `[min - 3 bw, max + 3 bw]`.
pub fn kde(sample: &[f64]) -> Result<CovariateDensity> {
    kde_with_grid(sample, DEFAULT_GRID_POINTS)
}

pub fn kde_with_grid(sample: &[f64], points: usize) -> Result<CovariateDensity> {
    if sample.len() < 2 || sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateSample);
    }
    let bw = silverman_bandwidth(sample);
    if !(bw > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * bw;
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * bw;
    let grid = linspace(lo, hi, points.max(3));
    let norm = 1.0 / (sample.len() as f64 * bw * (2.0 * PI).sqrt());
    let density: Vec<f64> = grid
        .iter()
        .map(|s| {
            norm * sample
                .iter()
                .map(|x| (-0.5 * ((s - x) / bw).powi(2)).exp())
                .sum::<f64>()
        })
        .collect();
    CovariateDensity::assemble(sample.to_vec(), bw, grid, density)
}

impl CovariateDensity {
    fn assemble(sample: Vec<f64>, bandwidth: f64, grid: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        let mass = trapezoid(&grid, &density);
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidInput("density has no mass on its grid".into()));
        }
        let density = density.into_iter().map(|v| v / mass).collect();
        Ok(Self {
            sample,
            bandwidth,
            grid,
            density,
        })
    }

    /// Tabulate an arbitrary non-negative density on a grid.
    pub fn from_grid(grid: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if grid.len() != density.len() || grid.len() < 2 {
            return Err(Error::InvalidInput("grid and density lengths differ".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid must be strictly increasing".into()));
        }
        if density.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidInput("density values must be non-negative".into()));
        }
        Self::assemble(Vec::new(), 0.0, grid, density)
    }

    /// Standard normal density on `[-8, 8]`.
    pub fn standard_normal(points: usize) -> Self {
        Self::truncated_normal(8.0, points)
    }

    /// Standard normal density restricted to `[-half_width, half_width]`.
    ///
    /// With a positive shape and a covariate in the location, the integrated
    /// tail is infinite below the largest covariate-specific lower endpoint,
    /// so the reach of the grid matters there.
    pub fn truncated_normal(half_width: f64, points: usize) -> Self {
        let grid = linspace(-half_width, half_width, points.max(3));
        let density = grid
            .iter()
            .map(|s| (-0.5 * s * s).exp() / (2.0 * PI).sqrt())
            .collect();
        Self::assemble(Vec::new(), 0.0, grid, density).expect("normal density has mass")
    }

    /// A unit point mass at `s`, as a narrow triangle whose trapezoidal
    /// integrals reproduce `f(s)` exactly.
    pub fn point_mass(s: f64) -> Self {
        let d = 1e-6 * (1.0 + s.abs());
        Self::from_grid(vec![s - d, s, s + d], vec![0.0, 1.0, 0.0]).expect("valid triangle")
    }

    pub fn sample(&self) -> &[f64] {
        &self.sample
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.density
    }

    /// `∫ f(s) h(s) ds` by the trapezoidal rule on the grid.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut total = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for (&s, &h) in self.grid.iter().zip(&self.density) {
            let v = if h > 0.0 { f(s) * h } else { 0.0 };
            if let Some((ps, pv)) = prev {
                total += 0.5 * (s - ps) * (pv + v);
            }
            prev = Some((s, v));
        }
        total
    }

    pub fn mean(&self) -> f64 {
        self.integrate(|s| s)
    }

    /// Density at `s` by linear interpolation of the grid (zero outside).
    pub fn at(&self, s: f64) -> f64 {
        let g = &self.grid;
        if s < g[0] || s > g[g.len() - 1] {
            return 0.0;
        }
        let i = g.partition_point(|x| *x <= s).min(g.len() - 1).max(1);
        let (x0, x1) = (g[i - 1], g[i]);
        let f = (s - x0) / (x1 - x0);
        self.density[i - 1] + f * (self.density[i] - self.density[i - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn normal_sample_recovers_peak() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let h = kde(&xs).unwrap();
        assert!((h.at(0.0) - 0.3989).abs() < 0.01, "{}", h.at(0.0));
    }

    #[test]
    fn grid_integrates_to_one() {
        for sample in [vec![-1.0, 1.0], vec![0.3, 0.1, 2.0, 5.0, -3.0]] {
            let h = kde(&sample).unwrap();
            assert!((trapezoid(h.grid(), h.values()) - 1.0).abs() < 1e-4);
            assert!(h.values().iter().all(|v| *v >= 0.0));
            assert_eq!(h.grid().len(), 512);
        }
    }

    #[test]
    fn two_point_sample_symmetric() {
        let h = kde(&[-1.0, 1.0]).unwrap();
        let v = h.values();
        let n = v.len();
        for i in 0..n {
            assert!((v[i] - v[n - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_sample_is_degenerate() {
        assert_eq!(kde(&[2.0, 2.0, 2.0]), Err(Error::DegenerateSample));
        assert_eq!(kde(&[2.0]), Err(Error::DegenerateSample));
    }

    #[test]
    fn point_mass_integrates_exactly() {
        let h = CovariateDensity::point_mass(0.7);
        assert!((h.integrate(|s| s * s) - 0.49).abs() < 1e-15);
    }

    #[test]
    fn standard_normal_moments() {
        let h = CovariateDensity::standard_normal(512);
        assert!(h.mean().abs() < 1e-14);
        assert!((h.integrate(|s| s * s) - 1.0).abs() < 1e-10);
    }
}
