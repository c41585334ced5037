//! Point process whose parameters depend linearly on a scalar covariate
//! (log link on the scale).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::kde::CovariateDensity;
use crate::error::{Error, Result};
use crate::evt::gev::{return_level_stationary, return_period_tail, NhppParams};
use crate::evt::likelihood::minimise_nll;
use crate::numerics::optim::NelderMeadOptions;
use crate::numerics::roots;

/// `μ(s) = μ0 + μ1 s`, `log σ(s) = σ0 + σ1 s`, `ξ(s) = ξ0 + ξ1 s`.
///
/// The same linear maps carry latent random effects in place of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Coefficients {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub xi0: f64,
    pub xi1: f64,
}

pub const COEFFICIENT_NAMES: [&str; 6] = ["mu0", "mu1", "sigma0", "sigma1", "xi0", "xi1"];

impl Coefficients {
    pub fn stationary(p: &NhppParams) -> Self {
        Self {
            mu0: p.mu,
            sigma0: p.sigma.ln(),
            xi0: p.xi,
            ..Default::default()
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.mu0, self.mu1, self.sigma0, self.sigma1, self.xi0, self.xi1]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            mu0: a[0],
            mu1: a[1],
            sigma0: a[2],
            sigma1: a[3],
            xi0: a[4],
            xi1: a[5],
        }
    }

    /// Parameters when the covariate takes value `s`.
    pub fn at(&self, s: f64) -> NhppParams {
        self.at_effects(s, s, s)
    }

    /// Parameters with a separate driver per parameter.
    pub fn at_effects(&self, r_mu: f64, r_sigma: f64, r_xi: f64) -> NhppParams {
        NhppParams {
            mu: self.mu0 + self.mu1 * r_mu,
            sigma: (self.sigma0 + self.sigma1 * r_sigma).exp(),
            xi: self.xi0 + self.xi1 * r_xi,
        }
    }

    pub fn has_effect(&self) -> bool {
        self.mu1 != 0.0 || self.sigma1 != 0.0 || self.xi1 != 0.0
    }
}

/// Covariate-dependent model plus the covariate's marginal density.
#[derive(Debug, Clone)]
pub struct CovariateNhpp {
    pub coefficients: Coefficients,
    pub density: CovariateDensity,
}

/// `∫ τ(z; s) h(s) ds`, the expected number of points above `z` per block.
pub fn integrated_tail(z: f64, m: &Coefficients, h: &CovariateDensity) -> f64 {
    h.integrate(|s| m.at(s).tail(z))
}

/// Exceedances with the covariate observed at each event.
#[derive(Debug, Clone)]
pub struct PerObservationData {
    /// `(magnitude, covariate)` pairs.
    pub exceedances: Vec<(f64, f64)>,
    pub threshold: f64,
    pub n_blocks: f64,
    pub density: CovariateDensity,
}

/// One block with a block-constant covariate.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateBlock {
    pub covariate: f64,
    /// Block length as a fraction of a standard block (1 for equal blocks).
    pub weight: f64,
    pub magnitudes: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PerBlockData {
    pub blocks: Vec<CovariateBlock>,
    pub threshold: f64,
}

impl PerBlockData {
    pub fn covariates(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.covariate).collect()
    }
}

#[derive(Debug, Clone)]
pub enum CovariateData {
    PerObservation(PerObservationData),
    PerBlock(PerBlockData),
}

fn sum_log_intensity<'a, I: Iterator<Item = (f64, NhppParams)>>(items: I) -> f64 {
    let mut total = 0.0;
    for (z, p) in items {
        let li = p.log_intensity(z);
        if !li.is_finite() {
            return f64::NEG_INFINITY;
        }
        total += li;
    }
    total
}

/// Negative log-likelihood with a covariate observed at every exceedance.
/// The exponent integrates the tail over the covariate density.
pub fn covariate_nll_per_obs(d: &PerObservationData, m: &Coefficients) -> f64 {
    let exponent = integrated_tail(d.threshold, m, &d.density);
    if !exponent.is_finite() {
        return f64::INFINITY;
    }
    let ll = sum_log_intensity(d.exceedances.iter().map(|&(z, s)| (z, m.at(s))));
    if !ll.is_finite() {
        return f64::INFINITY;
    }
    d.n_blocks * exponent - ll
}

/// Negative log-likelihood with one covariate value per block.
pub fn covariate_nll_per_block(d: &PerBlockData, m: &Coefficients) -> f64 {
    let mut nll = 0.0;
    for b in &d.blocks {
        let p = m.at(b.covariate);
        let tail = p.tail(d.threshold);
        if !tail.is_finite() {
            return f64::INFINITY;
        }
        nll += b.weight * tail;
        let ll = sum_log_intensity(b.magnitudes.iter().map(|&z| (z, p)));
        if !ll.is_finite() {
            return f64::INFINITY;
        }
        nll -= ll;
    }
    nll
}

pub fn covariate_nll(d: &CovariateData, m: &Coefficients) -> f64 {
    match d {
        CovariateData::PerObservation(d) => covariate_nll_per_obs(d, m),
        CovariateData::PerBlock(d) => covariate_nll_per_block(d, m),
    }
}

/// Maximum-likelihood fit over the coefficients flagged `free`; the others stay
/// at their `init` values. The covariance is over free coefficients, in order.
#[derive(Debug, Clone)]
pub struct CovariateFit {
    pub coefficients: Coefficients,
    pub free: [bool; 6],
    pub covariance: Option<DMatrix<f64>>,
    pub nll: f64,
    pub iterations: usize,
}

impl CovariateFit {
    pub fn free_indices(&self) -> Vec<usize> {
        (0..6).filter(|i| self.free[*i]).collect()
    }

    /// Standard error of coefficient `index` (0..6), if free and available.
    pub fn standard_error(&self, index: usize) -> Option<f64> {
        let pos = self.free_indices().iter().position(|i| *i == index)?;
        self.covariance.as_ref().map(|c| c[(pos, pos)].sqrt())
    }
}

pub const ALL_FREE: [bool; 6] = [true; 6];

pub fn fit_covariate(d: &CovariateData, init: &Coefficients, free: [bool; 6]) -> Result<CovariateFit> {
    fit_covariate_with(d, init, free, &NelderMeadOptions::default())
}

pub fn fit_covariate_with(
    d: &CovariateData,
    init: &Coefficients,
    free: [bool; 6],
    opts: &NelderMeadOptions,
) -> Result<CovariateFit> {
    let idx: Vec<usize> = (0..6).filter(|i| free[*i]).collect();
    if idx.is_empty() {
        return Err(Error::InvalidInput("no free coefficients".into()));
    }
    let base = init.to_array();
    let expand = |x: &[f64]| {
        let mut a = base;
        for (k, &i) in idx.iter().enumerate() {
            a[i] = x[k];
        }
        Coefficients::from_array(a)
    };
    let nll = |x: &[f64]| covariate_nll(d, &expand(x));
    let scale = init.sigma0.exp();
    let all_steps = [0.5 * scale, 0.5 * scale, 0.2, 0.1, 0.1, 0.05];
    let start: Vec<f64> = idx.iter().map(|&i| base[i]).collect();
    let steps: Vec<f64> = idx.iter().map(|&i| all_steps[i]).collect();
    let (x, covariance, value, iterations) =
        minimise_nll(nll, &start, &vec![false; idx.len()], &steps, opts)?;
    Ok(CovariateFit {
        coefficients: expand(&x),
        free,
        covariance,
        nll: value,
        iterations,
    })
}

/// Block-maximum cdf with the covariate integrated out: `exp(-∫ τ(z; s) h(s) ds)`.
pub fn integrated_block_cdf(z: f64, m: &Coefficients, h: &CovariateDensity) -> f64 {
    (-integrated_tail(z, m, h)).exp()
}

/// Root of `exp(-∫ τ(z; s) h(s) ds) = 1 - 1/T`.
pub fn return_level_covariate(t: f64, m: &Coefficients, h: &CovariateDensity) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::InvalidInput(format!("return period {t} must exceed 1")));
    }
    let target = 1.0 - 1.0 / t;
    let centre = m.at(h.mean());
    let z0 = return_level_stationary(t, &centre);
    let f = |z: f64| integrated_block_cdf(z, m, h) - target;
    let (a, b) = roots::grow_bracket(f, z0, centre.sigma, 80).map_err(|e| {
        Error::BracketFailure(format!(
            "return level for T={t}: {e}; started at {z0} with log y_T={}",
            return_period_tail(t).ln()
        ))
    })?;
    if a == b {
        return Ok(a);
    }
    roots::brent(f, a, b, 1e-13 * (1.0 + z0.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evt::likelihood::{stationary_nll, ThresholdedData};

    fn design(mu1: f64, xi: f64) -> Coefficients {
        Coefficients {
            mu0: 0.0,
            mu1,
            sigma0: 1.5f64.ln(),
            sigma1: 0.0,
            xi0: xi,
            xi1: 0.0,
        }
    }

    fn sample_data(h: CovariateDensity) -> PerObservationData {
        PerObservationData {
            exceedances: vec![(2.5, 0.3), (3.1, -0.4), (4.4, 1.2), (2.2, 0.0), (5.0, 0.9)],
            threshold: 2.0,
            n_blocks: 3.0,
            density: h,
        }
    }

    #[test]
    fn no_effect_matches_stationary() {
        let m = Coefficients {
            mu0: 0.4,
            sigma0: 0.2,
            xi0: 0.1,
            ..Default::default()
        };
        let d = sample_data(CovariateDensity::standard_normal(512));
        let td = ThresholdedData::new(d.exceedances.iter().map(|e| e.0).collect(), 2.0, 3.0).unwrap();
        let a = covariate_nll_per_obs(&d, &m);
        let b = stationary_nll(&td, &m.at(0.0));
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn single_block_collapse() {
        let m = design(2.5, 0.2);
        let d = PerBlockData {
            blocks: vec![CovariateBlock {
                covariate: 0.0,
                weight: 1.0,
                magnitudes: vec![2.5, 3.5],
            }],
            threshold: 2.0,
        };
        let td = ThresholdedData::new(vec![2.5, 3.5], 2.0, 1.0).unwrap();
        assert!((covariate_nll_per_block(&d, &m) - stationary_nll(&td, &m.at(0.0))).abs() < 1e-12);
    }

    #[test]
    fn identical_block_covariates_match_point_mass_density() {
        let m = design(1.3, -0.1);
        let s = 0.8;
        let mags = [vec![2.1, 2.6], vec![], vec![3.0]];
        let per_block = PerBlockData {
            blocks: mags
                .iter()
                .map(|v| CovariateBlock {
                    covariate: s,
                    weight: 1.0,
                    magnitudes: v.clone(),
                })
                .collect(),
            threshold: 2.0,
        };
        let per_obs = PerObservationData {
            exceedances: mags.iter().flatten().map(|z| (*z, s)).collect(),
            threshold: 2.0,
            n_blocks: 3.0,
            density: CovariateDensity::point_mass(s),
        };
        let a = covariate_nll_per_block(&per_block, &m);
        let b = covariate_nll_per_obs(&per_obs, &m);
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn infeasible_event_is_infinite() {
        // upper endpoint at s=0 is 0 + 1.5/0.5 = 3 < 4.4
        let m = Coefficients {
            sigma0: 1.5f64.ln(),
            xi0: -0.5,
            ..Default::default()
        };
        let d = sample_data(CovariateDensity::standard_normal(256));
        assert_eq!(covariate_nll_per_obs(&d, &m), f64::INFINITY);
    }

    #[test]
    fn return_level_no_effect_is_stationary() {
        let m = Coefficients {
            mu0: 1.0,
            sigma0: 0.3,
            xi0: -0.1,
            ..Default::default()
        };
        let h = CovariateDensity::standard_normal(512);
        for t in [2.0, 10.0, 100.0, 1000.0] {
            let z = return_level_covariate(t, &m, &h).unwrap();
            assert!((z - return_level_stationary(t, &m.at(0.0))).abs() < 1e-8);
        }
    }

    #[test]
    fn return_level_root_residual() {
        let h = CovariateDensity::standard_normal(512);
        for xi in [-0.2, 0.0, 0.2] {
            let m = design(2.5, xi);
            for t in [1.5, 10.0, 100.0, 500.0, 1000.0] {
                let z = return_level_covariate(t, &m, &h).unwrap();
                let r = integrated_block_cdf(z, &m, &h) - (1.0 - 1.0 / t);
                assert!(r.abs() < 1e-9, "xi={xi} T={t} residual {r}");
            }
        }
    }

    #[test]
    fn lhs_increasing_and_level_increasing() {
        let h = CovariateDensity::standard_normal(512);
        let m = design(2.5, -0.2);
        let mut prev = 0.0;
        for i in 0..200 {
            let z = -2.0 + 0.1 * i as f64;
            let c = integrated_block_cdf(z, &m, &h);
            assert!(c >= prev);
            prev = c;
        }
        let mut prev = f64::NEG_INFINITY;
        for t in [1.2, 2.0, 5.0, 20.0, 100.0, 1000.0] {
            let z = return_level_covariate(t, &m, &h).unwrap();
            assert!(z > prev);
            prev = z;
        }
    }

    #[test]
    fn return_level_grid_convergence() {
        // with a positive shape and an unbounded covariate the integral is
        // governed by the grid edge, so check the bounded-support cases
        for xi in [-0.2, 0.0] {
            let m = design(2.5, xi);
            let a = return_level_covariate(100.0, &m, &CovariateDensity::standard_normal(512)).unwrap();
            let b = return_level_covariate(100.0, &m, &CovariateDensity::standard_normal(1024)).unwrap();
            assert!(((a - b) / a).abs() < 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn invalid_period() {
        let h = CovariateDensity::standard_normal(64);
        assert!(return_level_covariate(1.0, &design(1.0, 0.0), &h).is_err());
    }
}
