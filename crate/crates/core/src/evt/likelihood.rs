//! Stationary point-process likelihood and maximum-likelihood fitting.

use nalgebra::DMatrix;

use super::gev::NhppParams;
use crate::error::{Error, Result};
use crate::numerics::optim::{self, NelderMeadOptions};

/// Exceedances of a threshold over `n_blocks` blocks (years, seasons).
///
/// `n_blocks` is the block count that scales the exponent term of the
/// likelihood; the number of exceedances is `exceedances.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdedData {
    exceedances: Vec<f64>,
    threshold: f64,
    n_blocks: f64,
}

impl ThresholdedData {
    pub fn new(exceedances: Vec<f64>, threshold: f64, n_blocks: f64) -> Result<Self> {
        if !(n_blocks >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "n_blocks must be >= 1, got {n_blocks}"
            )));
        }
        if let Some(z) = exceedances.iter().find(|z| !(**z > threshold)) {
            return Err(Error::InvalidInput(format!(
                "exceedance {z} is not above threshold {threshold}"
            )));
        }
        Ok(Self {
            exceedances,
            threshold,
            n_blocks,
        })
    }

    pub fn exceedances(&self) -> &[f64] {
        &self.exceedances
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn n_blocks(&self) -> f64 {
        self.n_blocks
    }
}

/// Negative log-likelihood of the stationary point process above `u`.
///
/// Infeasible parameters (scale not positive, threshold or any exceedance
/// outside the support) give `+inf`.
pub fn stationary_nll(d: &ThresholdedData, p: &NhppParams) -> f64 {
    if !(p.sigma > 0.0) || !p.sigma.is_finite() {
        return f64::INFINITY;
    }
    let lt_u = p.log_tail(d.threshold);
    if !lt_u.is_finite() {
        return f64::INFINITY;
    }
    let mut nll = d.n_blocks * lt_u.exp();
    for &z in &d.exceedances {
        let li = p.log_intensity(z);
        if !li.is_finite() {
            return f64::INFINITY;
        }
        nll -= li;
    }
    nll
}

/// Outcome of a maximum-likelihood fit.
#[derive(Debug, Clone)]
pub struct MleFit<P> {
    pub estimate: P,
    /// Inverse observed information, in the natural parametrisation.
    /// `None` when the numerical Hessian is not positive definite.
    pub covariance: Option<DMatrix<f64>>,
    pub nll: f64,
    pub iterations: usize,
}

impl<P> MleFit<P> {
    pub fn has_degenerate_hessian(&self) -> bool {
        self.covariance.is_none()
    }

    /// Standard errors from the covariance diagonal.
    pub fn standard_errors(&self) -> Option<Vec<f64>> {
        self.covariance
            .as_ref()
            .map(|c| (0..c.nrows()).map(|i| c[(i, i)].sqrt()).collect())
    }
}

/// Minimise `nll` over a vector whose coordinates flagged in `log_scale` are
/// searched on the log scale. Covariance comes from the Hessian in the natural
/// parametrisation.
pub(crate) fn minimise_nll<F: Fn(&[f64]) -> f64>(
    nll: F,
    init: &[f64],
    log_scale: &[bool],
    steps: &[f64],
    opts: &NelderMeadOptions,
) -> Result<(Vec<f64>, Option<DMatrix<f64>>, f64, usize)> {
    let to_natural = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .zip(log_scale)
            .map(|(v, &l)| if l { v.exp() } else { *v })
            .collect()
    };
    let start: Vec<f64> = init
        .iter()
        .zip(log_scale)
        .map(|(v, &l)| if l { v.ln() } else { *v })
        .collect();
    let objective = |x: &[f64]| nll(&to_natural(x));
    let m = optim::minimize(objective, &start, steps, opts)?;
    let estimate = to_natural(&m.x);
    let covariance = optim::hessian(&nll, &estimate).and_then(|h| optim::spd_inverse(&h));
    Ok((estimate, covariance, m.value, m.iterations))
}

/// Maximum-likelihood fit of the stationary model by restarted Nelder-Mead
/// (scale searched on the log scale).
///
/// With fewer than three exceedances the problem is underdetermined and the
/// covariance is always reported absent.
pub fn fit_stationary(d: &ThresholdedData, init: &NhppParams) -> Result<MleFit<NhppParams>> {
    fit_stationary_with(d, init, &NelderMeadOptions::default())
}

pub fn fit_stationary_with(
    d: &ThresholdedData,
    init: &NhppParams,
    opts: &NelderMeadOptions,
) -> Result<MleFit<NhppParams>> {
    init.validate()?;
    let nll = |x: &[f64]| {
        stationary_nll(
            d,
            &NhppParams {
                mu: x[0],
                sigma: x[1],
                xi: x[2],
            },
        )
    };
    let steps = [0.5 * init.sigma, 0.3, 0.1];
    let (x, mut cov, value, iterations) = minimise_nll(
        nll,
        &[init.mu, init.sigma, init.xi],
        &[false, true, false],
        &steps,
        opts,
    )?;
    if d.exceedances.len() < 3 {
        cov = None;
    }
    Ok(MleFit {
        estimate: NhppParams {
            mu: x[0],
            sigma: x[1],
            xi: x[2],
        },
        covariance: cov,
        nll: value,
        iterations,
    })
}

/// Negative log-likelihood of i.i.d. GEV block maxima.
pub fn block_maxima_nll(maxima: &[f64], p: &NhppParams) -> f64 {
    if !(p.sigma > 0.0) {
        return f64::INFINITY;
    }
    let mut nll = 0.0;
    for &z in maxima {
        let lt = p.log_tail(z);
        if !lt.is_finite() {
            return f64::INFINITY;
        }
        nll -= (1.0 + p.xi) * lt - p.sigma.ln() - lt.exp();
    }
    nll
}

/// i.i.d. GEV fit to block maxima, used as the covariate-blind baseline.
pub fn fit_block_maxima(maxima: &[f64]) -> Result<MleFit<NhppParams>> {
    if maxima.len() < 3 {
        return Err(Error::TooFewEvents {
            needed: 3,
            got: maxima.len(),
        });
    }
    // Gumbel moment estimates as the starting point
    let m = crate::numerics::stats::mean(maxima);
    let s = crate::numerics::stats::std_dev(maxima).max(1e-6);
    let sigma = s * 6f64.sqrt() / std::f64::consts::PI;
    let init = [m - 0.5772 * sigma, sigma, 0.1];
    let nll = |x: &[f64]| {
        block_maxima_nll(
            maxima,
            &NhppParams {
                mu: x[0],
                sigma: x[1],
                xi: x[2],
            },
        )
    };
    let (x, cov, value, iterations) = minimise_nll(
        nll,
        &init,
        &[false, true, false],
        &[0.5 * sigma, 0.3, 0.1],
        &NelderMeadOptions::default(),
    )?;
    Ok(MleFit {
        estimate: NhppParams {
            mu: x[0],
            sigma: x[1],
            xi: x[2],
        },
        covariance: cov,
        nll: value,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct transcription of the likelihood, product form.
    fn literal_likelihood(z: &[f64], u: f64, ny: f64, mu: f64, sigma: f64, xi: f64) -> f64 {
        let bracket = |v: f64| (1.0 + xi * (v - mu) / sigma).max(0.0);
        let mut l = (-ny * bracket(u).powf(-1.0 / xi)).exp();
        for &zi in z {
            l *= bracket(zi).powf(-1.0 / xi - 1.0) / sigma;
        }
        l
    }

    #[test]
    fn empty_data_is_pure_exponent() {
        let d = ThresholdedData::new(vec![], 1.0, 1.0).unwrap();
        let p = NhppParams::new(1.0, 2.0, 0.1).unwrap();
        assert!((stationary_nll(&d, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_literal_product() {
        let z = [1.3, 2.2, 1.05, 4.0, 1.7];
        let d = ThresholdedData::new(z.to_vec(), 1.0, 4.0).unwrap();
        let a = NhppParams::new(0.2, 1.1, 0.15).unwrap();
        let b = NhppParams::new(0.5, 0.9, -0.1).unwrap();
        let la = literal_likelihood(&z, 1.0, 4.0, a.mu, a.sigma, a.xi);
        let lb = literal_likelihood(&z, 1.0, 4.0, b.mu, b.sigma, b.xi);
        assert!((stationary_nll(&d, &a) + la.ln()).abs() < 1e-10);
        assert!((stationary_nll(&d, &b) + lb.ln()).abs() < 1e-10);
        assert_eq!(
            stationary_nll(&d, &a) < stationary_nll(&d, &b),
            la > lb
        );
    }

    #[test]
    fn infeasible_parameters_are_infinite() {
        let d = ThresholdedData::new(vec![6.0], 1.0, 2.0).unwrap();
        // upper endpoint 0 + 1/0.5 = 2 < 6
        let p = NhppParams::new(0.0, 1.0, -0.5).unwrap();
        assert_eq!(stationary_nll(&d, &p), f64::INFINITY);
        // threshold below lower endpoint
        let p = NhppParams::new(5.0, 1.0, 0.5).unwrap();
        assert_eq!(stationary_nll(&d, &p), f64::INFINITY);
    }

    #[test]
    fn block_scaling_shifts_exponent_linearly() {
        let z = vec![1.3, 2.2, 1.9];
        let p = NhppParams::new(0.0, 1.0, 0.1).unwrap();
        let base = stationary_nll(&ThresholdedData::new(z.clone(), 1.0, 1.0).unwrap(), &p);
        let tail = p.tail(1.0);
        for k in [2.0, 3.0, 10.0] {
            let v = stationary_nll(&ThresholdedData::new(z.clone(), 1.0, k).unwrap(), &p);
            assert!((v - base - (k - 1.0) * tail).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_data() {
        assert!(ThresholdedData::new(vec![0.5], 1.0, 1.0).is_err());
        assert!(ThresholdedData::new(vec![1.0], 1.0, 1.0).is_err());
        assert!(ThresholdedData::new(vec![], 1.0, 0.0).is_err());
    }

    #[test]
    fn fit_is_fixed_point_at_optimum() {
        let z = vec![1.3, 2.2, 1.05, 4.0, 1.7, 1.2, 2.9, 1.4, 1.1, 3.3];
        let d = ThresholdedData::new(z, 1.0, 4.0).unwrap();
        let init = NhppParams::new(1.0, 1.0, 0.1).unwrap();
        let first = fit_stationary(&d, &init).unwrap();
        let again = fit_stationary(&d, &first.estimate).unwrap();
        assert!((again.estimate.mu - first.estimate.mu).abs() < 1e-4);
        assert!((again.estimate.sigma - first.estimate.sigma).abs() < 1e-4);
        assert!((again.estimate.xi - first.estimate.xi).abs() < 1e-4);
        assert!(again.nll <= first.nll + 1e-9);
    }

    #[test]
    fn single_exceedance_is_never_silent() {
        let d = ThresholdedData::new(vec![2.0], 1.0, 5.0).unwrap();
        let init = NhppParams::new(0.0, 1.0, 0.1).unwrap();
        match fit_stationary(&d, &init) {
            Err(Error::NonConvergence { .. }) => {}
            Ok(fit) => assert!(fit.has_degenerate_hessian()),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
