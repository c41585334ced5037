//! GEV distribution and the Poisson-process intensity it induces above a threshold.
//!
//! Everything is written in terms of the tail function
//! `τ(z) = [1 + ξ (z - μ)/σ]_+^(-1/ξ)`, whose value over a time window of length
//! `w` is the expected number of points above `z`. The GEV cdf is `exp(-τ)` and
//! the point-process intensity is `τ^(1+ξ) / σ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `|ξ|` the Gumbel limit (with a second-order series correction) is used.
pub const SHAPE_SWITCH: f64 = 1e-8;

/// GEV / point-process parameters: location, scale and shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NhppParams {
    pub mu: f64,
    pub sigma: f64,
    pub xi: f64,
}

/// Scaled-time window `[start, end] ⊂ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub const FULL: TimeWindow = TimeWindow { start: 0.0, end: 1.0 };

    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
            return Err(Error::InvalidInput(format!(
                "time window [{start}, {end}] must satisfy 0 <= start <= end <= 1"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// `log τ` for standardised value `y = (z - μ)/σ`.
///
/// Returns `+inf` below a finite lower endpoint (`ξ > 0`) and `-inf` at or above
/// a finite upper endpoint (`ξ < 0`).
pub fn log_tail(y: f64, xi: f64) -> f64 {
    if xi.abs() < SHAPE_SWITCH {
        // -log1p(ξy)/ξ expanded in ξ
        return -y + 0.5 * xi * y * y;
    }
    let arg = xi * y;
    if arg <= -1.0 {
        return if xi > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    -arg.ln_1p() / xi
}

impl NhppParams {
    pub fn new(mu: f64, sigma: f64, xi: f64) -> Result<Self> {
        let p = Self { mu, sigma, xi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scale must be positive and finite, got {}",
                self.sigma
            )));
        }
        if !self.mu.is_finite() || !self.xi.is_finite() {
            return Err(Error::InvalidInput("location and shape must be finite".into()));
        }
        Ok(())
    }

    /// Finite lower endpoint of the support (only when `ξ > 0`).
    pub fn lower_endpoint(&self) -> Option<f64> {
        (self.xi >= SHAPE_SWITCH).then(|| self.mu - self.sigma / self.xi)
    }

    /// Finite upper endpoint of the support (only when `ξ < 0`).
    pub fn upper_endpoint(&self) -> Option<f64> {
        (self.xi <= -SHAPE_SWITCH).then(|| self.mu - self.sigma / self.xi)
    }

    pub fn in_support(&self, z: f64) -> bool {
        let lt = self.log_tail(z);
        lt.is_finite()
    }

    pub fn log_tail(&self, z: f64) -> f64 {
        log_tail((z - self.mu) / self.sigma, self.xi)
    }

    /// `τ(z)`: expected number of points above `z` per unit of scaled time.
    pub fn tail(&self, z: f64) -> f64 {
        self.log_tail(z).exp()
    }

    /// Log point-process intensity; `-inf` outside the support.
    pub fn log_intensity(&self, z: f64) -> f64 {
        let lt = self.log_tail(z);
        if !lt.is_finite() {
            return f64::NEG_INFINITY;
        }
        (1.0 + self.xi) * lt - self.sigma.ln()
    }

    pub fn cdf(&self, z: f64) -> f64 {
        (-self.tail(z)).exp()
    }

    pub fn pdf(&self, z: f64) -> f64 {
        let lt = self.log_tail(z);
        if !lt.is_finite() {
            return 0.0;
        }
        ((1.0 + self.xi) * lt - self.sigma.ln() - lt.exp()).exp()
    }

    /// Quantile of `G^w`, the distribution of the maximum over a window of length `w`.
    pub fn window_max_quantile(&self, p: f64, w: f64) -> f64 {
        let tau = -p.ln() / w;
        self.mu + self.sigma * standardised_level(tau.ln(), self.xi)
    }
}

/// Inverse of [`log_tail`]: the standardised `y` with `log τ(y) = log_tau`.
pub fn standardised_level(log_tau: f64, xi: f64) -> f64 {
    if xi.abs() < SHAPE_SWITCH {
        -log_tau + 0.5 * xi * log_tau * log_tau
    } else {
        (-xi * log_tau).exp_m1() / xi
    }
}

pub fn gev_cdf(z: f64, p: &NhppParams) -> f64 {
    p.cdf(z)
}

pub fn gev_pdf(z: f64, p: &NhppParams) -> f64 {
    p.pdf(z)
}

/// Point-process intensity `λ(z, t)`; constant in time so the window is only
/// carried for interface symmetry with [`integrated_intensity`].
pub fn nhpp_intensity(z: f64, _window: TimeWindow, p: &NhppParams) -> f64 {
    p.log_intensity(z).exp()
}

/// `Λ([t1, t2] × [u, ∞))`.
pub fn integrated_intensity(u: f64, window: TimeWindow, p: &NhppParams) -> f64 {
    let len = window.length();
    if len == 0.0 {
        return 0.0;
    }
    len * p.tail(u)
}

/// `-log(1 - 1/T)`, the annual-maximum tail value matching return period `T`.
pub fn return_period_tail(t: f64) -> f64 {
    -(-1.0 / t).ln_1p()
}

/// Level exceeded by the block maximum with probability `1/T`.
pub fn return_level_stationary(t: f64, p: &NhppParams) -> f64 {
    p.mu + p.sigma * standardised_level(return_period_tail(t).ln(), p.xi)
}

/// Expected waiting time between exceedances of `z_T` counting every event,
/// not just block maxima: `-1 / log(1 - 1/T)`.
pub fn return_period_all_exceedances(t: f64) -> f64 {
    1.0 / return_period_tail(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(mu: f64, sigma: f64, xi: f64) -> NhppParams {
        NhppParams::new(mu, sigma, xi).unwrap()
    }

    /// Adaptive Simpson, used as an independent check of the cdf.
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
        let c = 0.5 * (a + b);
        let fa = f(a);
        let fb = f(b);
        let fc = f(c);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fb: f64,
            fc: f64,
            whole: f64,
            eps: f64,
            depth: u32,
        ) -> f64 {
            let c = 0.5 * (a + b);
            let d = 0.5 * (a + c);
            let e = 0.5 * (c + b);
            let fd = f(d);
            let fe = f(e);
            let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
            let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, c, fa, fc, fd, left, eps / 2.0, depth - 1)
                + rec(f, c, b, fc, fb, fe, right, eps / 2.0, depth - 1)
        }
        rec(f, a, b, fa, fb, fc, whole, eps, depth)
    }

    #[test]
    fn gumbel_cdf_at_location() {
        assert!((gev_cdf(0.0, &p(0.0, 1.0, 0.0)) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cdf_is_one_at_upper_endpoint() {
        let q = p(0.0, 1.0, -0.2);
        let ub = q.upper_endpoint().unwrap();
        assert_eq!(gev_cdf(ub, &q), 1.0);
        assert_eq!(gev_cdf(ub + 3.0, &q), 1.0);
    }

    #[test]
    fn cdf_matches_integrated_density() {
        let q = p(0.0, 1.0, 0.2);
        // lower endpoint is -5; density vanishes there
        let lo = q.lower_endpoint().unwrap();
        let integral = simpson(&|z| gev_pdf(z, &q), lo, 2.0, 1e-13, 50);
        assert!((integral - gev_cdf(2.0, &q)).abs() < 1e-8, "{integral}");
    }

    #[test]
    fn gumbel_density_at_location() {
        assert!((gev_pdf(0.0, &p(0.0, 1.0, 0.0)) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn density_zero_outside_support() {
        let q = p(0.0, 1.0, -0.5);
        assert_eq!(gev_pdf(q.upper_endpoint().unwrap() + 0.1, &q), 0.0);
        let q = p(0.0, 1.0, 0.5);
        assert_eq!(gev_pdf(q.lower_endpoint().unwrap() - 0.1, &q), 0.0);
    }

    #[test]
    fn density_is_derivative_of_cdf() {
        let q = p(0.5, 2.0, 0.1);
        let h = 1e-5;
        let fd = (gev_cdf(1.3 + h, &q) - gev_cdf(1.3 - h, &q)) / (2.0 * h);
        assert!((fd - gev_pdf(1.3, &q)).abs() < 1e-6);
    }

    #[test]
    fn intensity_at_location() {
        let q = p(2.0, 1.7, 0.3);
        assert!((nhpp_intensity(2.0, TimeWindow::FULL, &q) - 1.0 / 1.7).abs() < 1e-15);
        let q = p(0.0, 1.0, -0.25);
        assert_eq!(nhpp_intensity(10.0, TimeWindow::FULL, &q), 0.0);
    }

    #[test]
    fn intensity_is_minus_derivative_of_integrated_intensity() {
        for q in [p(0.0, 1.5, 0.2), p(1.0, 0.7, -0.3), p(-1.0, 2.0, 0.0)] {
            for z in [0.3, 1.2, 2.0] {
                let h = 1e-6;
                let d = -(integrated_intensity(z + h, TimeWindow::FULL, &q)
                    - integrated_intensity(z - h, TimeWindow::FULL, &q))
                    / (2.0 * h);
                assert!((d - nhpp_intensity(z, TimeWindow::FULL, &q)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn integrated_intensity_basics() {
        let q = p(1.0, 2.0, 0.1);
        assert!((integrated_intensity(1.0, TimeWindow::FULL, &q) - 1.0).abs() < 1e-15);
        let w = TimeWindow::new(0.3, 0.3).unwrap();
        assert_eq!(integrated_intensity(0.0, w, &q), 0.0);
    }

    #[test]
    fn window_validation() {
        assert!(TimeWindow::new(0.5, 0.2).is_err());
        assert!(TimeWindow::new(-0.1, 0.2).is_err());
        assert!(NhppParams::new(0.0, 0.0, 0.0).is_err());
        assert!(NhppParams::new(0.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn return_levels_gumbel() {
        let g = p(0.0, 1.0, 0.0);
        assert!((return_level_stationary(100.0, &g) - 4.600149226776579).abs() < 1e-12);
        assert!((return_level_stationary(2.0, &g) - 0.36651292058166435).abs() < 1e-12);
    }

    #[test]
    fn all_exceedance_period() {
        assert!((return_period_all_exceedances(100.0) - 99.49916247).abs() < 1e-6);
        assert!((return_period_all_exceedances(21.0) - 20.5).abs() < 0.51);
        let big = 1e6;
        assert!((return_period_all_exceedances(big) / big - 1.0).abs() < 1e-5);
    }

    #[test]
    fn shape_switch_continuity() {
        for i in 0..=200 {
            let z = -4.0 + i as f64 * 0.06;
            let g0 = gev_cdf(z, &p(0.0, 1.0, 0.0));
            for xi in [1e-8, -1e-8, 2e-8, -2e-8] {
                assert!((gev_cdf(z, &p(0.0, 1.0, xi)) - g0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn window_quantile_inverts_power_cdf() {
        let q = p(0.3, 1.2, -0.15);
        for w in [0.2, 0.6, 1.0] {
            for prob in [0.05, 0.5, 0.97] {
                let z = q.window_max_quantile(prob, w);
                assert!((q.cdf(z).powf(w) - prob).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn cdf_monotone(mu in -5.0..5.0f64, sigma in 0.1..5.0f64, xi in -0.8..0.8f64) {
            let q = p(mu, sigma, xi);
            let mut prev = 0.0;
            for i in 0..400 {
                let z = mu - 20.0 * sigma + i as f64 * 0.1 * sigma;
                let c = gev_cdf(z, &q);
                prop_assert!(c >= prev);
                prop_assert!((0.0..=1.0).contains(&c));
                prev = c;
            }
        }

        #[test]
        fn return_level_inverts_cdf(mu in -5.0..5.0f64, sigma in 0.1..5.0f64,
                                    xi in -0.6..0.6f64, t in 1.01..1e4f64) {
            let q = p(mu, sigma, xi);
            let z = return_level_stationary(t, &q);
            prop_assert!((gev_cdf(z, &q) - (1.0 - 1.0 / t)).abs() < 1e-10);
        }

        #[test]
        fn return_level_increasing(mu in -5.0..5.0f64, sigma in 0.1..5.0f64,
                                   xi in -0.6..0.6f64, t in 1.01..1e4f64) {
            let q = p(mu, sigma, xi);
            prop_assert!(return_level_stationary(t * 1.1, &q) > return_level_stationary(t, &q));
        }

        #[test]
        fn integrated_intensity_additive(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64,
                                         u in -1.0..3.0f64) {
            let mut v = [a, b, c];
            v.sort_by(f64::total_cmp);
            let q = p(0.0, 1.5, 0.2);
            let whole = integrated_intensity(u, TimeWindow::new(v[0], v[2]).unwrap(), &q);
            let parts = integrated_intensity(u, TimeWindow::new(v[0], v[1]).unwrap(), &q)
                + integrated_intensity(u, TimeWindow::new(v[1], v[2]).unwrap(), &q);
            prop_assert!((whole - parts).abs() < 1e-12 * (1.0 + whole));
        }
    }
}
