//! Short-term risk: how much more likely an exceedance of `z_{T*}` in the
//! rest of a season becomes once the season's maximum so far, at time `t`,
//! equals the `T`-year level.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariate::{return_level_covariate, Coefficients, CovariateDensity, CovariateFit};
use crate::error::{Error, Result};
use crate::evt::gev::{NhppParams, TimeWindow};
use crate::numerics::quadrature::NormalQuadrature;
use crate::numerics::stats::quantile_sorted;
use crate::random_effects::{
    marginal_return_level_with, PosteriorSamples, RandomEffectsModel, DEFAULT_HERMITE_NODES,
};
use crate::simulation::{simulate_block, ModelSpec};

/// A finite mixture of point-process parameter sets standing in for the
/// covariate or effect integral.
#[derive(Debug, Clone)]
pub struct Mixture {
    weights: Vec<f64>,
    params: Vec<NhppParams>,
}

impl Mixture {
    /// Trapezoid weights of the covariate density grid.
    pub fn covariate(m: &Coefficients, h: &CovariateDensity) -> Self {
        let g = h.grid();
        let v = h.values();
        let n = g.len();
        let mut weights = Vec::new();
        let mut params = Vec::new();
        for i in 0..n {
            let left = if i > 0 { g[i] - g[i - 1] } else { 0.0 };
            let right = if i + 1 < n { g[i + 1] - g[i] } else { 0.0 };
            let w = 0.5 * (left + right) * v[i];
            if w > 0.0 {
                weights.push(w);
                params.push(m.at(g[i]));
            }
        }
        Self { weights, params }
    }

    pub fn random_effects(model: &RandomEffectsModel, q: &NormalQuadrature) -> Self {
        let mut weights = Vec::new();
        let mut params = Vec::new();
        for (x, w) in q.points.iter().zip(&q.weights) {
            if *w > 0.0 {
                weights.push(*w);
                params.push(model.params(x));
            }
        }
        Self { weights, params }
    }

    /// `P(M_(t,1] > z)`, the unconditional exceedance probability.
    pub fn unconditional(&self, z: f64, t: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (w, p) in self.weights.iter().zip(&self.params) {
            num += w * -(-(1.0 - t) * p.tail(z)).exp_m1();
            den += w;
        }
        num / den
    }

    /// `E[log g]`-free form of the conditional law of the latent value given
    /// `M_[0,t] = z_t`; the normalised weights, or `None` when `z_t` has zero
    /// density under every component.
    fn posterior_weights(&self, z_t: f64, t: f64) -> Option<Vec<f64>> {
        let log_g: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.params)
            .map(|(w, p)| {
                let lt = p.log_tail(z_t);
                if !lt.is_finite() {
                    return f64::NEG_INFINITY;
                }
                w.ln() + t.ln() + p.log_intensity(z_t) - t * lt.exp()
            })
            .collect();
        let top = log_g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return None;
        }
        let raw: Vec<f64> = log_g.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = raw.iter().sum();
        Some(raw.into_iter().map(|r| r / total).collect())
    }

    /// `P(M_(t,1] > z_star | M_[0,t] = z_t)`.
    pub fn conditional(&self, z_star: f64, z_t: f64, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidInput(format!("event time {t} must lie in (0, 1]")));
        }
        let w = self
            .posterior_weights(z_t, t)
            .ok_or(Error::UnsupportedConditioningValue(z_t))?;
        Ok(w
            .iter()
            .zip(&self.params)
            .map(|(w, p)| w * -(-(1.0 - t) * p.tail(z_star)).exp_m1())
            .sum())
    }

    /// Conditional mean of a function of the component index given `M_[0,t] = z_t`.
    pub fn conditional_weights(&self, z_t: f64, t: f64) -> Result<Vec<f64>> {
        self.posterior_weights(z_t, t)
            .ok_or(Error::UnsupportedConditioningValue(z_t))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn check_time(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("event time {t} must lie in [0, 1]")))
    }
}

pub fn unconditional_exceed_prob_cov(z: f64, t: f64, m: &Coefficients, h: &CovariateDensity) -> Result<f64> {
    check_time(t)?;
    Ok(Mixture::covariate(m, h).unconditional(z, t))
}

pub fn conditional_exceed_prob_cov(
    z_star: f64,
    z_t: f64,
    t: f64,
    m: &Coefficients,
    h: &CovariateDensity,
) -> Result<f64> {
    Mixture::covariate(m, h).conditional(z_star, z_t, t)
}

/// Mean of the covariate given `M_[0,t] = z_t`.
pub fn conditional_covariate_mean(z_t: f64, t: f64, m: &Coefficients, h: &CovariateDensity) -> Result<f64> {
    let mix = Mixture::covariate(m, h);
    let w = mix.conditional_weights(z_t, t)?;
    let s: Vec<f64> = h
        .grid()
        .iter()
        .zip(h.values())
        .filter(|(_, v)| **v > 0.0)
        .map(|(s, _)| *s)
        .collect();
    Ok(w.iter().zip(&s).map(|(w, s)| w * s).sum())
}

pub fn unconditional_exceed_prob_re(z_star: f64, t: f64, model: &RandomEffectsModel) -> Result<f64> {
    check_time(t)?;
    Ok(Mixture::random_effects(model, &model.quadrature(DEFAULT_HERMITE_NODES)).unconditional(z_star, t))
}

pub fn conditional_exceed_prob_re(z_star: f64, z_t: f64, t: f64, model: &RandomEffectsModel) -> Result<f64> {
    Mixture::random_effects(model, &model.quadrature(DEFAULT_HERMITE_NODES)).conditional(z_star, z_t, t)
}

/// 50 log-spaced return periods on `[1.5, 1000]`.
pub fn default_t_star_grid() -> Vec<f64> {
    log_grid(1.5, 1000.0, 50)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskQuery {
    /// Event time within the season.
    pub t: f64,
    /// Return period of the conditioning event.
    pub period: f64,
    pub t_star: Vec<f64>,
}

impl RiskQuery {
    pub fn new(t: f64, period: f64, t_star: Vec<f64>) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidInput(format!("event time {t} must lie in (0, 1)")));
        }
        if !(period > 1.0) {
            return Err(Error::InvalidInput(format!("return period {period} must exceed 1")));
        }
        if t_star.is_empty() || t_star.iter().any(|p| !(*p > 1.0)) {
            return Err(Error::InvalidInput("every T* must exceed 1".into()));
        }
        if t_star.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("the T* grid must be strictly ascending".into()));
        }
        Ok(Self { t, period, t_star })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiskStatus {
    Defined,
    /// Both probabilities vanish, e.g. `z_{T*}` beyond every upper endpoint.
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskPoint {
    pub t_star: f64,
    pub z_star: f64,
    /// `numerator / denominator`; NaN when undefined.
    pub r: f64,
    /// Pointwise 95% band; NaN when no band was requested or none could be formed.
    pub lower: f64,
    pub upper: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub status: RiskStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskCurve {
    pub t: f64,
    pub period: f64,
    pub z_t: f64,
    pub points: Vec<RiskPoint>,
    /// Number of resampled models that contributed to the bands.
    pub band_draws: usize,
}

impl RiskCurve {
    pub fn any_undefined(&self) -> bool {
        self.points.iter().any(|p| p.status == RiskStatus::Undefined)
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.r).collect()
    }
}

/// Point curve for a mixture given the two return-level maps.
fn curve_from<F: Fn(f64) -> Result<f64>>(q: &RiskQuery, mix: &Mixture, level: F) -> Result<RiskCurve> {
    let z_t = level(q.period)?;
    let mut points = Vec::with_capacity(q.t_star.len());
    for &ts in &q.t_star {
        let z_star = level(ts)?;
        let numerator = mix.conditional(z_star, z_t, q.t)?;
        let denominator = mix.unconditional(z_star, q.t);
        let (r, status) = if denominator > 0.0 {
            (numerator / denominator, RiskStatus::Defined)
        } else {
            (f64::NAN, RiskStatus::Undefined)
        };
        points.push(RiskPoint {
            t_star: ts,
            z_star,
            r,
            lower: f64::NAN,
            upper: f64::NAN,
            numerator,
            denominator,
            status,
        });
    }
    Ok(RiskCurve {
        t: q.t,
        period: q.period,
        z_t,
        points,
        band_draws: 0,
    })
}

/// Percentile band over resampled curves, widened to contain the point estimate.
fn attach_bands(curve: &mut RiskCurve, samples: &[Vec<f64>]) {
    curve.band_draws = samples.len();
    if samples.is_empty() {
        return;
    }
    for (i, p) in curve.points.iter_mut().enumerate() {
        let mut col: Vec<f64> = samples.iter().map(|s| s[i]).filter(|v| v.is_finite()).collect();
        if col.is_empty() || p.status == RiskStatus::Undefined {
            continue;
        }
        col.sort_by(f64::total_cmp);
        p.lower = quantile_sorted(&col, 0.025).min(p.r);
        p.upper = quantile_sorted(&col, 0.975).max(p.r);
    }
}

pub fn risk_curve_cov(q: &RiskQuery, m: &Coefficients, h: &CovariateDensity) -> Result<RiskCurve> {
    let mix = Mixture::covariate(m, h);
    curve_from(q, &mix, |p| return_level_covariate(p, m, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandOptions {
    pub draws: usize,
    pub seed: u64,
    /// Gauss-Hermite nodes per effect dimension for the draw-wise curves.
    pub nodes: usize,
}

impl Default for BandOptions {
    fn default() -> Self {
        Self {
            draws: 500,
            seed: 1,
            nodes: DEFAULT_HERMITE_NODES,
        }
    }
}

/// Coefficient vectors drawn from the asymptotic normal law of the free
/// coefficients; `None` without a usable covariance.
pub fn resample_coefficients(fit: &CovariateFit, n: usize, seed: u64) -> Option<Vec<Coefficients>> {
    let cov = fit.covariance.as_ref()?;
    let free = fit.free_indices();
    let l = cov.clone().cholesky()?.l();
    let centre = fit.coefficients.to_array();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Some(
        (0..n)
            .map(|_| {
                let z = DVector::from_iterator(free.len(), (0..free.len()).map(|_| rng.sample::<f64, _>(StandardNormal)));
                let dx: DVector<f64> = &l * z;
                let mut a = centre;
                for (k, &i) in free.iter().enumerate() {
                    a[i] += dx[k];
                }
                Coefficients::from_array(a)
            })
            .collect(),
    )
}

/// Risk curve of an observed-covariate fit, with bands from `bands.draws`
/// resampled coefficient vectors (no bands when `draws == 0` or the
/// covariance is unavailable).
pub fn risk_measure_cov(
    q: &RiskQuery,
    fit: &CovariateFit,
    h: &CovariateDensity,
    bands: &BandOptions,
) -> Result<RiskCurve> {
    let mut curve = risk_curve_cov(q, &fit.coefficients, h)?;
    if bands.draws == 0 {
        return Ok(curve);
    }
    if let Some(draws) = resample_coefficients(fit, bands.draws, bands.seed) {
        let samples: Vec<Vec<f64>> = draws
            .par_iter()
            .filter_map(|c| risk_curve_cov(q, c, h).ok().map(|rc| rc.values()))
            .collect();
        attach_bands(&mut curve, &samples);
    }
    Ok(curve)
}

pub fn risk_curve_re(q: &RiskQuery, model: &RandomEffectsModel, nodes: usize) -> Result<RiskCurve> {
    let quad = model.quadrature(nodes);
    let mix = Mixture::random_effects(model, &quad);
    curve_from(q, &mix, |p| marginal_return_level_with(p, model, &quad))
}

/// Evenly spaced subset of at most `n` posterior draws.
fn thin_indices(len: usize, n: usize) -> Vec<usize> {
    if n == 0 || len == 0 {
        return Vec::new();
    }
    if n >= len {
        return (0..len).collect();
    }
    (0..n).map(|i| i * len / n).collect()
}

/// Risk curve for site `site` of a posterior sample: point estimate at the
/// posterior-mean parameters, bands from per-draw curves (percentiles over at
/// most `bands.draws` evenly spaced draws).
pub fn risk_measure_re(
    q: &RiskQuery,
    posterior: &PosteriorSamples,
    site: usize,
    bands: &BandOptions,
) -> Result<RiskCurve> {
    if posterior.draws.is_empty() {
        return Err(Error::InvalidInput("the posterior sample is empty".into()));
    }
    if site >= posterior.n_sites() {
        return Err(Error::InvalidInput(format!("site {site} is not in the posterior")));
    }
    let post = posterior.canonical();
    let model = post.mean_model().site(site);
    let mut curve = risk_curve_re(q, &model, DEFAULT_HERMITE_NODES)?;
    let idx = thin_indices(post.draws.len(), bands.draws);
    let samples: Vec<Vec<f64>> = idx
        .par_iter()
        .filter_map(|&i| {
            let m = post.draws[i].model(post.dims).site(site);
            risk_curve_re(q, &m, bands.nodes).ok().map(|rc| rc.values())
        })
        .collect();
    attach_bands(&mut curve, &samples);
    Ok(curve)
}

/// Brute-force estimate of the risk ratio from simulated seasons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRisk {
    pub seasons: usize,
    pub unconditional: f64,
    pub unconditional_se: f64,
    /// Seasons whose maximum up to `t` fell in the conditioning bin.
    pub conditioned: usize,
    pub conditional: f64,
    pub conditional_se: f64,
    pub ratio: f64,
    pub ratio_se: f64,
}

/// Simulate `seasons` seasons of `spec` (site 0) with threshold `u`; keep those
/// whose maximum over `[0, t]` lies within `half_width` of `z_t` and count
/// exceedances of `z_star` over `(t, 1]`.
pub fn monte_carlo_risk(
    spec: &ModelSpec,
    u: f64,
    t: f64,
    z_star: f64,
    z_t: f64,
    half_width: f64,
    seasons: usize,
    seed: u64,
) -> Result<MonteCarloRisk> {
    if !(t > 0.0 && t < 1.0) || !(half_width > 0.0) || seasons == 0 {
        return Err(Error::InvalidInput("need 0 < t < 1, a positive bin and at least one season".into()));
    }
    if !(z_t - half_width > u && z_star > u) {
        return Err(Error::InvalidInput("levels must lie above the simulation threshold".into()));
    }
    let before = TimeWindow::new(0.0, t)?;
    let after = TimeWindow::new(t, 1.0)?;
    const CHUNK: usize = 10_000;
    let chunks = seasons.div_ceil(CHUNK);
    let tallies: Vec<[usize; 3]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(seasons - c * CHUNK);
            let mut tally = [0usize; 3];
            for _ in 0..n {
                let p = loop {
                    let x = spec.draw_latent(&mut rng);
                    let p = spec.block_params(0, &x);
                    if p.log_tail(u) < f64::INFINITY {
                        break p;
                    }
                };
                let first = simulate_block(&p, u, before, &mut rng)?;
                let second = simulate_block(&p, u, after, &mut rng)?;
                let m1 = first.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
                let hit = second.iter().any(|e| e.1 > z_star);
                tally[0] += hit as usize;
                if (m1 - z_t).abs() <= half_width {
                    tally[1] += 1;
                    tally[2] += hit as usize;
                }
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = [0usize; 3];
    for t in tallies {
        for k in 0..3 {
            sum[k] += t[k];
        }
    }
    let pu = sum[0] as f64 / seasons as f64;
    let se_u = (pu * (1.0 - pu) / seasons as f64).sqrt();
    let nc = sum[1];
    let pc = if nc > 0 { sum[2] as f64 / nc as f64 } else { f64::NAN };
    let se_c = if nc > 0 { (pc * (1.0 - pc) / nc as f64).sqrt() } else { f64::NAN };
    let ratio = pc / pu;
    let ratio_se = ratio * ((se_c / pc).powi(2) + (se_u / pu).powi(2)).sqrt();
    Ok(MonteCarloRisk {
        seasons,
        unconditional: pu,
        unconditional_se: se_u,
        conditioned: nc,
        conditional: pc,
        conditional_se: se_c,
        ratio,
        ratio_se,
    })
}

/// Covariance-free helper for callers holding only coefficients.
pub fn fixed_fit(coefficients: Coefficients) -> CovariateFit {
    CovariateFit {
        coefficients,
        free: [false; 6],
        covariance: None::<DMatrix<f64>>,
        nll: f64::NAN,
        iterations: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evt::gev::return_level_stationary;
    use crate::random_effects::{EffectDims, EffectLaw};
    use crate::simulation::reference_coefficients;

    fn normal() -> CovariateDensity {
        CovariateDensity::standard_normal(512)
    }

    #[test]
    fn no_effect_is_closed_form_and_flat() {
        let m = Coefficients {
            mu0: 1.0,
            sigma0: 0.2,
            xi0: -0.1,
            ..Default::default()
        };
        let h = normal();
        let p = m.at(0.0);
        let z = 3.0;
        let closed = 1.0 - p.cdf(z).powf(0.6);
        assert!((unconditional_exceed_prob_cov(z, 0.4, &m, &h).unwrap() - closed).abs() < 1e-12);
        let q = RiskQuery::new(0.4, 100.0, default_t_star_grid()).unwrap();
        let c = risk_curve_cov(&q, &m, &h).unwrap();
        for pt in &c.points {
            assert!((pt.r - 1.0).abs() < 1e-8, "{}", pt.r);
        }
    }

    #[test]
    fn late_time_probabilities_vanish() {
        let m = reference_coefficients(-0.2);
        let h = normal();
        let a = unconditional_exceed_prob_cov(5.0, 1.0 - 1e-9, &m, &h).unwrap();
        assert!(a < 1e-8 && a >= 0.0);
        assert_eq!(unconditional_exceed_prob_cov(5.0, 1.0, &m, &h).unwrap(), 0.0);
    }

    #[test]
    fn reference_design_curve_above_one() {
        let grid = log_grid(1.01, 100.0, 25);
        for xi in [-0.2, 0.2] {
            let q = RiskQuery::new(0.4, 100.0, grid.clone()).unwrap();
            let c = risk_curve_cov(&q, &reference_coefficients(xi), &normal()).unwrap();
            for p in &c.points {
                assert!(p.r > 1.0, "xi={xi} T*={} R={}", p.t_star, p.r);
                assert_eq!(p.r, p.numerator / p.denominator);
            }
        }
    }

    #[test]
    fn conditioning_raises_covariate_mean() {
        let m = reference_coefficients(-0.2);
        let h = normal();
        let z = return_level_covariate(100.0, &m, &h).unwrap();
        assert!(conditional_covariate_mean(z, 0.4, &m, &h).unwrap() > h.mean());
    }

    #[test]
    fn unsupported_conditioning_value() {
        let m = Coefficients {
            xi0: -0.5,
            ..Default::default()
        };
        // upper endpoint 2 everywhere
        let h = CovariateDensity::point_mass(0.0);
        assert!(matches!(
            conditional_exceed_prob_cov(1.0, 3.0, 0.4, &m, &h),
            Err(Error::UnsupportedConditioningValue(_))
        ));
    }

    #[test]
    fn beyond_all_endpoints_is_undefined() {
        let mix = Mixture::covariate(
            &Coefficients {
                mu1: 0.1,
                xi0: -0.5,
                ..Default::default()
            },
            &CovariateDensity::standard_normal(64),
        );
        let top = 0.1 * 8.0 + 2.0;
        assert_eq!(mix.unconditional(top + 1.0, 0.3), 0.0);
        assert_eq!(mix.conditional(top + 1.0, 1.0, 0.3).unwrap(), 0.0);
        let curve = curve_from(&RiskQuery::new(0.3, 10.0, vec![5.0]).unwrap(), &mix, |p| {
            Ok(if p == 10.0 { 1.0 } else { top + 1.0 })
        })
        .unwrap();
        assert_eq!(curve.points[0].status, RiskStatus::Undefined);
        assert!(curve.points[0].r.is_nan());
    }

    #[test]
    fn monotone_in_level_and_time() {
        let m = reference_coefficients(-0.2);
        let h = normal();
        let z_t = return_level_covariate(100.0, &m, &h).unwrap();
        for t in [0.2, 0.5] {
            let mut prev = (f64::INFINITY, f64::INFINITY);
            for i in 0..30 {
                let z = 1.0 + 0.3 * i as f64;
                let n = conditional_exceed_prob_cov(z, z_t, t, &m, &h).unwrap();
                let d = unconditional_exceed_prob_cov(z, t, &m, &h).unwrap();
                assert!(n <= prev.0 + 1e-15 && d <= prev.1 + 1e-15);
                prev = (n, d);
            }
        }
        let mut prev = f64::INFINITY;
        for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let d = unconditional_exceed_prob_cov(6.0, t, &m, &h).unwrap();
            assert!(d <= prev);
            prev = d;
        }
    }

    #[test]
    fn re_zero_slopes_flat_and_closed_form() {
        let c = Coefficients {
            mu0: 0.5,
            sigma0: 0.1,
            xi0: 0.1,
            ..Default::default()
        };
        let m = RandomEffectsModel::new(c, EffectDims::LOCATION_SCALE, EffectLaw::from_pairs(2, &[0.62]).unwrap()).unwrap();
        let p = c.at(0.0);
        let z = return_level_stationary(20.0, &p);
        assert!((unconditional_exceed_prob_re(z, 0.3, &m).unwrap() - (1.0 - p.cdf(z).powf(0.7))).abs() < 1e-12);
        let q = RiskQuery::new(0.2, 100.0, log_grid(1.5, 1000.0, 10)).unwrap();
        for pt in risk_curve_re(&q, &m, DEFAULT_HERMITE_NODES).unwrap().points {
            assert!((pt.r - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn re_tiny_slopes_near_one() {
        let c = Coefficients {
            mu0: 0.5,
            mu1: 1e-3,
            sigma0: 0.1,
            sigma1: 1e-3,
            xi0: 0.1,
            xi1: 0.0,
        };
        let m = RandomEffectsModel::new(c, EffectDims::LOCATION_SCALE, EffectLaw::from_pairs(2, &[0.62]).unwrap()).unwrap();
        let q = RiskQuery::new(0.4, 2.0, vec![2.0, 10.0, 100.0]).unwrap();
        for pt in risk_curve_re(&q, &m, DEFAULT_HERMITE_NODES).unwrap().points {
            assert!((pt.r - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn re_later_time_and_larger_period() {
        let c = Coefficients {
            mu0: 0.0,
            mu1: 1.0,
            sigma0: 0.0,
            sigma1: 0.2,
            xi0: 0.05,
            xi1: 0.0,
        };
        let m = RandomEffectsModel::new(c, EffectDims::LOCATION_SCALE, EffectLaw::from_pairs(2, &[0.62]).unwrap()).unwrap();
        let grid = log_grid(1.5, 1000.0, 12);
        let early = risk_curve_re(&RiskQuery::new(0.2, 100.0, grid.clone()).unwrap(), &m, 32).unwrap();
        let late = risk_curve_re(&RiskQuery::new(0.8, 100.0, grid.clone()).unwrap(), &m, 32).unwrap();
        let mild = risk_curve_re(&RiskQuery::new(0.2, 10.0, grid.clone()).unwrap(), &m, 32).unwrap();
        let severe = risk_curve_re(&RiskQuery::new(0.2, 1000.0, grid).unwrap(), &m, 32).unwrap();
        for i in 0..12 {
            // the time ordering is not universal: it reverses for frequent T*
            if late.points[i].t_star > 50.0 {
                assert!(late.points[i].r <= early.points[i].r, "{i}");
            }
            assert!(severe.points[i].r >= mild.points[i].r - 1e-12);
        }
    }

    #[test]
    fn cov_bands_contain_point() {
        let c = reference_coefficients(-0.2);
        let mut cov = DMatrix::identity(4, 4) * 0.01;
        cov[(1, 1)] = 0.05;
        let fit = CovariateFit {
            coefficients: c,
            free: [true, true, true, false, true, false],
            covariance: Some(cov),
            nll: 0.0,
            iterations: 0,
        };
        let q = RiskQuery::new(0.4, 100.0, vec![10.0, 50.0, 100.0]).unwrap();
        let curve = risk_measure_cov(&q, &fit, &normal(), &BandOptions { draws: 100, ..Default::default() }).unwrap();
        assert!(curve.band_draws > 90);
        for p in &curve.points {
            assert!(p.lower <= p.r && p.r <= p.upper && p.lower < p.upper);
        }
        let none = risk_measure_cov(&q, &fixed_fit(c), &normal(), &BandOptions::default()).unwrap();
        assert!(none.points[0].lower.is_nan());
    }

    #[test]
    fn query_validation() {
        assert!(RiskQuery::new(0.0, 100.0, vec![2.0]).is_err());
        assert!(RiskQuery::new(0.5, 1.0, vec![2.0]).is_err());
        assert!(RiskQuery::new(0.5, 10.0, vec![3.0, 2.0]).is_err());
        assert!(RiskQuery::new(0.5, 10.0, vec![1.0]).is_err());
        let g = default_t_star_grid();
        assert_eq!(g.len(), 50);
        assert!((g[0] - 1.5).abs() < 1e-12 && (g[49] - 1000.0).abs() < 1e-9);
    }
}
