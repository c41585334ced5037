//! Synthetic seasons from the stationary, covariate, random-effects and
//! regional point-process models.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariate::{return_level_covariate, Coefficients, CovariateDensity};
use crate::declustering::{Event, EventSet};
use crate::error::{Error, Result};
use crate::evt::gev::{standardised_level, NhppParams, TimeWindow};
use crate::random_effects::{RandomEffectsModel, RegionalModel};

/// Events above `u` in `window`, sorted by time: Poisson count with mean
/// `Λ = |window| τ(u)`, uniform times, sizes by inversion of `τ(z)/τ(u)`.
pub fn simulate_block<R: Rng + ?Sized>(
    p: &NhppParams,
    u: f64,
    window: TimeWindow,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    let len = window.length();
    if len == 0.0 {
        return Ok(Vec::new());
    }
    let log_tail_u = p.log_tail(u);
    if log_tail_u == f64::INFINITY {
        return Err(Error::InvalidInput(format!(
            "threshold {u} lies below the lower endpoint; the exceedance rate is unbounded"
        )));
    }
    let rate = len * log_tail_u.exp();
    if rate == 0.0 {
        return Ok(Vec::new());
    }
    let count = Poisson::new(rate)
        .map_err(|e| Error::InvalidInput(format!("Poisson rate {rate}: {e}")))?
        .sample(rng) as usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let t = window.start + len * rng.sample::<f64, _>(Open01);
        let z = loop {
            let v: f64 = rng.sample(Open01);
            let z = p.mu + p.sigma * standardised_level(v.ln() + log_tail_u, p.xi);
            if z > u {
                break z;
            }
        };
        out.push((t, z));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Maximum over a window of length `w` given its exceedances of `u`; with none,
/// a draw from `G^w` conditioned to lie at or below `u`.
pub fn block_maximum<R: Rng + ?Sized>(events: &[(f64, f64)], p: &NhppParams, u: f64, w: f64, rng: &mut R) -> f64 {
    if let Some(m) = events.iter().map(|e| e.1).reduce(f64::max) {
        return m;
    }
    let v: f64 = rng.sample(Open01);
    let tau = p.tail(u) - v.ln() / w;
    p.mu + p.sigma * standardised_level(tau.ln(), p.xi)
}

/// Which model generates the data.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Stationary(NhppParams),
    /// Coefficients applied to a block covariate `S ~ N(0, 1)`.
    Covariate(Coefficients),
    RandomEffects(RandomEffectsModel),
    Regional(RegionalModel),
}

impl ModelSpec {
    pub fn n_sites(&self) -> usize {
        match self {
            ModelSpec::Regional(m) => m.intercepts.len(),
            _ => 1,
        }
    }

    fn latent_dim(&self) -> usize {
        match self {
            ModelSpec::Stationary(_) => 0,
            ModelSpec::Covariate(_) => 1,
            ModelSpec::RandomEffects(m) => m.dims.count(),
            ModelSpec::Regional(m) => m.dims.count(),
        }
    }

    /// Parameters of site `d` in a block with latent value `x`
    /// (covariate or effect vector; ignored when stationary).
    pub fn block_params(&self, d: usize, x: &[f64]) -> NhppParams {
        match self {
            ModelSpec::Stationary(p) => *p,
            ModelSpec::Covariate(c) => c.at(x[0]),
            ModelSpec::RandomEffects(m) => m.params(x),
            ModelSpec::Regional(m) => m.site(d).params(x),
        }
    }

    fn central(&self, d: usize) -> NhppParams {
        self.block_params(d, &vec![0.0; self.latent_dim()])
    }

    pub fn draw_latent<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.latent_dim()).map(|_| rng.sample(StandardNormal)).collect();
        match self {
            ModelSpec::RandomEffects(m) => whiten_inverse(m.law.cholesky(), &z),
            ModelSpec::Regional(m) => whiten_inverse(m.law.cholesky(), &z),
            _ => z,
        }
    }
}

fn whiten_inverse(l: &nalgebra::DMatrix<f64>, z: &[f64]) -> Vec<f64> {
    let k = z.len();
    (0..k).map(|i| (0..=i).map(|j| l[(i, j)] * z[j]).sum()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdRule {
    Fixed(f64),
    /// Threshold at which a block with covariate or effects at zero expects
    /// this many exceedances.
    CentralRate(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimDesign {
    pub model: ModelSpec,
    pub n_blocks: usize,
    pub threshold: ThresholdRule,
    pub seed: u64,
    pub replicates: usize,
    pub first_block: i64,
}

/// Location slope of the reference covariate design.
pub const REFERENCE_BETA: f64 = 2.5;
pub const REFERENCE_SIGMA: f64 = 1.5;

impl SimDesign {
    /// `μ = 2.5 s`, `σ = 1.5`, shape `xi`, `S ~ N(0,1)`, 30 blocks, threshold
    /// from [`reference_threshold`].
    pub fn reference(xi: f64, seed: u64, replicates: usize) -> Self {
        Self {
            model: ModelSpec::Covariate(reference_coefficients(xi)),
            n_blocks: 30,
            threshold: ThresholdRule::Fixed(reference_threshold(xi)),
            seed,
            replicates,
            first_block: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_blocks == 0 {
            return Err(Error::InvalidInput("a design needs at least one block".into()));
        }
        match self.threshold {
            ThresholdRule::CentralRate(r) if !(r > 0.0 && r.is_finite()) => {
                return Err(Error::InvalidInput("expected exceedances per block must be positive".into()))
            }
            ThresholdRule::Fixed(u) if !u.is_finite() => {
                return Err(Error::InvalidInput("threshold must be finite".into()))
            }
            _ => {}
        }
        for d in 0..self.model.n_sites() {
            self.model.central(d).validate()?;
        }
        Ok(())
    }

    pub fn thresholds(&self) -> Vec<f64> {
        (0..self.model.n_sites())
            .map(|d| match self.threshold {
                ThresholdRule::Fixed(u) => u,
                ThresholdRule::CentralRate(r) => {
                    let p = self.model.central(d);
                    p.mu + p.sigma * standardised_level(r.ln(), p.xi)
                }
            })
            .collect()
    }

    pub fn block_labels(&self) -> Vec<i64> {
        (0..self.n_blocks as i64).map(|i| self.first_block + i).collect()
    }
}

/// Half-width of the covariate range used for the reference design's true
/// curves; see [`CovariateDensity::truncated_normal`].
pub const REFERENCE_COVARIATE_RANGE: f64 = 4.0;

pub fn reference_density() -> CovariateDensity {
    CovariateDensity::truncated_normal(REFERENCE_COVARIATE_RANGE, 512)
}

/// Mean exceedances per block, over the reference covariate law, at the
/// reference threshold.
pub const REFERENCE_MEAN_RATE: f64 = 2.0;

/// Level exceeded [`REFERENCE_MEAN_RATE`] times per block on average.
///
/// A threshold pinned to the rate at `s = 0` would sit close to the lower
/// endpoint of high-covariate blocks when the shape is positive, and those
/// blocks would then hold thousands of exceedances.
pub fn reference_threshold(xi: f64) -> f64 {
    let period = 1.0 / -(-REFERENCE_MEAN_RATE).exp_m1();
    return_level_covariate(period, &reference_coefficients(xi), &reference_density())
        .expect("the reference level exists for moderate shapes")
}

pub fn reference_coefficients(xi: f64) -> Coefficients {
    Coefficients {
        mu0: 0.0,
        mu1: REFERENCE_BETA,
        sigma0: REFERENCE_SIGMA.ln(),
        sigma1: 0.0,
        xi0: xi,
        xi1: 0.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteRealisation {
    pub threshold: f64,
    pub events: EventSet,
    /// Maximum of each block, including blocks without exceedances.
    pub block_maxima: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replicate {
    pub index: usize,
    pub block_labels: Vec<i64>,
    /// Block covariates for covariate designs.
    pub covariates: Option<Vec<f64>>,
    /// Block effect vectors for random-effects designs.
    pub effects: Option<Vec<Vec<f64>>>,
    pub sites: Vec<SiteRealisation>,
}

const LATENT_REDRAWS: usize = 10_000;

/// One replicate on its own stream of the design seed.
pub fn simulate_replicate(d: &SimDesign, index: usize) -> Result<Replicate> {
    d.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(d.seed);
    rng.set_stream(index as u64);
    let thresholds = d.thresholds();
    let labels = d.block_labels();
    let n_sites = d.model.n_sites();
    let mut latent = Vec::with_capacity(d.n_blocks);
    let mut events: Vec<Vec<Event>> = vec![Vec::new(); n_sites];
    let mut maxima: Vec<Vec<f64>> = vec![Vec::new(); n_sites];
    for &block in &labels {
        // latent values that would put a threshold below a lower endpoint
        // (unbounded exceedance rate) are redrawn
        let mut tries = 0;
        let x = loop {
            let x = d.model.draw_latent(&mut rng);
            let ok = (0..n_sites).all(|s| {
                let p = d.model.block_params(s, &x);
                p.validate().is_ok() && p.log_tail(thresholds[s]) < f64::INFINITY
            });
            if ok {
                break x;
            }
            tries += 1;
            if tries >= LATENT_REDRAWS {
                return Err(Error::InvalidInput(
                    "the threshold lies below the lower endpoint for almost every latent draw".into(),
                ));
            }
        };
        for s in 0..n_sites {
            let p = d.model.block_params(s, &x);
            let ev = simulate_block(&p, thresholds[s], TimeWindow::FULL, &mut rng)?;
            maxima[s].push(block_maximum(&ev, &p, thresholds[s], 1.0, &mut rng));
            events[s].extend(ev.into_iter().map(|(t, z)| Event {
                block,
                time_in_block: t,
                magnitude: z,
            }));
        }
        latent.push(x);
    }
    let sites = events
        .into_iter()
        .zip(maxima)
        .zip(&thresholds)
        .map(|((ev, m), &u)| {
            Ok(SiteRealisation {
                threshold: u,
                events: EventSet::new(ev, u, 1, labels.clone())?,
                block_maxima: m,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (covariates, effects) = match d.model {
        ModelSpec::Stationary(_) => (None, None),
        ModelSpec::Covariate(_) => (Some(latent.iter().map(|x| x[0]).collect()), None),
        _ => (None, Some(latent)),
    };
    Ok(Replicate {
        index,
        block_labels: labels,
        covariates,
        effects,
        sites,
    })
}

/// All replicates, generated in parallel; each is a pure function of
/// `(design, index)`.
pub fn simulate_design(d: &SimDesign) -> Result<Vec<Replicate>> {
    d.validate()?;
    (0..d.replicates)
        .into_par_iter()
        .map(|i| simulate_replicate(d, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evt::gev::integrated_intensity;
    use crate::random_effects::{EffectDims, EffectLaw};

    #[test]
    fn zero_window_is_empty() {
        let p = NhppParams::new(0.0, 1.0, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(simulate_block(&p, -1.0, TimeWindow::new(0.3, 0.3).unwrap(), &mut rng).unwrap().is_empty());
    }

    #[test]
    fn events_above_threshold_within_window() {
        let p = NhppParams::new(0.0, 1.0, -0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = TimeWindow::new(0.2, 0.7).unwrap();
        for _ in 0..200 {
            let ev = simulate_block(&p, -1.0, w, &mut rng).unwrap();
            for (t, z) in &ev {
                assert!(*t > 0.2 && *t < 0.7);
                assert!(*z > -1.0 && *z < p.upper_endpoint().unwrap());
            }
            assert!(ev.windows(2).all(|e| e[0].0 <= e[1].0));
        }
    }

    #[test]
    fn mean_count_matches_integrated_intensity() {
        let p = NhppParams::new(0.5, 1.2, 0.15).unwrap();
        let w = TimeWindow::new(0.1, 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let total: usize = (0..n).map(|_| simulate_block(&p, 0.0, w, &mut rng).unwrap().len()).sum();
        let lambda = integrated_intensity(0.0, w, &p);
        let se = (lambda / n as f64).sqrt();
        assert!((total as f64 / n as f64 - lambda).abs() < 3.0 * se);
    }

    #[test]
    fn threshold_below_lower_endpoint_errors() {
        let p = NhppParams::new(0.0, 1.0, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(simulate_block(&p, -3.0, TimeWindow::FULL, &mut rng).is_err());
    }

    #[test]
    fn empty_block_maximum_below_threshold() {
        let p = NhppParams::new(0.0, 1.0, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let m = block_maximum(&[], &p, 0.5, 1.0, &mut rng);
            assert!(m <= 0.5);
            assert!(m > p.lower_endpoint().unwrap());
        }
    }

    #[test]
    fn reference_design_thresholds_and_storage() {
        let d = SimDesign::reference(-0.2, 7, 3);
        let u = d.thresholds()[0];
        let c = reference_coefficients(-0.2);
        let rate = reference_density().integrate(|s| c.at(s).tail(u));
        assert!((rate - REFERENCE_MEAN_RATE).abs() < 1e-3, "{rate}");
        let reps = simulate_design(&d).unwrap();
        assert_eq!(reps.len(), 3);
        for r in &reps {
            assert_eq!(r.covariates.as_ref().unwrap().len(), 30);
            assert_eq!(r.sites[0].block_maxima.len(), 30);
            assert_eq!(r.sites[0].events.n_blocks(), 30);
            assert!(r.sites[0].events.magnitudes().iter().all(|z| *z > u));
        }
        assert_ne!(reps[0], reps[1]);
    }

    #[test]
    fn deterministic() {
        let d = SimDesign::reference(0.2, 11, 4);
        assert_eq!(simulate_design(&d).unwrap(), simulate_design(&d).unwrap());
        assert_eq!(simulate_design(&d).unwrap()[2], simulate_replicate(&d, 2).unwrap());
    }

    #[test]
    fn regional_shares_effects() {
        let model = RegionalModel {
            intercepts: vec![[0.0, 0.0, 0.1], [1.0, 0.3, -0.1]],
            slopes: [0.8, 0.2, 0.0],
            dims: EffectDims::LOCATION_SCALE,
            law: EffectLaw::from_pairs(2, &[0.62]).unwrap(),
        };
        let d = SimDesign {
            model: ModelSpec::Regional(model),
            n_blocks: 10,
            threshold: ThresholdRule::CentralRate(3.0),
            seed: 5,
            replicates: 1,
            first_block: 1990,
        };
        let r = simulate_replicate(&d, 0).unwrap();
        assert_eq!(r.sites.len(), 2);
        assert_eq!(r.effects.as_ref().unwrap().len(), 10);
        assert_eq!(r.block_labels[0], 1990);
        assert_ne!(r.sites[0].threshold, r.sites[1].threshold);
    }
}
