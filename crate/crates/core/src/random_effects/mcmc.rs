//! Component-wise adaptive random-walk Metropolis-Hastings for the
//! random-effects and regional models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::model::{block_log_term, EffectDims, EffectLaw, RegionalData, RegionalModel};
use crate::covariate::Coefficients;
use crate::error::{Error, Result};
use crate::evt::gev::NhppParams;
use crate::evt::likelihood::{fit_stationary, ThresholdedData};
use crate::numerics::stats;

/// Prior standard deviations. Shape intercepts are additionally truncated to
/// `(-xi_bound, xi_bound)`; correlations are uniform on the positive-definite region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub location_sd: f64,
    pub log_scale_sd: f64,
    pub shape_sd: f64,
    pub shape_bound: f64,
}

impl Priors {
    /// `N(0, 10^4 scale^2)` on location terms, `N(0, 10^2)` on log-scale terms,
    /// `N(0, 0.25^2)` on shape terms.
    pub fn weakly_informative(scale: f64) -> Self {
        Self {
            location_sd: 100.0 * scale,
            log_scale_sd: 10.0,
            shape_sd: 0.25,
            shape_bound: 0.5,
        }
    }

    /// Scale taken from the spread of all exceedances (1 when undefined).
    pub fn for_data(data: &RegionalData) -> Self {
        let z = data.all_magnitudes();
        let sd = if z.len() > 1 { stats::std_dev(&z) } else { 1.0 };
        Self::weakly_informative(if sd > 0.0 && sd.is_finite() { sd } else { 1.0 })
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.location_sd, self.log_scale_sd, self.shape_sd, self.shape_bound]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("prior scales must be positive and finite".into()))
        }
    }

    fn normal(x: f64, sd: f64) -> f64 {
        -0.5 * (x / sd).powi(2)
    }

    fn log_density(&self, m: &RegionalModel) -> f64 {
        let mut lp = 0.0;
        for b in &m.intercepts {
            if b[2].abs() >= self.shape_bound {
                return f64::NEG_INFINITY;
            }
            lp += Self::normal(b[0], self.location_sd)
                + Self::normal(b[1], self.log_scale_sd)
                + Self::normal(b[2], self.shape_sd);
        }
        let sd = [self.location_sd, self.log_scale_sd, self.shape_sd];
        for i in m.dims.indices() {
            lp += Self::normal(m.slopes[i], sd[i]);
        }
        lp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub target_acceptance: f64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            iterations: 200_000,
            burn_in: 50_000,
            thin: 10,
            seed: 1,
            target_acceptance: 0.44,
        }
    }
}

impl McmcConfig {
    /// Shorter chain for repeated desk-scale studies.
    pub fn desk(seed: u64) -> Self {
        Self {
            iterations: 20_000,
            burn_in: 5_000,
            thin: 5,
            seed,
            target_acceptance: 0.44,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Draw {
    pub intercepts: Vec<[f64; 3]>,
    pub slopes: [f64; 3],
    pub correlations: Vec<f64>,
    pub effects: Vec<Vec<f64>>,
    pub log_posterior: f64,
}

impl Draw {
    pub fn model(&self, dims: EffectDims) -> RegionalModel {
        RegionalModel {
            intercepts: self.intercepts.clone(),
            slopes: self.slopes,
            dims,
            law: EffectLaw::from_pairs(dims.count(), &self.correlations)
                .expect("stored draws have positive-definite correlation"),
        }
    }

    /// The likelihood is invariant to flipping the sign of a slope together
    /// with its effects; map every draw onto non-negative slopes.
    pub fn canonical(&self, dims: EffectDims) -> Draw {
        let idx = dims.indices();
        let k = idx.len();
        let flip: Vec<f64> = idx.iter().map(|&i| if self.slopes[i] < 0.0 { -1.0 } else { 1.0 }).collect();
        let mut out = self.clone();
        for (j, &i) in idx.iter().enumerate() {
            out.slopes[i] *= flip[j];
        }
        for r in &mut out.effects {
            for j in 0..k {
                r[j] *= flip[j];
            }
        }
        let mut p = 0;
        for a in 0..k {
            for b in 0..a {
                out.correlations[p] *= flip[a] * flip[b];
                p += 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentAcceptance {
    pub name: String,
    pub rate: f64,
    pub final_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSamples {
    pub dims: EffectDims,
    pub block_labels: Vec<i64>,
    pub draws: Vec<Draw>,
    pub acceptance: Vec<ComponentAcceptance>,
    pub burn_in: usize,
    pub thin: usize,
}

pub const STUCK_ACCEPTANCE: f64 = 0.01;

impl PosteriorSamples {
    pub fn n_sites(&self) -> usize {
        self.draws.first().map_or(0, |d| d.intercepts.len())
    }

    /// Components whose post-burn-in acceptance fell below 1%.
    pub fn stuck_components(&self) -> Vec<&str> {
        self.acceptance
            .iter()
            .filter(|a| a.rate < STUCK_ACCEPTANCE)
            .map(|a| a.name.as_str())
            .collect()
    }

    pub fn chain_stuck(&self) -> bool {
        !self.stuck_components().is_empty()
    }

    pub fn canonical(&self) -> PosteriorSamples {
        PosteriorSamples {
            draws: self.draws.iter().map(|d| d.canonical(self.dims)).collect(),
            ..self.clone()
        }
    }

    pub fn log_posterior_trace(&self) -> Vec<f64> {
        self.draws.iter().map(|d| d.log_posterior).collect()
    }

    /// Named scalar trace: `mu0`, `sigma0`, `xi0` (site 0) or `mu0[d]`,
    /// `mu1`, `sigma1`, `xi1`, `rho[p]`, `r_mu[i]`, `r_sigma[i]`, `r_xi[i]`.
    pub fn trace(&self, name: &str) -> Option<Vec<f64>> {
        let (base, index) = match name.split_once('[') {
            Some((b, rest)) => (b, Some(rest.trim_end_matches(']').parse::<usize>().ok()?)),
            None => (name, None),
        };
        let dims = self.dims.indices();
        let f: Box<dyn Fn(&Draw) -> f64> = match base {
            "mu0" | "sigma0" | "xi0" => {
                let c = ["mu0", "sigma0", "xi0"].iter().position(|n| *n == base)?;
                let d = index.unwrap_or(0);
                if d >= self.n_sites() {
                    return None;
                }
                Box::new(move |w: &Draw| w.intercepts[d][c])
            }
            "mu1" | "sigma1" | "xi1" => {
                let c = ["mu1", "sigma1", "xi1"].iter().position(|n| *n == base)?;
                Box::new(move |w: &Draw| w.slopes[c])
            }
            "rho" => {
                let p = index.unwrap_or(0);
                if p >= dims.len() * dims.len().saturating_sub(1) / 2 {
                    return None;
                }
                Box::new(move |w: &Draw| w.correlations[p])
            }
            "r_mu" | "r_sigma" | "r_xi" => {
                let c = ["r_mu", "r_sigma", "r_xi"].iter().position(|n| *n == base)?;
                let j = dims.iter().position(|&i| i == c)?;
                let i = index?;
                if i >= self.block_labels.len() {
                    return None;
                }
                Box::new(move |w: &Draw| w.effects[i][j])
            }
            _ => return None,
        };
        Some(self.draws.iter().map(|d| f(d)).collect())
    }

    /// Posterior-mean effect vector per block.
    pub fn effect_means(&self) -> Vec<Vec<f64>> {
        let k = self.dims.count();
        let n = self.draws.len() as f64;
        let mut out = vec![vec![0.0; k]; self.block_labels.len()];
        for d in &self.draws {
            for (o, r) in out.iter_mut().zip(&d.effects) {
                for j in 0..k {
                    o[j] += r[j] / n;
                }
            }
        }
        out
    }

    /// Model at the posterior means of the intercepts, slopes and correlations.
    pub fn mean_model(&self) -> RegionalModel {
        let n = self.draws.len() as f64;
        let first = &self.draws[0];
        let mut intercepts = vec![[0.0; 3]; first.intercepts.len()];
        let mut slopes = [0.0; 3];
        let mut rho = vec![0.0; first.correlations.len()];
        for d in &self.draws {
            for (a, b) in intercepts.iter_mut().zip(&d.intercepts) {
                for c in 0..3 {
                    a[c] += b[c] / n;
                }
            }
            for c in 0..3 {
                slopes[c] += d.slopes[c] / n;
            }
            for (a, b) in rho.iter_mut().zip(&d.correlations) {
                *a += b / n;
            }
        }
        RegionalModel {
            intercepts,
            slopes,
            dims: self.dims,
            // a mean of positive-definite correlation matrices is positive definite
            law: EffectLaw::from_pairs(self.dims.count(), &rho).expect("convex combination"),
        }
    }
}

/// Intercepts from per-site stationary fits; modest positive slopes.
pub fn initial_model(data: &RegionalData, dims: EffectDims) -> Result<RegionalModel> {
    let mut intercepts = Vec::new();
    let mut scales = Vec::new();
    for site in &data.sites {
        let mags: Vec<f64> = site.blocks.iter().flatten().flatten().copied().collect();
        let recording = site.blocks.iter().filter(|b| b.is_some()).count() as f64;
        let td = ThresholdedData::new(mags.clone(), site.threshold, recording)?;
        let sd = if mags.len() > 1 { stats::std_dev(&mags) } else { 1.0 };
        let sd = if sd > 0.0 { sd } else { 1.0 };
        let start = NhppParams {
            mu: site.threshold + sd * (mags.len().max(1) as f64 / recording).ln(),
            sigma: sd,
            xi: 0.0,
        };
        let p = match fit_stationary(&td, &start) {
            Ok(f) => f.estimate,
            Err(_) => start,
        };
        intercepts.push([p.mu, p.sigma.ln(), p.xi.clamp(-0.4, 0.4)]);
        scales.push(p.sigma);
    }
    let sigma = stats::mean(&scales);
    let mut slopes = [0.0; 3];
    let defaults = [0.5 * sigma, 0.1, 0.02];
    for i in dims.indices() {
        slopes[i] = defaults[i];
    }
    Ok(RegionalModel {
        intercepts,
        slopes,
        dims,
        law: EffectLaw::identity(dims.count()),
    })
}

#[derive(Debug, Clone, Copy)]
enum Component {
    Intercept(usize, usize),
    Slope(usize),
    Correlation(usize),
    Effect(usize, usize),
    /// Slope of effect `j` times c, effect `j` of every block divided by c.
    Rescale(usize),
}

/// Iterations per adaptation batch.
const ADAPT_BATCH: usize = 50;

struct Adapter {
    log_scale: Vec<f64>,
    tried: Vec<usize>,
    accepted: Vec<usize>,
    alpha_sum: Vec<f64>,
}

impl Adapter {
    fn step(&self, c: usize) -> f64 {
        self.log_scale[c].exp()
    }
}

struct Chain<'a> {
    data: &'a RegionalData,
    priors: Priors,
    model: RegionalModel,
    rho: Vec<f64>,
    effects: Vec<Vec<f64>>,
    /// `term[d][i]`: site `d`, block `i`; zero where the site is not recording.
    term: Vec<Vec<f64>>,
    phi: Vec<f64>,
    prior: f64,
    dims: Vec<usize>,
}

impl<'a> Chain<'a> {
    fn site_term(&self, m: &RegionalModel, d: usize, i: usize, r: &[f64]) -> f64 {
        let site = &self.data.sites[d];
        match &site.blocks[i] {
            Some(mags) => block_log_term(site.threshold, &site_params(m, d, r), mags),
            None => 0.0,
        }
    }

    fn log_posterior(&self) -> f64 {
        self.term.iter().flatten().sum::<f64>() + self.phi.iter().sum::<f64>() + self.prior
    }

    fn draw(&self) -> Draw {
        Draw {
            intercepts: self.model.intercepts.clone(),
            slopes: self.model.slopes,
            correlations: self.rho.clone(),
            effects: self.effects.clone(),
            log_posterior: self.log_posterior(),
        }
    }

    /// Propose a change to one component; returns the acceptance probability
    /// and whether the move was taken.
    fn update(&mut self, c: Component, step: f64, rng: &mut ChaCha8Rng) -> (f64, bool) {
        let eps: f64 = rng.sample::<f64, _>(StandardNormal) * step;
        let n_d = self.data.sites.len();
        let n_y = self.data.n_blocks();
        let (delta, apply): (f64, Box<dyn FnOnce(&mut Self)>) = match c {
            Component::Intercept(d, p) => {
                let mut m = self.model.clone();
                m.intercepts[d][p] += eps;
                let prior = self.priors.log_density(&m);
                if prior == f64::NEG_INFINITY {
                    return (0.0, false);
                }
                let new: Vec<f64> = (0..n_y).map(|i| self.site_term(&m, d, i, &self.effects[i])).collect();
                let delta = new.iter().sum::<f64>() - self.term[d].iter().sum::<f64>() + prior - self.prior;
                (
                    delta,
                    Box::new(move |s: &mut Self| {
                        s.model = m;
                        s.term[d] = new;
                        s.prior = prior;
                    }),
                )
            }
            Component::Slope(p) => {
                // the data inform slope * effect; the effects stay fixed here,
                // so scaling the step by their spread keeps the proposal symmetric
                let spread = match self.dims.iter().position(|&q| q == p) {
                    Some(j) => (self.effects.iter().map(|r| r[j] * r[j]).sum::<f64>() / n_y as f64).sqrt(),
                    None => 1.0,
                };
                let mut m = self.model.clone();
                m.slopes[p] += eps / spread.max(1e-3);
                let prior = self.priors.log_density(&m);
                let new: Vec<Vec<f64>> = (0..n_d)
                    .map(|d| (0..n_y).map(|i| self.site_term(&m, d, i, &self.effects[i])).collect())
                    .collect();
                let delta = new.iter().flatten().sum::<f64>() - self.term.iter().flatten().sum::<f64>() + prior
                    - self.prior;
                (
                    delta,
                    Box::new(move |s: &mut Self| {
                        s.model = m;
                        s.term = new;
                        s.prior = prior;
                    }),
                )
            }
            Component::Correlation(p) => {
                let old = self.rho[p];
                let proposed = (old.atanh() + eps).tanh();
                let mut rho = self.rho.clone();
                rho[p] = proposed;
                let law = match EffectLaw::from_pairs(self.model.dims.count(), &rho) {
                    Ok(l) => l,
                    Err(_) => return (0.0, false),
                };
                let phi: Vec<f64> = self.effects.iter().map(|r| law.log_density(r)).collect();
                // flat prior on rho, random walk on atanh(rho)
                let jacobian = (1.0 - proposed * proposed).ln() - (1.0 - old * old).ln();
                let delta = phi.iter().sum::<f64>() - self.phi.iter().sum::<f64>() + jacobian;
                (
                    delta,
                    Box::new(move |s: &mut Self| {
                        s.model.law = law;
                        s.rho = rho;
                        s.phi = phi;
                    }),
                )
            }
            Component::Rescale(j) => {
                // the likelihood only sees slope * effect, so it does not change
                let p = self.dims[j];
                let c = eps.exp();
                let mut m = self.model.clone();
                m.slopes[p] *= c;
                let prior = self.priors.log_density(&m);
                let effects: Vec<Vec<f64>> = self
                    .effects
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r[j] /= c;
                        r
                    })
                    .collect();
                let phi: Vec<f64> = effects.iter().map(|r| self.model.law.log_density(r)).collect();
                let jacobian = (1.0 - n_y as f64) * eps;
                let delta = phi.iter().sum::<f64>() - self.phi.iter().sum::<f64>() + prior - self.prior + jacobian;
                (
                    delta,
                    Box::new(move |s: &mut Self| {
                        s.model = m;
                        s.effects = effects;
                        s.phi = phi;
                        s.prior = prior;
                    }),
                )
            }
            Component::Effect(i, j) => {
                let mut r = self.effects[i].clone();
                r[j] += eps;
                let new: Vec<f64> = (0..n_d).map(|d| self.site_term(&self.model, d, i, &r)).collect();
                let phi = self.model.law.log_density(&r);
                let old: f64 = (0..n_d).map(|d| self.term[d][i]).sum();
                let delta = new.iter().sum::<f64>() - old + phi - self.phi[i];
                (
                    delta,
                    Box::new(move |s: &mut Self| {
                        for (d, t) in new.into_iter().enumerate() {
                            s.term[d][i] = t;
                        }
                        s.effects[i] = r;
                        s.phi[i] = phi;
                    }),
                )
            }
        };
        if delta.is_nan() || delta == f64::NEG_INFINITY {
            return (0.0, false);
        }
        let alpha = delta.min(0.0).exp();
        let u: f64 = rng.random();
        if u < alpha {
            apply(self);
            (alpha, true)
        } else {
            (alpha, false)
        }
    }
}

fn site_params(m: &RegionalModel, d: usize, r: &[f64]) -> NhppParams {
    let [mu0, sigma0, xi0] = m.intercepts[d];
    let c = Coefficients {
        mu0,
        mu1: m.slopes[0],
        sigma0,
        sigma1: m.slopes[1],
        xi0,
        xi1: m.slopes[2],
    };
    m.dims.params(&c, r)
}

fn component_name(c: Component, n_sites: usize, dims: &[usize], labels: &[i64]) -> String {
    const P: [&str; 3] = ["mu", "sigma", "xi"];
    match c {
        Component::Intercept(_, p) if n_sites == 1 => format!("{}0", P[p]),
        Component::Intercept(d, p) => format!("{}0[{d}]", P[p]),
        Component::Slope(p) => format!("{}1", P[p]),
        Component::Correlation(p) => format!("rho[{p}]"),
        Component::Effect(i, j) => format!("r_{}[{}]", P[dims[j]], labels[i]),
        Component::Rescale(j) => format!("{}1:r_{}", P[dims[j]], P[dims[j]]),
    }
}

/// Sample the posterior of a regional (or, with one site, single-site)
/// random-effects model starting from `init` with effects at zero.
pub fn fit_bayes(
    data: &RegionalData,
    init: &RegionalModel,
    priors: &Priors,
    config: &McmcConfig,
) -> Result<PosteriorSamples> {
    priors.validate()?;
    if config.iterations <= config.burn_in || config.thin == 0 {
        return Err(Error::InvalidInput(
            "iterations must exceed burn-in and thinning must be positive".into(),
        ));
    }
    if !(config.target_acceptance > 0.0 && config.target_acceptance < 1.0) {
        return Err(Error::InvalidInput("target acceptance must lie in (0, 1)".into()));
    }
    if data.sites.len() != init.intercepts.len() || data.sites.is_empty() {
        return Err(Error::InvalidInput("one set of intercepts per site is required".into()));
    }
    if init.law.dim() != init.dims.count() || init.dims.count() == 0 {
        return Err(Error::InvalidInput("the model needs at least one effect dimension".into()));
    }
    let dims = init.dims.indices();
    let k = dims.len();
    if (0..3).any(|i| !dims.contains(&i) && init.slopes[i] != 0.0) {
        return Err(Error::InvalidInput(
            "slopes of parameters without random effects must be zero".into(),
        ));
    }
    let rho = init.law.pairs();
    if rho.iter().any(|r| r.abs() >= 1.0) {
        return Err(Error::PriorMismatch("rho".into()));
    }
    let prior = priors.log_density(init);
    if prior == f64::NEG_INFINITY {
        return Err(Error::PriorMismatch("xi0".into()));
    }
    let n_y = data.n_blocks();
    let n_d = data.sites.len();
    let effects = vec![vec![0.0; k]; n_y];
    let mut chain = Chain {
        data,
        priors: *priors,
        model: init.clone(),
        rho,
        phi: effects.iter().map(|r| init.law.log_density(r)).collect(),
        effects,
        term: Vec::new(),
        prior,
        dims: dims.clone(),
    };
    chain.term = (0..n_d)
        .map(|d| (0..n_y).map(|i| chain.site_term(init, d, i, &chain.effects[i])).collect())
        .collect();
    if !chain.log_posterior().is_finite() {
        return Err(Error::InvalidInput(
            "initial values give zero likelihood; some exceedance lies outside the support".into(),
        ));
    }

    let mut components = Vec::new();
    for d in 0..n_d {
        for p in 0..3 {
            components.push(Component::Intercept(d, p));
        }
    }
    for &p in &dims {
        components.push(Component::Slope(p));
    }
    for j in 0..k {
        components.push(Component::Rescale(j));
    }
    for p in 0..k * (k - 1) / 2 {
        components.push(Component::Correlation(p));
    }
    for i in 0..n_y {
        for j in 0..k {
            components.push(Component::Effect(i, j));
        }
    }
    let initial_steps: Vec<f64> = components
        .iter()
        .map(|c| match *c {
            Component::Intercept(d, 0) => 0.1 * init.intercepts[d][1].exp(),
            Component::Intercept(_, _) => 0.05,
            Component::Slope(0) => 0.1 * init.intercepts[0][1].exp(),
            Component::Slope(_) => 0.05,
            Component::Correlation(_) => 0.2,
            Component::Effect(_, _) => 0.5,
            Component::Rescale(_) => 0.1,
        })
        .collect();
    let mut adapter = Adapter {
        log_scale: initial_steps.iter().map(|s| s.ln()).collect(),
        tried: vec![0; components.len()],
        accepted: vec![0; components.len()],
        alpha_sum: vec![0.0; components.len()],
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draws = Vec::with_capacity((config.iterations - config.burn_in) / config.thin + 1);
    let target = config.target_acceptance;
    for it in 0..config.iterations {
        let adapting = it < config.burn_in;
        // parameters, then effects block by block
        for (ci, &c) in components.iter().enumerate() {
            let (alpha, moved) = chain.update(c, adapter.step(ci), &mut rng);
            adapter.tried[ci] += 1;
            adapter.accepted[ci] += moved as usize;
            adapter.alpha_sum[ci] += alpha;
        }
        if adapting && (it + 1) % ADAPT_BATCH == 0 {
            let batch = (it + 1) / ADAPT_BATCH;
            let half = config.burn_in / ADAPT_BATCH / 2;
            for ci in 0..components.len() {
                if batch <= half {
                    // coarse search on the accept/reject sign
                    let rate = adapter.accepted[ci] as f64 / adapter.tried[ci] as f64;
                    let delta = (0.5 / (batch as f64).sqrt()).min(0.1);
                    adapter.log_scale[ci] += if rate > target { delta } else { -delta };
                } else {
                    // averaging phase: gain 1/k on the mean acceptance probability
                    let alpha = adapter.alpha_sum[ci] / adapter.tried[ci] as f64;
                    let gain = 3.0 / (batch - half) as f64;
                    adapter.log_scale[ci] += (gain * (alpha - target)).clamp(-0.5, 0.5);
                }
            }
        }
        if it + 1 == config.burn_in || (adapting && (it + 1) % ADAPT_BATCH == 0) {
            adapter.tried.iter_mut().for_each(|n| *n = 0);
            adapter.accepted.iter_mut().for_each(|n| *n = 0);
            adapter.alpha_sum.iter_mut().for_each(|a| *a = 0.0);
        }
        if !adapting && (it - config.burn_in) % config.thin == config.thin - 1 {
            draws.push(chain.draw());
        }
    }

    let acceptance = components
        .iter()
        .enumerate()
        .map(|(ci, &c)| ComponentAcceptance {
            name: component_name(c, n_d, &dims, &data.block_labels),
            rate: adapter.accepted[ci] as f64 / adapter.tried[ci].max(1) as f64,
            final_scale: adapter.step(ci),
        })
        .collect();
    Ok(PosteriorSamples {
        dims: init.dims,
        block_labels: data.block_labels.clone(),
        draws,
        acceptance,
        burn_in: config.burn_in,
        thin: config.thin,
    })
}
