//! Block-level Gaussian random effects entering the point-process parameters.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::covariate::Coefficients;
use crate::declustering::EventSet;
use crate::error::{Error, Result};
use crate::evt::gev::{return_level_stationary, NhppParams};
use crate::numerics::quadrature::NormalQuadrature;
use crate::numerics::roots;

pub const DEFAULT_HERMITE_NODES: usize = 32;

/// Which parameters carry a random effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectDims {
    pub mu: bool,
    pub sigma: bool,
    pub xi: bool,
}

impl EffectDims {
    pub const ALL: EffectDims = EffectDims {
        mu: true,
        sigma: true,
        xi: true,
    };
    pub const LOCATION_SCALE: EffectDims = EffectDims {
        mu: true,
        sigma: true,
        xi: false,
    };
    pub const LOCATION: EffectDims = EffectDims {
        mu: true,
        sigma: false,
        xi: false,
    };

    /// Parameter indices (0 = μ, 1 = σ, 2 = ξ) that carry effects, in order.
    pub fn indices(&self) -> Vec<usize> {
        [self.mu, self.sigma, self.xi]
            .iter()
            .enumerate()
            .filter_map(|(i, on)| on.then_some(i))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.indices().len()
    }

    /// Spread a compact effect vector over `(r_μ, r_σ, r_ξ)`, zeros elsewhere.
    pub fn expand(&self, r: &[f64]) -> [f64; 3] {
        let mut full = [0.0; 3];
        for (k, i) in self.indices().into_iter().enumerate() {
            full[i] = r[k];
        }
        full
    }

    pub fn params(&self, c: &Coefficients, r: &[f64]) -> NhppParams {
        let f = self.expand(r);
        c.at_effects(f[0], f[1], f[2])
    }
}

/// Multivariate normal law of the per-block effects with unit variances.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectLaw {
    correlation: DMatrix<f64>,
    cholesky: DMatrix<f64>,
    precision: DMatrix<f64>,
    log_norm: f64,
}

impl EffectLaw {
    pub fn new(correlation: DMatrix<f64>) -> Result<Self> {
        let k = correlation.nrows();
        if correlation.ncols() != k {
            return Err(Error::InvalidInput("correlation matrix must be square".into()));
        }
        for i in 0..k {
            if (correlation[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput("correlation diagonal must be 1".into()));
            }
            for j in 0..i {
                if (correlation[(i, j)] - correlation[(j, i)]).abs() > 1e-12 {
                    return Err(Error::InvalidInput("correlation must be symmetric".into()));
                }
            }
        }
        let chol = correlation
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidInput("correlation must be positive definite".into()))?;
        let l = chol.l();
        let log_det: f64 = 2.0 * (0..k).map(|i| l[(i, i)].ln()).sum::<f64>();
        let precision = chol.inverse();
        Ok(Self {
            correlation,
            cholesky: l,
            precision,
            log_norm: -0.5 * (k as f64 * (2.0 * PI).ln() + log_det),
        })
    }

    pub fn identity(k: usize) -> Self {
        Self::new(DMatrix::identity(k, k)).expect("identity is a valid correlation")
    }

    /// Correlation from the strictly-lower-triangular entries, row by row:
    /// `(1,0), (2,0), (2,1)`.
    pub fn from_pairs(k: usize, rho: &[f64]) -> Result<Self> {
        Self::new(correlation_from_pairs(k, rho))
    }

    pub fn dim(&self) -> usize {
        self.correlation.nrows()
    }

    pub fn correlation(&self) -> &DMatrix<f64> {
        &self.correlation
    }

    pub fn cholesky(&self) -> &DMatrix<f64> {
        &self.cholesky
    }

    pub fn pairs(&self) -> Vec<f64> {
        let k = self.dim();
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..i {
                out.push(self.correlation[(i, j)]);
            }
        }
        out
    }

    pub fn log_density(&self, r: &[f64]) -> f64 {
        let v = DVector::from_column_slice(r);
        let q = (v.transpose() * &self.precision * &v)[(0, 0)];
        self.log_norm - 0.5 * q
    }
}

pub fn correlation_from_pairs(k: usize, rho: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::identity(k, k);
    let mut idx = 0;
    for i in 0..k {
        for j in 0..i {
            m[(i, j)] = rho[idx];
            m[(j, i)] = rho[idx];
            idx += 1;
        }
    }
    m
}

/// Single-site random-effects model.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomEffectsModel {
    pub coefficients: Coefficients,
    pub dims: EffectDims,
    pub law: EffectLaw,
}

impl RandomEffectsModel {
    pub fn new(coefficients: Coefficients, dims: EffectDims, law: EffectLaw) -> Result<Self> {
        if law.dim() != dims.count() {
            return Err(Error::InvalidInput(format!(
                "correlation is {}x{} but {} effect dimensions are enabled",
                law.dim(),
                law.dim(),
                dims.count()
            )));
        }
        let slopes = [coefficients.mu1, coefficients.sigma1, coefficients.xi1];
        let on = [dims.mu, dims.sigma, dims.xi];
        if (0..3).any(|i| !on[i] && slopes[i] != 0.0) {
            return Err(Error::InvalidInput(
                "slopes of parameters without random effects must be zero".into(),
            ));
        }
        Ok(Self {
            coefficients,
            dims,
            law,
        })
    }

    pub fn params(&self, r: &[f64]) -> NhppParams {
        self.dims.params(&self.coefficients, r)
    }

    pub fn quadrature(&self, nodes: usize) -> NormalQuadrature {
        NormalQuadrature::multivariate(self.law.cholesky(), nodes)
    }
}

/// Exceedances of one site laid out on a common block index.
/// `None` marks blocks in which the site was not recording.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteRecord {
    pub threshold: f64,
    pub blocks: Vec<Option<Vec<f64>>>,
}

/// Several sites sharing one block index.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionalData {
    pub block_labels: Vec<i64>,
    pub sites: Vec<SiteRecord>,
}

impl RegionalData {
    /// Align event sets on the union of their block spans.
    pub fn from_event_sets(sets: &[EventSet]) -> Self {
        let mut labels: Vec<i64> = sets.iter().flat_map(|s| s.blocks().iter().copied()).collect();
        labels.sort_unstable();
        labels.dedup();
        let sites = sets
            .iter()
            .map(|s| {
                let by: std::collections::BTreeMap<i64, Vec<f64>> = s.by_block().into_iter().collect();
                SiteRecord {
                    threshold: s.threshold(),
                    blocks: labels.iter().map(|b| by.get(b).cloned()).collect(),
                }
            })
            .collect();
        Self {
            block_labels: labels,
            sites,
        }
    }

    pub fn single(es: &EventSet) -> Self {
        Self::from_event_sets(std::slice::from_ref(es))
    }

    pub fn n_blocks(&self) -> usize {
        self.block_labels.len()
    }

    pub fn all_magnitudes(&self) -> Vec<f64> {
        self.sites
            .iter()
            .flat_map(|s| s.blocks.iter().flatten().flatten().copied())
            .collect()
    }
}

/// Site-specific intercepts with slopes, effects and correlation shared across sites.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionalModel {
    /// `(μ_d0, log σ_d0, ξ_d0)` per site.
    pub intercepts: Vec<[f64; 3]>,
    /// `(μ1, σ1, ξ1)`; entries for dimensions without effects are zero.
    pub slopes: [f64; 3],
    pub dims: EffectDims,
    pub law: EffectLaw,
}

impl RegionalModel {
    pub fn site(&self, d: usize) -> RandomEffectsModel {
        let [mu0, sigma0, xi0] = self.intercepts[d];
        RandomEffectsModel {
            coefficients: Coefficients {
                mu0,
                mu1: self.slopes[0],
                sigma0,
                sigma1: self.slopes[1],
                xi0,
                xi1: self.slopes[2],
            },
            dims: self.dims,
            law: self.law.clone(),
        }
    }

    pub fn from_single(m: &RandomEffectsModel) -> Self {
        let c = &m.coefficients;
        Self {
            intercepts: vec![[c.mu0, c.sigma0, c.xi0]],
            slopes: [c.mu1, c.sigma1, c.xi1],
            dims: m.dims,
            law: m.law.clone(),
        }
    }
}

/// `-τ(u) + Σ log λ(z)` for one site in one block; `-inf` on support violation.
pub(crate) fn block_log_term(u: f64, p: &NhppParams, magnitudes: &[f64]) -> f64 {
    let lt = p.log_tail(u);
    if lt == f64::INFINITY || lt.is_nan() {
        return f64::NEG_INFINITY;
    }
    let mut total = -lt.exp();
    for &z in magnitudes {
        let li = p.log_intensity(z);
        if !li.is_finite() {
            return f64::NEG_INFINITY;
        }
        total += li;
    }
    total
}

fn check_effects(effects: &[Vec<f64>], n_blocks: usize, k: usize) -> Result<()> {
    if effects.len() != n_blocks {
        return Err(Error::InvalidInput(format!(
            "{} effect vectors for {} blocks",
            effects.len(),
            n_blocks
        )));
    }
    if effects.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidInput(format!("effect vectors must have length {k}")));
    }
    Ok(())
}

/// Single-site log-likelihood including the effect density, one effect vector
/// per block of `data.blocks()`.
pub fn re_log_likelihood(data: &EventSet, model: &RandomEffectsModel, effects: &[Vec<f64>]) -> Result<f64> {
    let blocks = data.by_block();
    check_effects(effects, blocks.len(), model.dims.count())?;
    let mut total = 0.0;
    for ((_, mags), r) in blocks.iter().zip(effects) {
        let p = model.params(r);
        total += block_log_term(data.threshold(), &p, mags) + model.law.log_density(r);
    }
    Ok(if total.is_nan() { f64::NEG_INFINITY } else { total })
}

/// Regional log-likelihood: exponent and intensity terms summed over every
/// site-block in which the site was recording, one effect density per block.
pub fn regional_log_likelihood(data: &RegionalData, model: &RegionalModel, effects: &[Vec<f64>]) -> Result<f64> {
    if data.sites.len() != model.intercepts.len() {
        return Err(Error::InvalidInput(format!(
            "{} sites of data but {} site intercepts",
            data.sites.len(),
            model.intercepts.len()
        )));
    }
    check_effects(effects, data.n_blocks(), model.dims.count())?;
    let site_models: Vec<RandomEffectsModel> = (0..data.sites.len()).map(|d| model.site(d)).collect();
    let mut total = 0.0;
    for (i, r) in effects.iter().enumerate() {
        for (site, m) in data.sites.iter().zip(&site_models) {
            if let Some(mags) = &site.blocks[i] {
                total += block_log_term(site.threshold, &m.params(r), mags);
            }
        }
        total += model.law.log_density(r);
    }
    Ok(if total.is_nan() { f64::NEG_INFINITY } else { total })
}

/// Return level for one block at a given effect vector.
pub fn block_return_level(t: f64, model: &RandomEffectsModel, effect: &[f64]) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::InvalidInput(format!("return period {t} must exceed 1")));
    }
    Ok(return_level_stationary(t, &model.params(effect)))
}

/// Block-maximum cdf with the effects integrated out, `E_r[exp(-τ(z; r))]`.
pub fn marginal_block_cdf(z: f64, model: &RandomEffectsModel, q: &NormalQuadrature) -> f64 {
    q.expect(|r| model.params(r).cdf(z))
}

/// Return level of the effect-averaged block maximum (Gauss-Hermite over the
/// whitened effects, `nodes` per dimension).
pub fn marginal_return_level(t: f64, model: &RandomEffectsModel, nodes: usize) -> Result<f64> {
    let q = model.quadrature(nodes);
    marginal_return_level_with(t, model, &q)
}

pub fn marginal_return_level_with(t: f64, model: &RandomEffectsModel, q: &NormalQuadrature) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::InvalidInput(format!("return period {t} must exceed 1")));
    }
    let target = 1.0 - 1.0 / t;
    let centre = model.params(&vec![0.0; model.dims.count()]);
    let z0 = return_level_stationary(t, &centre);
    let f = |z: f64| marginal_block_cdf(z, model, q) - target;
    let (a, b) = roots::grow_bracket(f, z0, centre.sigma, 80)?;
    if a == b {
        return Ok(a);
    }
    roots::brent(f, a, b, 1e-13 * (1.0 + z0.abs()))
}
