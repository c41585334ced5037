//! The JSON fit artifact shared by `fit`, `return-levels` and `risk`.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use stormrisk::covariate::{Coefficients, CovariateFit};
use stormrisk::evt::NhppParams;
use stormrisk::io;
use stormrisk::random_effects::{ComponentAcceptance, EffectDims, McmcConfig, PosteriorSamples, Priors};
use stormrisk::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryArtifact {
    pub site: String,
    pub threshold: f64,
    pub block_labels: Vec<i64>,
    pub estimate: NhppParams,
    /// Over (mu, sigma, xi).
    pub covariance: Option<Vec<Vec<f64>>>,
    pub nll: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateArtifact {
    pub site: String,
    pub threshold: f64,
    pub block_labels: Vec<i64>,
    /// Block covariates; their kernel density estimate is the covariate law.
    pub covariates: Vec<f64>,
    pub coefficients: Coefficients,
    pub free: [bool; 6],
    /// Over the free coefficients, in order.
    pub covariance: Option<Vec<Vec<f64>>>,
    pub nll: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesArtifact {
    pub sites: Vec<String>,
    pub thresholds: Vec<f64>,
    pub block_labels: Vec<i64>,
    pub dims: EffectDims,
    pub priors: Priors,
    pub mcmc: McmcConfig,
    pub acceptance: Vec<ComponentAcceptance>,
    pub draws: usize,
    /// Posterior table, relative to the artifact.
    pub posterior: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum FitArtifact {
    Stationary(StationaryArtifact),
    Covariate(CovariateArtifact),
    RandomEffects(BayesArtifact),
    Regional(BayesArtifact),
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn rows_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("covariance must be square".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl CovariateArtifact {
    pub fn fit(&self) -> Result<CovariateFit> {
        Ok(CovariateFit {
            coefficients: self.coefficients,
            free: self.free,
            covariance: self.covariance.as_deref().map(rows_matrix).transpose()?,
            nll: self.nll,
            iterations: 0,
        })
    }
}

impl BayesArtifact {
    pub fn load_posterior(&self, artifact: &Path) -> Result<PosteriorSamples> {
        let path = artifact.parent().unwrap_or(Path::new(".")).join(&self.posterior);
        let mut post = PosteriorSamples {
            dims: self.dims,
            block_labels: self.block_labels.clone(),
            draws: Vec::new(),
            acceptance: self.acceptance.clone(),
            burn_in: self.mcmc.burn_in,
            thin: self.mcmc.thin,
        };
        post.draws = io::read_posterior_file(&path, &post, self.sites.len())?;
        if post.draws.is_empty() {
            return Err(Error::InvalidInput(format!("{}: no posterior draws", path.display())));
        }
        Ok(post)
    }

    /// Site index from a name or a zero-based index.
    pub fn site_index(&self, site: Option<&str>) -> Result<usize> {
        match site {
            None => Ok(0),
            Some(s) => self
                .sites
                .iter()
                .position(|n| n == s)
                .or_else(|| s.parse::<usize>().ok().filter(|i| *i < self.sites.len()))
                .ok_or_else(|| Error::InvalidInput(format!("site `{s}` is not in the fit"))),
        }
    }
}

pub fn read(path: &Path) -> Result<FitArtifact> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, a: &FitArtifact) -> Result<()> {
    let text = serde_json::to_string_pretty(a).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
