//! Latent block-level effects: likelihoods, posterior sampling and return levels.

pub mod mcmc;
pub mod model;

pub use mcmc::{
    fit_bayes, initial_model, ComponentAcceptance, Draw, McmcConfig, PosteriorSamples, Priors, STUCK_ACCEPTANCE,
};
pub use model::{
    block_return_level, correlation_from_pairs, marginal_block_cdf, marginal_return_level,
    marginal_return_level_with, re_log_likelihood, regional_log_likelihood, EffectDims, EffectLaw,
    RandomEffectsModel, RegionalData, RegionalModel, SiteRecord, DEFAULT_HERMITE_NODES,
};
