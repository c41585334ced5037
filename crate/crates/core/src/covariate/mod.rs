//! Observed-covariate point-process models.

pub mod kde;
pub mod model;

pub use kde::{kde, kde_with_grid, CovariateDensity};
pub use model::{
    covariate_nll, covariate_nll_per_block, covariate_nll_per_obs, fit_covariate,
    fit_covariate_with, integrated_block_cdf, integrated_tail, return_level_covariate,
    Coefficients, CovariateBlock, CovariateData, CovariateFit, CovariateNhpp, PerBlockData,
    PerObservationData, ALL_FREE, COEFFICIENT_NAMES,
};
