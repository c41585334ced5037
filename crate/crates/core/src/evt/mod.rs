//! Generalised extreme value distribution, the threshold point process it
//! induces, stationary likelihood fitting and return levels.

pub mod gev;
pub mod likelihood;

pub use gev::{
    gev_cdf, gev_pdf, integrated_intensity, nhpp_intensity, return_level_stationary,
    return_period_all_exceedances, NhppParams, TimeWindow,
};
pub use likelihood::{
    fit_block_maxima, fit_stationary, stationary_nll, MleFit, ThresholdedData,
};
