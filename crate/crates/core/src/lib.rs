pub mod covariate;
pub mod declustering;
pub mod error;
pub mod evt;
pub mod io;
pub mod numerics;
pub mod random_effects;
pub mod risk;
pub mod simulation;

pub use error::{Error, Result};
