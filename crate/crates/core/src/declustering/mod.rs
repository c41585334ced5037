//! Independent-event extraction from daily series and clustering diagnostics.

pub mod diagnostics;
pub mod runs;
pub mod series;

pub use diagnostics::{fraction_outside, interarrival_pp, BandConfig, PpPoint};
pub use runs::{decluster, Event, EventSet};
pub use series::{quantile_threshold, BlockRule, TimeSeries};
