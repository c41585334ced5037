//! Probability-probability check of inter-arrival times against an exponential law.
//!
//! Bands are pointwise: for each rank, the central quantiles of the fitted
//! exponential probabilities under a parametric bootstrap (rate refitted in
//! every resample).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::runs::EventSet;
use crate::error::{Error, Result};
use crate::numerics::stats::quantile_sorted;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpPoint {
    /// Plotting position `i / (n + 1)`.
    pub empirical: f64,
    /// Fitted exponential cdf at the `i`-th smallest inter-arrival.
    pub model: f64,
    pub lower: f64,
    pub upper: f64,
}

impl PpPoint {
    pub fn inside_band(&self) -> bool {
        self.model >= self.lower && self.model <= self.upper
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BandConfig {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for BandConfig {
    fn default() -> Self {
        Self {
            resamples: 1000,
            level: 0.95,
            seed: 1,
        }
    }
}

/// Gaps between consecutive events on the concatenated timeline `block + time_in_block`.
pub fn interarrival_times(es: &EventSet) -> Vec<f64> {
    let pos: Vec<f64> = es
        .events()
        .iter()
        .map(|e| e.block as f64 + e.time_in_block)
        .collect();
    pos.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn interarrival_pp(es: &EventSet, band: &BandConfig) -> Result<Vec<PpPoint>> {
    if es.len() < 2 {
        return Err(Error::TooFewEvents {
            needed: 2,
            got: es.len(),
        });
    }
    let mut gaps = interarrival_times(es);
    gaps.sort_by(f64::total_cmp);
    let n = gaps.len();
    let mean = gaps.iter().sum::<f64>() / n as f64;
    let model: Vec<f64> = gaps.iter().map(|g| -(-g / mean).exp_m1()).collect();

    // per-rank bootstrap distribution, rank-major
    let sims: Vec<Vec<f64>> = (0..band.resamples)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(band.seed);
            rng.set_stream(b as u64);
            let mut x: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
            x.sort_by(f64::total_cmp);
            let m = x.iter().sum::<f64>() / n as f64;
            x.iter().map(|v| -(-v / m).exp_m1()).collect()
        })
        .collect();
    let alpha = 0.5 * (1.0 - band.level);
    let points = (0..n)
        .map(|i| {
            let mut col: Vec<f64> = sims.iter().map(|s| s[i]).collect();
            col.sort_by(f64::total_cmp);
            PpPoint {
                empirical: (i + 1) as f64 / (n + 1) as f64,
                model: model[i],
                lower: quantile_sorted(&col, alpha),
                upper: quantile_sorted(&col, 1.0 - alpha),
            }
        })
        .collect();
    Ok(points)
}

/// Fraction of P-P points outside their band.
pub fn fraction_outside(points: &[PpPoint]) -> f64 {
    points.iter().filter(|p| !p.inside_band()).count() as f64 / points.len() as f64
}
