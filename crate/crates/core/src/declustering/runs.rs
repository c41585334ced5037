//! Runs declustering: a cluster ends once `w` consecutive observations fall
//! at or below the threshold, and only its maximum is kept.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::series::TimeSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub block: i64,
    /// Position within the block, in (0, 1).
    pub time_in_block: f64,
    pub magnitude: f64,
}

/// Independent events above a threshold, grouped by block.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSet {
    events: Vec<Event>,
    threshold: f64,
    run_length: usize,
    /// Every block the record spans, including blocks without events.
    blocks: Vec<i64>,
}

impl EventSet {
    /// Events are sorted by (block, time). `blocks` defaults to the
    /// contiguous range spanned by the events when empty.
    pub fn new(
        mut events: Vec<Event>,
        threshold: f64,
        run_length: usize,
        blocks: Vec<i64>,
    ) -> Result<Self> {
        if run_length == 0 {
            return Err(Error::InvalidInput("run length must be at least 1".into()));
        }
        if let Some(e) = events.iter().find(|e| !(e.magnitude > threshold)) {
            return Err(Error::InvalidInput(format!(
                "event magnitude {} is not above threshold {threshold}",
                e.magnitude
            )));
        }
        if let Some(e) = events
            .iter()
            .find(|e| !(e.time_in_block >= 0.0 && e.time_in_block <= 1.0))
        {
            return Err(Error::InvalidInput(format!(
                "time_in_block {} outside [0, 1]",
                e.time_in_block
            )));
        }
        events.sort_by(|a, b| {
            a.block
                .cmp(&b.block)
                .then(a.time_in_block.total_cmp(&b.time_in_block))
        });
        if let Some(w) = events
            .windows(2)
            .find(|w| w[0].block == w[1].block && w[0].time_in_block >= w[1].time_in_block)
        {
            return Err(Error::InvalidInput(format!(
                "two events at time {} in block {}",
                w[1].time_in_block, w[1].block
            )));
        }
        let blocks = if blocks.is_empty() {
            match (events.first(), events.last()) {
                (Some(a), Some(b)) => (a.block..=b.block).collect(),
                _ => Vec::new(),
            }
        } else {
            let mut b = blocks;
            b.sort_unstable();
            b.dedup();
            if let Some(e) = events.iter().find(|e| b.binary_search(&e.block).is_err()) {
                return Err(Error::InvalidInput(format!(
                    "event in block {} outside the declared block span",
                    e.block
                )));
            }
            b
        };
        Ok(Self {
            events,
            threshold,
            run_length,
            blocks,
        })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn run_length(&self) -> usize {
        self.run_length
    }

    pub fn blocks(&self) -> &[i64] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.magnitude).collect()
    }

    /// Magnitudes per block, in `blocks()` order (empty vectors for quiet blocks).
    pub fn by_block(&self) -> Vec<(i64, Vec<f64>)> {
        let mut map: BTreeMap<i64, Vec<f64>> =
            self.blocks.iter().map(|b| (*b, Vec::new())).collect();
        for e in &self.events {
            map.entry(e.block).or_default().push(e.magnitude);
        }
        map.into_iter().collect()
    }
}

/// Extract cluster maxima from `ts` above `threshold` with run length `w`.
///
/// A gap of `g` missing days counts as `g` observations below the threshold.
/// Ties within a cluster keep the earliest maximum. Events are timed at the
/// cluster maximum, at `(k + 1) / (n + 1)` for the `k`-th of `n` observations
/// of its block.
pub fn decluster(ts: &TimeSeries, threshold: f64, w: usize) -> Result<EventSet> {
    if w == 0 {
        return Err(Error::InvalidInput("run length must be at least 1".into()));
    }
    if !threshold.is_finite() {
        return Err(Error::InvalidInput("threshold must be finite".into()));
    }
    let labels = ts.block_labels();
    // position within block and block sizes
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut position = Vec::with_capacity(labels.len());
    for b in &labels {
        let c = counts.entry(*b).or_insert(0);
        position.push(*c);
        *c += 1;
    }

    let values = ts.values();
    let mut maxima: Vec<usize> = Vec::new();
    let mut current: Option<usize> = None;
    let mut below = 0usize;
    for (i, &v) in values.iter().enumerate() {
        below += ts.gap_before(i);
        if v > threshold {
            match current {
                Some(m) if below < w => {
                    if v > values[m] {
                        current = Some(i);
                    }
                }
                Some(m) => {
                    maxima.push(m);
                    current = Some(i);
                }
                None => current = Some(i),
            }
            below = 0;
        } else {
            below += 1;
        }
    }
    if let Some(m) = current {
        maxima.push(m);
    }

    let events = maxima
        .into_iter()
        .map(|i| {
            let n = counts[&labels[i]];
            Event {
                block: labels[i],
                time_in_block: (position[i] + 1) as f64 / (n + 1) as f64,
                magnitude: values[i],
            }
        })
        .collect();
    EventSet::new(events, threshold, w, counts.keys().copied().collect())
}
