use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::stats;

/// How calendar dates map to blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BlockRule {
    /// October to September, labelled by the calendar year in which it ends.
    #[default]
    WaterYear,
    /// January to December.
    Calendar,
}

impl BlockRule {
    pub fn block_of(&self, date: NaiveDate) -> i64 {
        match self {
            BlockRule::WaterYear if date.month() >= 10 => date.year() as i64 + 1,
            _ => date.year() as i64,
        }
    }
}

impl std::str::FromStr for BlockRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "water-year" => Ok(BlockRule::WaterYear),
            "calendar" => Ok(BlockRule::Calendar),
            other => Err(Error::InvalidInput(format!(
                "unknown block rule `{other}` (expected water-year or calendar)"
            ))),
        }
    }
}

/// Daily observations of one gauge. Missing days are simply absent.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
    rule: BlockRule,
}

impl TimeSeries {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>, rule: BlockRule) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} dates but {} values",
                dates.len(),
                values.len()
            )));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!(
                "dates must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("values must be finite".into()));
        }
        Ok(Self {
            dates,
            values,
            rule,
        })
    }

    /// Consecutive days starting at `start`, with no gaps.
    pub fn daily(start: NaiveDate, values: Vec<f64>, rule: BlockRule) -> Result<Self> {
        let dates = start.iter_days().take(values.len()).collect();
        Self::new(dates, values, rule)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rule(&self) -> BlockRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn block_labels(&self) -> Vec<i64> {
        self.dates.iter().map(|d| self.rule.block_of(*d)).collect()
    }

    /// Number of calendar days missing between observation `i - 1` and `i`.
    pub fn gap_before(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        ((self.dates[i] - self.dates[i - 1]).num_days() - 1).max(0) as usize
    }

    /// Missing-day gaps, as `(after_date, missing_days)`.
    pub fn gaps(&self) -> Vec<(NaiveDate, usize)> {
        (1..self.len())
            .filter_map(|i| {
                let g = self.gap_before(i);
                (g > 0).then(|| (self.dates[i - 1], g))
            })
            .collect()
    }
}

/// Empirical `q`-quantile of the series values, interpolating linearly between
/// order statistics at position `q (n - 1)`.
pub fn quantile_threshold(ts: &TimeSeries, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidInput(format!("quantile {q} not in (0, 1)")));
    }
    if ts.is_empty() {
        return Err(Error::InvalidInput("empty series".into()));
    }
    Ok(stats::quantile(&ts.values, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn water_year_labels() {
        assert_eq!(BlockRule::WaterYear.block_of(d(2012, 9, 30)), 2012);
        assert_eq!(BlockRule::WaterYear.block_of(d(2012, 10, 1)), 2013);
        assert_eq!(BlockRule::Calendar.block_of(d(2012, 10, 1)), 2012);
    }

    #[test]
    fn median_threshold() {
        let ts = TimeSeries::daily(d(2000, 1, 1), vec![1.0, 2.0, 3.0], BlockRule::Calendar).unwrap();
        assert_eq!(quantile_threshold(&ts, 0.5).unwrap(), 2.0);
        assert!(quantile_threshold(&ts, 1.0).is_err());
        assert!(
            quantile_threshold(&ts, 0.7).unwrap() <= quantile_threshold(&ts, 0.9).unwrap()
        );
    }

    #[test]
    fn validation() {
        assert!(TimeSeries::new(vec![d(2000, 1, 2), d(2000, 1, 1)], vec![1.0, 2.0], BlockRule::Calendar).is_err());
        assert!(TimeSeries::new(vec![d(2000, 1, 1)], vec![f64::NAN], BlockRule::Calendar).is_err());
        let ts = TimeSeries::new(vec![d(2000, 1, 1), d(2000, 1, 5)], vec![1.0, 2.0], BlockRule::Calendar).unwrap();
        assert_eq!(ts.gap_before(1), 3);
        assert_eq!(ts.gaps(), vec![(d(2000, 1, 1), 3)]);
    }
}
