//! CSV tables read and written by the command-line tool.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::declustering::{BlockRule, Event, EventSet, PpPoint, TimeSeries};
use crate::error::{Error, Result};
use crate::random_effects::PosteriorSamples;
use crate::random_effects::mcmc::Draw;
use crate::risk::{RiskCurve, RiskStatus};

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<std::fs::File> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A CSV table with a mandatory header, addressed by column name.
struct Table {
    header: Vec<String>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::InvalidInput(format!("line 1: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        if header.iter().all(|h| h.is_empty()) {
            return Err(Error::InvalidInput("line 1: missing header row".into()));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::InvalidInput(format!("line {line}: {e}"))
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Self { header, rows })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| {
            Error::InvalidInput(format!(
                "line 1: missing column `{name}` (found {})",
                self.header.join(",")
            ))
        })
    }

    fn has(&self, name: &str) -> bool {
        self.header.iter().any(|h| h == name)
    }
}

fn field<'a>(line: u64, rec: &'a csv::StringRecord, col: usize, name: &str) -> Result<&'a str> {
    rec.get(col)
        .ok_or_else(|| Error::InvalidInput(format!("line {line}: missing value for `{name}`")))
}

fn parse_f64(line: u64, s: &str, name: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::InvalidInput(format!("line {line}: `{s}` is not a number ({name})")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("line {line}: non-finite {name}")))
    }
}

fn parse_i64(line: u64, s: &str, name: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::InvalidInput(format!("line {line}: `{s}` is not an integer ({name})")))
}

fn parse_date(line: u64, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| Error::InvalidInput(format!("line {line}: `{s}` is not an ISO-8601 date")))
}

/// Raw daily series `(date,value)`. Rows with an empty value are treated as missing days.
pub fn read_series<R: Read>(reader: R, rule: BlockRule) -> Result<TimeSeries> {
    let t = Table::read(reader)?;
    let (cd, cv) = (t.column("date")?, t.column("value")?);
    let mut dates = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in &t.rows {
        let d = parse_date(*line, field(*line, rec, cd, "date")?)?;
        let v = field(*line, rec, cv, "value")?;
        if v.is_empty() || v.eq_ignore_ascii_case("na") {
            continue;
        }
        dates.push(d);
        values.push(parse_f64(*line, v, "value")?);
    }
    TimeSeries::new(dates, values, rule)
}

pub fn read_series_file(path: &Path, rule: BlockRule) -> Result<TimeSeries> {
    read_series(open(path)?, rule)
}

/// Events `(block,time_in_block,magnitude)`. The threshold, run length and
/// block span are not part of the table and must be supplied.
pub fn read_events<R: Read>(reader: R, threshold: f64, run_length: usize, blocks: Vec<i64>) -> Result<EventSet> {
    let t = Table::read(reader)?;
    let (cb, ct, cm) = (t.column("block")?, t.column("time_in_block")?, t.column("magnitude")?);
    let mut events = Vec::new();
    for (line, rec) in &t.rows {
        events.push(Event {
            block: parse_i64(*line, field(*line, rec, cb, "block")?, "block")?,
            time_in_block: parse_f64(*line, field(*line, rec, ct, "time_in_block")?, "time_in_block")?,
            magnitude: parse_f64(*line, field(*line, rec, cm, "magnitude")?, "magnitude")?,
        });
    }
    EventSet::new(events, threshold, run_length, blocks)
}

pub fn read_events_file(path: &Path, threshold: f64, run_length: usize, blocks: Vec<i64>) -> Result<EventSet> {
    read_events(open(path)?, threshold, run_length, blocks)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v}")
    }
}

pub fn write_events<W: Write>(writer: W, es: &EventSet) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["block", "time_in_block", "magnitude"])?;
    for e in es.events() {
        w.write_record([e.block.to_string(), fmt(e.time_in_block), fmt(e.magnitude)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_events_file(path: &Path, es: &EventSet) -> Result<()> {
    write_events(create(path)?, es)
}

pub fn write_pp<W: Write>(writer: W, pts: &[PpPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["empirical", "model", "lower", "upper", "inside"])?;
    for p in pts {
        w.write_record([
            fmt(p.empirical),
            fmt(p.model),
            fmt(p.lower),
            fmt(p.upper),
            (p.inside_band() as u8).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_pp_file(path: &Path, pts: &[PpPoint]) -> Result<()> {
    write_pp(create(path)?, pts)
}

/// Block covariates, from `(block,s)` rows or `(date,s)` rows averaged within
/// blocks under `rule`.
pub fn read_covariates<R: Read>(reader: R, rule: BlockRule) -> Result<BTreeMap<i64, f64>> {
    let t = Table::read(reader)?;
    let cs = t.column("s")?;
    let mut acc: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    if t.has("block") {
        let cb = t.column("block")?;
        for (line, rec) in &t.rows {
            let b = parse_i64(*line, field(*line, rec, cb, "block")?, "block")?;
            let s = parse_f64(*line, field(*line, rec, cs, "s")?, "s")?;
            if acc.insert(b, (s, 1)).is_some() {
                return Err(Error::InvalidInput(format!("line {line}: block {b} listed twice")));
            }
        }
    } else if t.has("date") {
        let cd = t.column("date")?;
        for (line, rec) in &t.rows {
            let b = rule.block_of(parse_date(*line, field(*line, rec, cd, "date")?)?);
            let s = parse_f64(*line, field(*line, rec, cs, "s")?, "s")?;
            let e = acc.entry(b).or_insert((0.0, 0));
            e.0 += s;
            e.1 += 1;
        }
    } else {
        return Err(Error::InvalidInput("line 1: covariates need a `block` or `date` column".into()));
    }
    Ok(acc.into_iter().map(|(b, (s, n))| (b, s / n as f64)).collect())
}

pub fn read_covariates_file(path: &Path, rule: BlockRule) -> Result<BTreeMap<i64, f64>> {
    read_covariates(open(path)?, rule)
}

pub fn write_covariates<W: Write>(writer: W, blocks: &[i64], s: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["block", "s"])?;
    for (b, v) in blocks.iter().zip(s) {
        w.write_record([b.to_string(), fmt(*v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_covariates_file(path: &Path, blocks: &[i64], s: &[f64]) -> Result<()> {
    write_covariates(create(path)?, blocks, s)
}

/// Block effect vectors, one column per included dimension.
pub fn write_effects_file(path: &Path, blocks: &[i64], names: &[&str], effects: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header = vec!["block".to_string()];
    header.extend(names.iter().map(|n| n.to_string()));
    w.write_record(&header)?;
    for (b, r) in blocks.iter().zip(effects) {
        let mut row = vec![b.to_string()];
        row.extend(r.iter().map(|v| fmt(*v)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Block maxima `(block,maximum)`.
pub fn read_block_maxima<R: Read>(reader: R) -> Result<Vec<(i64, f64)>> {
    let t = Table::read(reader)?;
    let (cb, cm) = (t.column("block")?, t.column("maximum")?);
    t.rows
        .iter()
        .map(|(line, rec)| {
            Ok((
                parse_i64(*line, field(*line, rec, cb, "block")?, "block")?,
                parse_f64(*line, field(*line, rec, cm, "maximum")?, "maximum")?,
            ))
        })
        .collect()
}

pub fn read_block_maxima_file(path: &Path) -> Result<Vec<(i64, f64)>> {
    read_block_maxima(open(path)?)
}

pub fn write_block_maxima_file(path: &Path, blocks: &[i64], maxima: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["block", "maximum"])?;
    for (b, m) in blocks.iter().zip(maxima) {
        w.write_record([b.to_string(), fmt(*m)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteRow {
    pub site: String,
    pub threshold: f64,
    pub first_year: i64,
    pub last_year: i64,
}

impl SiteRow {
    pub fn blocks(&self) -> Vec<i64> {
        (self.first_year..=self.last_year).collect()
    }
}

pub fn read_sites<R: Read>(reader: R) -> Result<Vec<SiteRow>> {
    let t = Table::read(reader)?;
    let c = [
        t.column("site")?,
        t.column("threshold")?,
        t.column("first_year")?,
        t.column("last_year")?,
    ];
    let mut out = Vec::new();
    for (line, rec) in &t.rows {
        let row = SiteRow {
            site: field(*line, rec, c[0], "site")?.to_string(),
            threshold: parse_f64(*line, field(*line, rec, c[1], "threshold")?, "threshold")?,
            first_year: parse_i64(*line, field(*line, rec, c[2], "first_year")?, "first_year")?,
            last_year: parse_i64(*line, field(*line, rec, c[3], "last_year")?, "last_year")?,
        };
        if row.last_year < row.first_year {
            return Err(Error::InvalidInput(format!("line {line}: last_year precedes first_year")));
        }
        if out.iter().any(|r: &SiteRow| r.site == row.site) {
            return Err(Error::InvalidInput(format!("line {line}: site `{}` listed twice", row.site)));
        }
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("the site table has no rows".into()));
    }
    Ok(out)
}

pub fn read_sites_file(path: &Path) -> Result<Vec<SiteRow>> {
    read_sites(open(path)?)
}

pub fn write_sites_file(path: &Path, rows: &[SiteRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["site", "threshold", "first_year", "last_year"])?;
    for r in rows {
        w.write_record([r.site.clone(), fmt(r.threshold), r.first_year.to_string(), r.last_year.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_risk_curve<W: Write>(writer: W, c: &RiskCurve) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["T_star", "R", "lo95", "hi95", "numerator", "denominator", "status"])?;
    for p in &c.points {
        let status = match p.status {
            RiskStatus::Defined => "defined",
            RiskStatus::Undefined => "undefined",
        };
        w.write_record([
            fmt(p.t_star),
            fmt(p.r),
            fmt(p.lower),
            fmt(p.upper),
            fmt(p.numerator),
            fmt(p.denominator),
            status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_risk_curve_file(path: &Path, c: &RiskCurve) -> Result<()> {
    write_risk_curve(create(path)?, c)
}

/// Column names of the posterior table for a given sample layout.
pub fn posterior_columns(post: &PosteriorSamples) -> Vec<String> {
    let n_sites = post.n_sites();
    let dims = post.dims.indices();
    let k = dims.len();
    const P: [&str; 3] = ["mu", "sigma", "xi"];
    let mut cols = vec!["log_posterior".to_string()];
    for d in 0..n_sites {
        for p in P {
            cols.push(if n_sites == 1 { format!("{p}0") } else { format!("{p}0[{d}]") });
        }
    }
    for &i in &dims {
        cols.push(format!("{}1", P[i]));
    }
    for p in 0..k * (k - 1) / 2 {
        cols.push(format!("rho[{p}]"));
    }
    for b in &post.block_labels {
        for &i in &dims {
            cols.push(format!("r_{}[{b}]", P[i]));
        }
    }
    cols
}

/// One draw per row; values are written with round-trip precision.
pub fn write_posterior<W: Write>(writer: W, post: &PosteriorSamples) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(posterior_columns(post))?;
    let dims = post.dims.indices();
    for d in &post.draws {
        let mut row = vec![fmt(d.log_posterior)];
        for b in &d.intercepts {
            row.extend(b.iter().map(|v| fmt(*v)));
        }
        for &i in &dims {
            row.push(fmt(d.slopes[i]));
        }
        row.extend(d.correlations.iter().map(|v| fmt(*v)));
        for r in &d.effects {
            row.extend(r.iter().map(|v| fmt(*v)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_posterior_file(path: &Path, post: &PosteriorSamples) -> Result<()> {
    write_posterior(create(path)?, post)
}

/// Read draws written by [`write_posterior`] into a sample with the given layout
/// (`template` supplies dims, block labels, site count and diagnostics).
pub fn read_posterior<R: Read>(reader: R, template: &PosteriorSamples, n_sites: usize) -> Result<Vec<Draw>> {
    let t = Table::read(reader)?;
    let dims = template.dims.indices();
    let k = dims.len();
    let n_y = template.block_labels.len();
    let expected = 1 + 3 * n_sites + k + k * (k - 1) / 2 + n_y * k;
    if t.header.len() != expected {
        return Err(Error::InvalidInput(format!(
            "line 1: posterior table has {} columns, expected {expected}",
            t.header.len()
        )));
    }
    let mut draws = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let v: Vec<f64> = (0..expected)
            .map(|c| parse_f64(*line, field(*line, rec, c, &t.header[c])?, &t.header[c]))
            .collect::<Result<_>>()?;
        let mut it = v.into_iter();
        let log_posterior = it.next().unwrap();
        let intercepts = (0..n_sites)
            .map(|_| [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
            .collect();
        let mut slopes = [0.0; 3];
        for &i in &dims {
            slopes[i] = it.next().unwrap();
        }
        let correlations = (0..k * (k - 1) / 2).map(|_| it.next().unwrap()).collect();
        let effects = (0..n_y).map(|_| (0..k).map(|_| it.next().unwrap()).collect()).collect();
        draws.push(Draw {
            intercepts,
            slopes,
            correlations,
            effects,
            log_posterior,
        });
    }
    Ok(draws)
}

pub fn read_posterior_file(path: &Path, template: &PosteriorSamples, n_sites: usize) -> Result<Vec<Draw>> {
    read_posterior(open(path)?, template, n_sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_effects::EffectDims;

    #[test]
    fn series_round_trip_and_missing_values() {
        let text = "date,value\n2000-01-01,1.5\n2000-01-02,\n2000-01-03,2.5\n";
        let ts = read_series(text.as_bytes(), BlockRule::Calendar).unwrap();
        assert_eq!(ts.values(), &[1.5, 2.5]);
        assert_eq!(ts.gap_before(1), 1);
    }

    #[test]
    fn missing_value_column_reports_line() {
        let err = read_series("date,flow\n2000-01-01,1\n".as_bytes(), BlockRule::Calendar).unwrap_err();
        assert!(err.to_string().contains("line 1") && err.to_string().contains("value"));
        let err = read_series("date,value\n2000-01-01,1\n2000-01-02,abc\n".as_bytes(), BlockRule::Calendar).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn events_round_trip() {
        let es = EventSet::new(
            vec![
                Event { block: 2001, time_in_block: 0.25, magnitude: 3.1 },
                Event { block: 2003, time_in_block: 0.5, magnitude: 0.1 + 0.2 },
            ],
            0.0,
            7,
            vec![2000, 2001, 2002, 2003],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_events(&mut buf, &es).unwrap();
        let back = read_events(buf.as_slice(), 0.0, 7, vec![2000, 2001, 2002, 2003]).unwrap();
        assert_eq!(back, es);
    }

    #[test]
    fn covariates_by_block_or_date() {
        let a = read_covariates("block,s\n1,0.5\n2,-1\n".as_bytes(), BlockRule::Calendar).unwrap();
        assert_eq!(a[&2], -1.0);
        let b = read_covariates("date,s\n2000-10-01,1\n2001-03-01,3\n2001-10-01,5\n".as_bytes(), BlockRule::WaterYear).unwrap();
        assert_eq!(b[&2001], 2.0);
        assert_eq!(b[&2002], 5.0);
        assert!(read_covariates("block,s\n1,0.5\n1,2\n".as_bytes(), BlockRule::Calendar).is_err());
    }

    #[test]
    fn sites_validation() {
        let s = read_sites("site,threshold,first_year,last_year\nA,10,1958,2013\n".as_bytes()).unwrap();
        assert_eq!(s[0].blocks().len(), 56);
        assert!(read_sites("site,threshold,first_year,last_year\nA,10,2013,1958\n".as_bytes()).is_err());
        assert!(read_sites("site,threshold\nA,10\n".as_bytes()).is_err());
    }

    #[test]
    fn posterior_round_trip() {
        let post = PosteriorSamples {
            dims: EffectDims::LOCATION_SCALE,
            block_labels: vec![5, 6],
            draws: vec![Draw {
                intercepts: vec![[1.0, 0.1, 0.05], [2.0, 0.2, -0.05]],
                slopes: [0.7, 0.1, 0.0],
                correlations: vec![0.62],
                effects: vec![vec![0.1, -0.2], vec![1.0 / 3.0, 2.0]],
                log_posterior: -12.5,
            }],
            acceptance: vec![],
            burn_in: 0,
            thin: 1,
        };
        let mut buf = Vec::new();
        write_posterior(&mut buf, &post).unwrap();
        let header = String::from_utf8(buf.clone()).unwrap();
        assert!(header.starts_with("log_posterior,mu0[0],sigma0[0],xi0[0],mu0[1]"));
        assert!(header.contains("r_sigma[6]"));
        let back = read_posterior(buf.as_slice(), &post, 2).unwrap();
        assert_eq!(back, post.draws);
    }
}
