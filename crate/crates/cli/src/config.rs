//! Settings resolved from flags, an optional `key = value` file and defaults.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use stormrisk::{Error, Result};

pub const SEED_ENV: &str = "STORMRISK_SEED";

/// Keys are compared after mapping `_` to `-`.
fn normalise(key: &str) -> String {
    key.trim().replace('_', "-")
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("config line {}: expected `key = value`", i + 1))
        })?;
        let k = normalise(k);
        if k.is_empty() {
            return Err(Error::InvalidInput(format!("config line {}: empty key", i + 1)));
        }
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(Error::InvalidInput(format!("config line {}: `{k}` set twice", i + 1)));
        }
    }
    Ok(out)
}

/// Resolves each setting as flag, then config file, then default, and keeps
/// the resolved values for the manifest.
pub struct Resolver {
    file: BTreeMap<String, String>,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(config: Option<&Path>) -> Result<Self> {
        let file = match config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Self {
            file,
            used: BTreeSet::new(),
            resolved: BTreeMap::new(),
        })
    }

    fn from_file<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.used.insert(key.to_string());
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                Error::InvalidInput(format!("config: `{v}` is not a valid value for `{key}`"))
            }),
        }
    }

    pub fn opt<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        self.used.insert(key.to_string());
        let v = match flag {
            Some(v) => Some(v),
            None => self.from_file(key)?,
        };
        if let Some(v) = &v {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    pub fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        Ok(self.opt(key, flag)?.unwrap_or_else(|| {
            self.resolved.insert(key.to_string(), default.to_string());
            default
        }))
    }

    pub fn require<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<T> {
        self.opt(key, flag)?
            .ok_or_else(|| Error::InvalidInput(format!("`--{key}` is required")))
    }

    pub fn path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<Option<PathBuf>> {
        Ok(self.opt(key, flag.map(|p| p.display().to_string()))?.map(PathBuf::from))
    }

    pub fn require_path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
        self.path(key, flag)?
            .ok_or_else(|| Error::InvalidInput(format!("`--{key}` is required")))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&mut self, key: &str, flag: Option<String>, default: &str) -> Result<Vec<T>> {
        let raw = self.get(key, flag, default.to_string())?;
        parse_list(key, &raw)
    }

    /// Seed from the flag, the config file, the environment, or 1.
    pub fn seed(&mut self, flag: Option<u64>) -> Result<u64> {
        let env = match std::env::var(SEED_ENV) {
            Ok(v) => Some(v.trim().parse::<u64>().map_err(|_| {
                Error::InvalidInput(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))
            })?),
            Err(_) => None,
        };
        self.used.insert("seed".into());
        let v = match flag {
            Some(s) => s,
            None => self.from_file("seed")?.or(env).unwrap_or(1),
        };
        self.resolved.insert("seed".into(), v.to_string());
        Ok(v)
    }

    /// Record a value derived during the run.
    pub fn record(&mut self, key: &str, value: impl Display) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    /// Config keys that no setting asked for.
    pub fn unused(&self) -> Vec<String> {
        self.file.keys().filter(|k| !self.used.contains(*k)).cloned().collect()
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }
}

pub fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("`{s}` is not a valid entry for `{key}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let c = parse_config("# header\nseed = 7\nrun_length=3 # trailing\n\n").unwrap();
        assert_eq!(c["seed"], "7");
        assert_eq!(c["run-length"], "3");
        assert!(parse_config("seed 7").is_err());
        assert!(parse_config("seed = 1\nseed = 2").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let mut r = Resolver {
            file: parse_config("run-length = 3\nthreshold-quantile = 0.9").unwrap(),
            used: BTreeSet::new(),
            resolved: BTreeMap::new(),
        };
        assert_eq!(r.get("run-length", Some(5usize), 7).unwrap(), 5);
        assert_eq!(r.get("threshold-quantile", None, 0.97).unwrap(), 0.9);
        assert_eq!(r.get("bands", None, 500usize).unwrap(), 500);
        assert_eq!(r.resolved()["bands"], "500");
        assert!(r.unused().is_empty());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<f64>("T", "10, 100,500").unwrap(), vec![10.0, 100.0, 500.0]);
        assert!(parse_list::<f64>("T", "10,x").is_err());
    }
}
