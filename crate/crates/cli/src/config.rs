//! Parameter resolution: command-line flag, then config file, then default.
//!
//! Config files are flat `key = value` text. Keys are the long flag names
//! without the leading dashes (`sites`, `v-over-j`, `phi-grid`, ...); `_` and
//! `-` are interchangeable. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Schema(format!(
                    "config line {}: expected key=value, got {line:?}",
                    lineno + 1
                )));
            };
            let key = normalize(k);
            if key.is_empty() {
                return Err(CliError::Schema(format!("config line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), v.trim().to_owned()).is_some() {
                return Err(CliError::Schema(format!("config key {key:?} given twice")));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Looks parameters up for one command and rejects config keys it does not
/// know.
pub struct Resolver<'a> {
    config: &'a ConfigFile,
}

impl<'a> Resolver<'a> {
    pub fn new(command: &str, config: &'a ConfigFile, allowed: &[&str]) -> CliResult<Self> {
        if let Some(bad) = config.keys().find(|k| !allowed.contains(k)) {
            return Err(CliError::Schema(format!(
                "config key {bad:?} is not a parameter of {command} (expected one of: {})",
                allowed.join(", ")
            )));
        }
        Ok(Self { config })
    }

    /// No key check; for the flags every command shares.
    pub fn new_unchecked(config: &'a ConfigFile) -> Self {
        Self { config }
    }

    /// Raw string for `key`, flag first.
    pub fn raw(&self, key: &str, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.config.get(key).map(str::to_owned))
    }

    pub fn opt<T>(&self, key: &str, flag: &Option<String>) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key, flag)
            .map(|s| {
                s.trim()
                    .parse::<T>()
                    .map_err(|e| CliError::Schema(format!("--{key}: cannot parse {s:?}: {e}")))
            })
            .transpose()
    }

    pub fn get<T>(&self, key: &str, flag: &Option<String>, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.opt(key, flag)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str, flag: bool) -> CliResult<bool> {
        if flag {
            return Ok(true);
        }
        match self.config.get(key) {
            None => Ok(false),
            Some(v) => v
                .parse::<bool>()
                .map_err(|_| CliError::Schema(format!("{key}: expected true or false, got {v:?}"))),
        }
    }
}

fn parse_f64(key: &str, s: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Schema(format!("--{key}: {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Schema(format!("--{key}: {s:?} is not finite")));
    }
    Ok(v)
}

/// `a:b` with `a < b`.
pub fn parse_window(key: &str, s: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(CliError::Schema(format!("--{key}: expected a:b, got {s:?}")));
    }
    let (a, b) = (parse_f64(key, parts[0])?, parse_f64(key, parts[1])?);
    if !(a < b) {
        return Err(CliError::Schema(format!("--{key}: need a < b, got {s:?}")));
    }
    Ok((a, b))
}

/// `a:b:n`, `n` evenly spaced points from `a` to `b` inclusive.
pub fn parse_grid(key: &str, s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Schema(format!("--{key}: expected a:b:n, got {s:?}")));
    }
    let (a, b) = (parse_f64(key, parts[0])?, parse_f64(key, parts[1])?);
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::Schema(format!("--{key}: point count {:?} is not an integer", parts[2])))?;
    match n {
        0 => Err(CliError::Schema(format!("--{key}: need at least one point"))),
        1 => Ok(vec![a]),
        _ if !(a < b) => Err(CliError::Schema(format!("--{key}: need a < b for n > 1, got {s:?}"))),
        _ => {
            let step = (b - a) / (n - 1) as f64;
            Ok((0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect())
        }
    }
}

/// `a:b:step` over integers, or a comma-separated list.
pub fn parse_int_list(key: &str, s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Schema(format!("--{key}: expected a:b:step or a comma list, got {s:?}"));
    let out: Vec<usize> = if s.contains(':') {
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?;
        match parts[..] {
            [a, b, step] if step > 0 && a <= b => (a..=b).step_by(step).collect(),
            _ => return Err(bad()),
        }
    } else {
        s.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?
    };
    if out.is_empty() || out.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Schema(format!("--{key}: values must be strictly increasing")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = ConfigFile::parse("# comment\nsites = 5\n\nv_over_j=0.1\n").unwrap();
        assert_eq!(cfg.get("sites"), Some("5"));
        assert_eq!(cfg.get("v-over-j"), Some("0.1"));
        assert!(ConfigFile::parse("sites 5").is_err());
        assert!(ConfigFile::parse("sites=1\nsites=2").is_err());
        assert!(ConfigFile::parse("=3").is_err());
    }

    #[test]
    fn precedence() {
        let cfg = ConfigFile::parse("sites=5\natoms=2").unwrap();
        let r = Resolver::new("t", &cfg, &["sites", "atoms", "tau"]).unwrap();
        assert_eq!(r.get::<usize>("sites", &Some("7".into()), 3).unwrap(), 7);
        assert_eq!(r.get::<usize>("atoms", &None, 1).unwrap(), 2);
        assert_eq!(r.get::<f64>("tau", &None, 0.5).unwrap(), 0.5);
        assert!(r.get::<usize>("sites", &Some("x".into()), 3).is_err());
        assert!(Resolver::new("t", &cfg, &["sites"]).is_err());
    }

    #[test]
    fn grids_and_windows() {
        assert_eq!(parse_window("w", "0:10").unwrap(), (0.0, 10.0));
        assert!(parse_window("w", "10:0").is_err());
        assert!(parse_window("w", "0:1:2").is_err());
        assert_eq!(parse_grid("g", "0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("g", "2:2:1").unwrap(), vec![2.0]);
        assert!(parse_grid("g", "0:1:0").is_err());
        assert!(parse_grid("g", "1:0:3").is_err());
        assert!(parse_grid("g", "0:nan:3").is_err());
        let g = parse_grid("g", "0:6.25:200").unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!(g[199], 6.25);
    }

    #[test]
    fn integer_lists() {
        assert_eq!(parse_int_list("n", "2:8:2").unwrap(), vec![2, 4, 6, 8]);
        assert_eq!(parse_int_list("n", "3,4,5,7,9").unwrap(), vec![3, 4, 5, 7, 9]);
        assert!(parse_int_list("n", "3,3").is_err());
        assert!(parse_int_list("n", "2:8:0").is_err());
        assert!(parse_int_list("n", "a,b").is_err());
    }
}
