//! Flat `key = value` configuration files. Keys are the long flag names
//! (`J`, `N0`, `sigma`, `workers`, ...); command-line flags take precedence.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use crate::error::{AppError, AppResult};

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Config {
    pub fn parse(text: &str) -> AppResult<Config> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| AppError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(AppError::Usage(format!("config line {}: duplicate key {key}", n + 1)));
            }
        }
        Ok(Config { entries, used: RefCell::default() })
    }

    pub fn load(path: &Path) -> AppResult<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        let v = self.entries.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(v)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> AppResult<Option<T>> {
        self.raw(key)
            .map(|v| v.parse().map_err(|_| AppError::Usage(format!("config key {key}: cannot parse {v:?}"))))
            .transpose()
    }

    /// Flag value if given, else the config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> AppResult<Option<T>> {
        let from_file = self.get(key)?;
        Ok(flag.or(from_file))
    }

    pub fn pick_with<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> AppResult<Option<T>> {
        let from_file = self
            .raw(key)
            .map(|v| parse(v).map_err(|m| AppError::Usage(format!("config key {key}: {m}"))))
            .transpose()?;
        Ok(flag.or(from_file))
    }

    /// Fails on keys nobody asked for.
    pub fn finish(&self) -> AppResult<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self.entries.keys().filter(|k| !used.contains(*k)).map(String::as_str).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(AppError::Usage(format!("unknown config keys: {}", unknown.join(", "))))
        }
    }
}

/// Non-negative integer, also accepting forms like `1e5`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.trim().parse::<usize>() {
        return Ok(n);
    }
    let v: f64 = s.trim().parse().map_err(|_| format!("not a count: {s:?}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 9.0e15 {
        Ok(v as usize)
    } else {
        Err(format!("not a count: {s:?}"))
    }
}

/// `start:stop:count` (inclusive, evenly spaced) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let grid = match parts.as_slice() {
        [start, stop, count] => {
            let (a, b) = (num(start)?, num(stop)?);
            let n = parse_count(count)?;
            match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect(),
            }
        }
        [list] => list.split(',').map(|t| num(t.trim())).collect::<Result<_, _>>()?,
        _ => return Err(format!("grid must be start:stop:count or a list: {s:?}")),
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err("grid values must be finite".into());
    }
    Ok(grid)
}
