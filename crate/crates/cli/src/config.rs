//! Plain `key = value` config files and the defaults they override.
//!
//! Keys match the long flag names (`alpha`, `eps`, `window`, ...). Lines
//! starting with `#` and blank lines are ignored. Multi-value keys such as
//! `interval` or `window` take whitespace-separated numbers. Command-line
//! flags win over file values, which win over the defaults below.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use polyiter::render::{DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_EPS, DEFAULT_GAMMA, DEFAULT_MAX_ITER, DEFAULT_SIZE};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub eps: f64,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub window: [f64; 4],
    pub size: [usize; 2],
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            k: DEFAULT_MAX_ITER,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            gamma: DEFAULT_GAMMA,
            window: [-1.5, 1.5, -1.5, 1.5],
            size: [DEFAULT_SIZE, DEFAULT_SIZE],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected 'key = value'", n + 1)))?;
            values.insert(key.trim().to_string(), value.trim().trim_matches('"').to_string());
        }
        Ok(Self { values })
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.text(key)
            .map(|v| v.parse::<T>().map_err(|_| CliError::Usage(format!("config key '{key}': invalid value '{v}'"))))
            .transpose()
    }

    pub fn list<T: FromStr, const N: usize>(&self, key: &str) -> Result<Option<[T; N]>, CliError> {
        let Some(v) = self.text(key) else { return Ok(None) };
        let bad = || CliError::Usage(format!("config key '{key}': expected {N} numbers, got '{v}'"));
        let parts: Vec<T> = v.split_whitespace().map(|x| x.parse::<T>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        parts.try_into().map(Some).map_err(|_| bad())
    }
}

/// Flag, then config file, then default.
pub fn pick<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str, default: T) -> Result<T, CliError> {
    Ok(match flag {
        Some(v) => v,
        None => file.get(key)?.unwrap_or(default),
    })
}

pub fn pick_list<T: FromStr + Copy, const N: usize>(
    flag: Option<&[T]>,
    file: &ConfigFile,
    key: &str,
    default: [T; N],
) -> Result<[T; N], CliError> {
    match flag {
        Some(v) => v
            .try_into()
            .map_err(|_| CliError::Usage(format!("--{key} takes {N} values"))),
        None => Ok(file.list(key)?.unwrap_or(default)),
    }
}
