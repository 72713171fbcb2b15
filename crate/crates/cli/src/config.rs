//! Plain `key = value` configuration files. Keys are the long flag names
//! without the leading dashes; `_` and `-` are interchangeable. Lines starting
//! with `#` and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;

pub const KEYS: &[&str] = &[
    "g",
    "kappa-s",
    "gamma",
    "detuning-c",
    "detuning-x",
    "mode",
    "normalization",
    "outcome-handling",
    "f2-convention",
    "grid-n",
    "range-ks",
    "range-g",
    "resolution",
    "quantity",
    "threads",
    "format",
    "out",
    "alpha",
    "beta",
    "delta",
    "gamma-amp",
    "pol",
    "dir",
    "spin",
    "tau",
    "t-e",
    "t-c",
    "n0",
    "delta-t",
];

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// The flag value if given, else the parsed config value.
    pub fn or<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config `{key}`: invalid value `{v}`: {e}"))
            })
            .transpose()
    }

    pub fn or_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| {
                T::from_str(v, true)
                    .map_err(|e| anyhow!("config `{key}`: invalid value `{v}`: {e}"))
            })
            .transpose()
    }

    pub fn require<T>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.or(flag, key)?
            .ok_or_else(|| anyhow!("missing required value --{key}"))
    }
}
