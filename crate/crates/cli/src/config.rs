//! `key = value` run files. Keys use the long flag names; a flag given on the
//! command line always wins over the file.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

pub const GLOBAL_KEYS: &[&str] = &["seed", "out", "quiet"];

#[derive(Debug, Default)]
pub struct RunFile {
    values: BTreeMap<String, String>,
}

impl RunFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key = value", no + 1))?;
            let key = k.trim().replace('_', "-");
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                bail!("config line {}: duplicate key `{key}`", no + 1);
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Rejects any key that is neither global nor in `allowed`.
    pub fn check_keys(&self, command: &str, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !GLOBAL_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                let mut valid: Vec<&str> = GLOBAL_KEYS.iter().chain(allowed).copied().collect();
                valid.sort_unstable();
                bail!("unknown config key `{key}` for {command} (valid: {})", valid.join(", "));
            }
        }
        Ok(())
    }

    /// The flag value if given, else the parsed file value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|raw| raw.parse::<T>().map_err(|e| anyhow!("config key `{key}`: {e}")))
            .transpose()
    }
}
