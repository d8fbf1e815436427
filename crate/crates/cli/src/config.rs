//! `key = value` config files overriding grid defaults.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub steps: Option<usize>,
    pub grid_density: Option<usize>,
    pub qudit_max_d: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    /// Blank lines and `#` comments are ignored; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value", n + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let float = || -> Result<Option<f64>> {
                let v: f64 = value
                    .parse()
                    .with_context(|| format!("line {}: {key} is not a number", n + 1))?;
                if !v.is_finite() || v < 0.0 {
                    bail!("line {}: {key} must be finite and nonnegative", n + 1);
                }
                Ok(Some(v))
            };
            let int = || -> Result<Option<usize>> {
                value
                    .parse()
                    .map(Some)
                    .with_context(|| format!("line {}: {key} is not a nonnegative integer", n + 1))
            };
            match key {
                "a_min" => cfg.a_min = float()?,
                "a_max" => cfg.a_max = float()?,
                "s_min" => cfg.s_min = float()?,
                "s_max" => cfg.s_max = float()?,
                "steps" => cfg.steps = int()?,
                "grid_density" => cfg.grid_density = int()?,
                "qudit_max_d" => cfg.qudit_max_d = int()?,
                other => bail!("line {}: unknown key {other:?}", n + 1),
            }
        }
        Ok(cfg)
    }
}
