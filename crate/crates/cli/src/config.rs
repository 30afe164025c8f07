//! Flat TOML run configuration. Precedence is flags, then this file, then
//! built-in defaults.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

/// A real given either as a number or as text such as `"pi/4"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RealValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "R")]
    pub radius: Option<RealValue>,
    pub phi0: Option<RealValue>,
    pub course: Option<RealValue>,
    pub t_end: Option<RealValue>,
    pub dt: Option<RealValue>,
    pub grid: Option<usize>,
    pub format: Option<String>,
    pub chart: Option<String>,
    pub to: Option<String>,
    pub sigma_min: Option<RealValue>,
    pub mu_max: Option<RealValue>,
    pub zero_tol: Option<RealValue>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let err = |message: String| CliError::Config {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        toml::from_str(&text).map_err(|e| err(e.message().to_string()))
    }
}

/// Flag value, else config value, else `None`.
pub fn pick_real(
    flag: Option<f64>,
    file: &Option<RealValue>,
    field: &str,
) -> Result<Option<f64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file {
        None => Ok(None),
        Some(RealValue::Number(x)) => Ok(Some(*x)),
        Some(RealValue::Text(s)) => parse_real(s)
            .map(Some)
            .map_err(|m| CliError::usage(field, m)),
    }
}

/// Parses a decimal number or a multiple of pi: `0.5`, `pi`, `-pi/6`, `2pi/3`, `3*pi/4`.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let s = text.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let bad = || format!("cannot parse {text:?} as a real number");
    let lower = s.to_ascii_lowercase();
    let (numer, denom) = match lower.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (lower.as_str(), None),
    };
    let coefficient = numer
        .strip_suffix("pi")
        .ok_or_else(bad)?
        .trim_end_matches('*')
        .trim();
    let coefficient = match coefficient {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match denom {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None => 1.0,
    };
    Ok(coefficient * std::f64::consts::PI / divisor)
}
