//! Run configuration: command-line flags override a JSON config file, which overrides defaults.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_LAMBDA: f64 = 32.0;
pub const DEFAULT_HORIZON: usize = 12;
pub const DEFAULT_BUDGET: usize = 50;
pub const DEFAULT_PX: usize = 1024;

/// Values a config file may set; every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda: Option<f64>,
    pub horizon: Option<usize>,
    pub budget: Option<usize>,
    pub px: Option<usize>,
    pub py: Option<usize>,
    pub window: Option<[f64; 4]>,
    pub logpolar: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// `flag`, else `file`, else `default`.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Worker threads from `CSTAR_THREADS`; unset or 0 lets the pool choose.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var("CSTAR_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .with_context(|| format!("CSTAR_THREADS must be a non-negative integer, got {v:?}")),
        _ => Ok(0),
    }
}

/// Parses `a,b,c,…` into exactly `N` finite numbers.
pub fn parse_list<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let arr: [f64; N] = vals
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))?;
    if arr.iter().all(|v| v.is_finite()) {
        Ok(arr)
    } else {
        Err("values must be finite".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None, None, 3), 3);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<4>("-6,6,-6, 6").unwrap(), [-6.0, 6.0, -6.0, 6.0]);
        assert!(parse_list::<2>("1,2,3").is_err());
        assert!(parse_list::<2>("1,x").is_err());
        assert!(parse_list::<1>("inf").is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"lambda": 2, "colour": 1}"#).is_err());
        let c: FileConfig = serde_json::from_str(r#"{"lambda": 2, "window": [-1, 1, -1, 1]}"#).unwrap();
        assert_eq!(c.lambda, Some(2.0));
    }
}
