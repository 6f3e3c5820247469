//! Plain-text `key = value` configuration files.

use crate::error::{Error, Result};

/// Splits `text` into `(key, value)` pairs. Blank lines are skipped and `#`
/// starts a comment.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", no + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", no + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Splits a single `key=value` override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let mut pairs = parse_key_values(s)?;
    match pairs.len() {
        1 => Ok(pairs.remove(0)),
        _ => Err(Error::Config(format!("expected one `key=value`, got `{s}`"))),
    }
}

pub(crate) fn parse_real<T: crate::Real>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<f64>().map(T::lit).map_err(|_| Error::Config(format!("`{key}` expects a number, got `{v}`")))
}

pub(crate) fn parse_count(key: &str, v: &str) -> Result<usize> {
    v.trim().parse::<usize>().map_err(|_| Error::Config(format!("`{key}` expects an integer, got `{v}`")))
}
