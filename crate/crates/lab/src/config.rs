//! JSON configuration files. Durations may be written as plain seconds or
//! as strings with a unit suffix, e.g. `"4.7 ns"`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};

/// Reads a JSON config, or returns the default when no path is given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

/// Parses `"4.7 ns"`, `"9.4e-9 s"`, `"3us"` or a bare number of seconds.
pub fn parse_duration(text: &str) -> Result<f64> {
    let s = text.trim();
    let split = s
        .find(|c: char| c.is_alphabetic() || c == 'µ')
        .unwrap_or(s.len());
    // An exponent marker followed by a digit or sign belongs to the number.
    let split = match s[split..].chars().next() {
        Some('e' | 'E')
            if s[split + 1..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+') =>
        {
            split
                + 1
                + s[split + 1..]
                    .find(|c: char| c.is_alphabetic() || c == 'µ')
                    .unwrap_or(s.len() - split - 1)
        }
        _ => split,
    };
    let (num, unit) = s.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .with_context(|| format!("invalid duration {text:?}"))?;
    let per_second = match unit.trim() {
        "" | "s" => 1.0,
        "ms" => 1e3,
        "us" | "µs" => 1e6,
        "ns" => 1e9,
        "ps" => 1e12,
        other => bail!("unknown time unit {other:?} in {text:?}"),
    };
    let v = value / per_second;
    if !v.is_finite() {
        bail!("duration {text:?} is not finite");
    }
    Ok(v)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDuration {
    Seconds(f64),
    Text(String),
}

pub fn duration<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    let raw: Option<RawDuration> = Option::deserialize(d)?;
    match raw {
        None => Ok(None),
        Some(RawDuration::Seconds(v)) => Ok(Some(v)),
        Some(RawDuration::Text(t)) => parse_duration(&t).map(Some).map_err(serde::de::Error::custom),
    }
}
