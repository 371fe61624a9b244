//! Flat `section.key=value` configuration, layered from a file and
//! command-line overrides, with every resolved value recorded for the
//! run manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Key prefixes written into manifests that are not configuration.
const RECORD_ONLY: [&str; 3] = ["library.", "run.", "result."];

/// Parse `key=value` lines. Blank lines and lines starting with `#` are
/// skipped; whitespace around keys and values is trimmed.
pub fn parse_text(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("{origin}:{}: expected key=value, got `{line}`", i + 1)));
        };
        let key = k.trim();
        if key.is_empty() {
            return Err(CliError::Usage(format!("{origin}:{}: empty key", i + 1)));
        }
        if RECORD_ONLY.iter().any(|p| key.starts_with(p)) {
            continue;
        }
        out.insert(key.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Parse `--key=value` and `--key value` pairs.
pub fn parse_overrides(args: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(body) = arg.strip_prefix("--") else {
            return Err(CliError::Usage(format!("unexpected argument `{arg}`; overrides look like --section.key=value")));
        };
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("flag --{body} needs a value")))?;
                (body.to_string(), v.clone())
            }
        };
        if key.is_empty() {
            return Err(CliError::Usage(format!("malformed flag `{arg}`")));
        }
        out.insert(key, value);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    raw: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
}

impl Settings {
    pub fn from_map(raw: BTreeMap<String, String>) -> Self {
        Self {
            raw,
            ..Default::default()
        }
    }

    /// File values first, then overrides on top.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut raw = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_text(&text, &path.display().to_string())?
            }
            None => BTreeMap::new(),
        };
        raw.extend(parse_overrides(overrides)?);
        Ok(Self::from_map(raw))
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.consumed.insert(key.to_string());
        self.raw.get(key).cloned()
    }

    fn record(&mut self, key: &str, value: impl Display) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    /// Value of `key` parsed as `T`, or `default` when absent.
    pub fn get<T>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match self.take(key) {
            Some(text) => text
                .parse::<T>()
                .map_err(|e| CliError::Usage(format!("invalid value `{text}` for `{key}`: {e}")))?,
            None => default,
        };
        self.record(key, &value);
        Ok(value)
    }

    /// Like [`Settings::get`], with `auto` (the default) meaning `None`.
    pub fn get_auto<T>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.get_keyword(key, "auto")
    }

    /// Optional value where the literal `keyword` (also the default) means `None`.
    pub fn get_keyword<T>(&mut self, key: &str, keyword: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.take(key) {
            Some(text) if text != keyword => {
                let v = text
                    .parse::<T>()
                    .map_err(|e| CliError::Usage(format!("invalid value `{text}` for `{key}`: {e}")))?;
                self.record(key, &v);
                Ok(Some(v))
            }
            _ => {
                self.record(key, keyword);
                Ok(None)
            }
        }
    }

    /// `default` when absent, `None` for the literal `keyword`.
    pub fn get_or_keyword<T>(&mut self, key: &str, default: T, keyword: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.take(key) {
            None => {
                self.record(key, &default);
                Ok(Some(default))
            }
            Some(text) if text == keyword => {
                self.record(key, keyword);
                Ok(None)
            }
            Some(_) => self.get_keyword(key, keyword),
        }
    }

    /// Comma-separated list.
    pub fn get_list<T>(&mut self, key: &str, default: &[T]) -> Result<Vec<T>, CliError>
    where
        T: FromStr + Display + Clone,
        T::Err: Display,
    {
        let values = match self.take(key) {
            Some(text) => text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<T>()
                        .map_err(|e| CliError::Usage(format!("invalid list entry `{s}` for `{key}`: {e}")))
                })
                .collect::<Result<Vec<T>, _>>()?,
            None => default.to_vec(),
        };
        if values.is_empty() {
            return Err(CliError::Usage(format!("`{key}` must not be empty")));
        }
        let joined: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        self.record(key, joined.join(","));
        Ok(values)
    }

    /// One of `choices`, defaulting to the first.
    pub fn choice(&mut self, key: &str, choices: &[&str]) -> Result<String, CliError> {
        let value = self.take(key).unwrap_or_else(|| choices[0].to_string());
        if !choices.contains(&value.as_str()) {
            return Err(CliError::Usage(format!(
                "invalid value `{value}` for `{key}`; expected one of: {}",
                choices.join(", ")
            )));
        }
        self.record(key, &value);
        Ok(value)
    }

    /// Error on any supplied key that no resolver asked for.
    pub fn finish(&self) -> Result<(), CliError> {
        let unknown: Vec<&str> = self
            .raw
            .keys()
            .filter(|k| !self.consumed.contains(*k))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("unknown configuration key(s): {}", unknown.join(", "))))
        }
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }
}
