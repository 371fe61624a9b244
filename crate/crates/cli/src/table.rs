//! CSV output for profiles, invariant series and small result tables.
//!
//! Numbers are written with 17 significant digits in exponent form, zero
//! as `0`, so that reading a file back reproduces every value bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use longwave_core::diff::DerivativeScheme;
use longwave_core::invariants::InvariantSet;
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};

use crate::error::CliError;

pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        if v.is_sign_negative() { "-0" } else { "0" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn profile_csv(field: &WaveField, params: &PhysicalParams, scheme: DerivativeScheme) -> String {
    let grid = field.grid();
    let mut out = String::new();
    let header = [
        ("t", format_number(field.t())),
        ("N", grid.len().to_string()),
        ("L", format_number(grid.length())),
        ("H", format_number(params.depth())),
        ("g", format_number(params.g())),
        ("rho", format_number(params.rho())),
        ("T", format_number(params.tension())),
        ("sigma", format_number(params.sigma())),
        ("scheme", scheme.to_string()),
    ];
    for (k, v) in header {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str("x,h\n");
    for (j, h) in field.h().iter().enumerate() {
        let _ = writeln!(out, "{},{}", format_number(grid.x(j)), format_number(*h));
    }
    out
}

pub fn write_profile(
    path: &Path,
    field: &WaveField,
    params: &PhysicalParams,
    scheme: DerivativeScheme,
) -> Result<(), CliError> {
    write_file(path, &profile_csv(field, params, scheme))
}

/// A profile file read back: its header entries and the two columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub header: BTreeMap<String, String>,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
}

impl Profile {
    fn header_number(&self, key: &str, path: &str) -> Result<f64, CliError> {
        let text = self.header.get(key).ok_or_else(|| CliError::Input {
            path: path.to_string(),
            reason: format!("missing header `{key}`"),
        })?;
        text.parse().map_err(|_| CliError::Input {
            path: path.to_string(),
            reason: format!("header `{key}` is not a number: `{text}`"),
        })
    }

    /// Rebuild the field on the grid described by the `L` and `N` headers.
    pub fn to_field(&self, path: &str) -> Result<WaveField, CliError> {
        let length = self.header_number("L", path)?;
        let n = self.header_number("N", path)? as usize;
        if n != self.h.len() {
            return Err(CliError::Input {
                path: path.to_string(),
                reason: format!("header says N={n} but there are {} rows", self.h.len()),
            });
        }
        let t = self.header_number("t", path).unwrap_or(0.0);
        let grid = PeriodicGrid::new(length, n)?;
        Ok(WaveField::new(grid, self.h.clone(), t)?)
    }
}

pub fn parse_profile(text: &str, path: &str) -> Result<Profile, CliError> {
    let bad = |line: usize, reason: String| CliError::Input {
        path: path.to_string(),
        reason: format!("line {line}: {reason}"),
    };
    let mut profile = Profile {
        header: BTreeMap::new(),
        x: Vec::new(),
        h: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                profile.header.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() || line == "x,h" {
            continue;
        }
        let (x, h) = line
            .split_once(',')
            .ok_or_else(|| bad(i + 1, format!("expected `x,h`, got `{line}`")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(i + 1, format!("`{s}`: {e}")));
        profile.x.push(parse(x)?);
        profile.h.push(parse(h)?);
    }
    Ok(profile)
}

pub fn read_profile(path: &Path) -> Result<Profile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_profile(&text, &path.display().to_string())
}

pub fn invariants_csv(series: &[InvariantSet], epsilon: f64) -> String {
    let mut out = format!("# epsilon={}\nt,Q,E,M,Hfun,xg_dot\n", format_number(epsilon));
    for s in series {
        let xg = s.xg_dot.map(format_number).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_number(s.t),
            format_number(s.q),
            format_number(s.e),
            format_number(s.m),
            format_number(s.hfun),
            xg
        );
    }
    out
}

pub fn write_invariants(path: &Path, series: &[InvariantSet], epsilon: f64) -> Result<(), CliError> {
    write_file(path, &invariants_csv(series, epsilon))
}

/// Generic numeric table with a column header line.
pub fn write_table(path: &Path, columns: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    write_file(path, &out)
}
