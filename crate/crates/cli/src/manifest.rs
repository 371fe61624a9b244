use std::collections::BTreeMap;
use std::fmt::Display;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Run record written as `manifest.txt`. It uses the configuration syntax,
/// so passing it back with `--config` reproduces the run; the `library.`,
/// `run.` and `result.` entries are ignored on input.
#[derive(Debug, Clone, Default)]
pub struct Manifest {
    pub command: String,
    pub scenario: Option<String>,
    pub config: BTreeMap<String, String>,
    pub results: Vec<(String, String)>,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, scenario: Option<&str>) -> Self {
        Self {
            command: command.to_string(),
            scenario: scenario.map(str::to_string),
            ..Default::default()
        }
    }

    pub fn result(&mut self, key: &str, value: impl Display) {
        self.results.push((key.to_string(), value.to_string()));
    }

    pub fn number(&mut self, key: &str, value: f64) {
        self.result(key, crate::table::format_number(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "library.version={LIBRARY_VERSION}");
        let _ = writeln!(out, "run.command={}", self.command);
        if let Some(s) = &self.scenario {
            let _ = writeln!(out, "run.scenario={s}");
        }
        for (k, v) in &self.config {
            let _ = writeln!(out, "{k}={v}");
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "result.{k}={v}");
        }
        if !self.files.is_empty() {
            let _ = writeln!(out, "result.files={}", self.files.join(","));
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join("manifest.txt");
        std::fs::write(&path, self.render()).map_err(|e| CliError::io(&path, e))
    }
}
