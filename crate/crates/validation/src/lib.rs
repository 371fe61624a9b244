//! Acceptance checks for the long-wave lab, one per criterion.
//!
//! Each check runs the library end to end and returns a [`Report`] listing
//! every individual comparison it made. The `acceptance` test target prints
//! the reports.

mod certificates;
mod dynamics;
mod functionals;

use std::fmt;

use longwave_core::model::PhysicalParams;

pub use certificates::{cnoidal_certificate, critical_depth_for_water, factorization, solitary_certificate};
pub use dynamics::{boussinesq_handling, soliton_interaction, speeds};
pub use functionals::{conservation, deformation_law, hamiltonian_identity};

#[derive(Debug, Clone)]
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(id: u8, title: &'static str) -> Self {
        Self {
            id,
            title,
            passed: true,
            lines: Vec::new(),
        }
    }

    /// Record one comparison; any failed comparison fails the report.
    pub fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.passed &= ok;
        self.lines.push(format!("[{}] {}", if ok { "ok" } else { "violated" }, what.into()));
    }

    /// Record a measured value that is not itself pass/fail.
    pub fn note(&mut self, what: impl Into<String>) {
        self.lines.push(format!("[info] {}", what.into()));
    }

    /// Fold a library error into the report as a failure.
    pub fn absorb<T>(&mut self, what: &str, r: longwave_core::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "criterion {}: {} {}", self.id, self.verdict(), self.title)?;
        for line in &self.lines {
            writeln!(f, "    {line}")?;
        }
        Ok(())
    }
}

pub type Check = fn() -> Report;

/// All criteria in order.
pub fn all() -> [Check; 10] {
    [
        solitary_certificate,
        cnoidal_certificate,
        factorization,
        conservation,
        hamiltonian_identity,
        deformation_law,
        soliton_interaction,
        speeds,
        critical_depth_for_water,
        boussinesq_handling,
    ]
}

pub(crate) fn water() -> PhysicalParams {
    PhysicalParams::gravity_water(1.0).expect("valid constants")
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// "[1.234e-5, 6.789e-7]" with the given number of decimals.
pub(crate) fn sci(values: &[f64], decimals: usize) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.decimals$e}")).collect();
    format!("[{}]", parts.join(", "))
}
