//! Library half of the `longwave` command: configuration layering, CSV
//! and manifest output, and the subcommand and scenario drivers.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod scenarios;
pub mod setup;
pub mod table;
