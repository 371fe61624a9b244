use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use longwave_cli::config::Settings;
use longwave_cli::error::CliError;
use longwave_cli::manifest::Manifest;
use longwave_cli::{commands, scenarios};

#[derive(Parser)]
#[command(name = "longwave", version, about = "Shallow-water long-wave experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key=value configuration file; `--section.key=value` flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a closed-form wave and report its properties.
    Analytic(Common),
    /// Integrate the KdV or Boussinesq equation.
    Evolve(Common),
    /// Run at a chosen step and report whether the integration stays bounded.
    Stability(Common),
    /// Evaluate the conserved functionals of an initial profile.
    Invariants(Common),
    /// Run a named experiment.
    Scenario {
        /// One of: solitary_transit, two_soliton, cnoidal_sweep, steepening,
        /// moment_conservation, factorization, boussinesq_filter.
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<Manifest, CliError> {
    let load = |c: &Common| Settings::load(c.config.as_deref(), &c.overrides);
    match cli.command {
        Command::Analytic(c) => commands::analytic(load(&c)?),
        Command::Evolve(c) => commands::evolve(load(&c)?),
        Command::Stability(c) => commands::stability(load(&c)?),
        Command::Invariants(c) => commands::invariants(load(&c)?),
        Command::Scenario { name, common } => {
            if !scenarios::SCENARIOS.contains(&name.as_str()) {
                return scenarios::run(&name, Settings::default());
            }
            scenarios::run(&name, load(&common)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(manifest) => {
            print!("{}", manifest.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("longwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
