//! Resolution of the configuration sections shared by several commands.

use std::path::{Path, PathBuf};

use longwave_core::analytic::{CnoidalSpec, SolitarySpec};
use longwave_core::diff::{DerivativeScheme, DiffOperator};
use longwave_core::evolution::{advisory_dt, kdv_rhs, Frame, SchemeConfig, CFL_CONSTANT, DEFAULT_FILTER_CUT};
use longwave_core::invariants::InvariantSet;
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::table;

pub fn physical(s: &mut Settings) -> Result<PhysicalParams, CliError> {
    let g = s.get("physical.g", 9.81)?;
    let depth = s.get("physical.H", 1.0)?;
    let rho = s.get("physical.rho", 1000.0)?;
    let tension = s.get("physical.T", 0.0)?;
    PhysicalParams::new(g, depth, rho, tension).map_err(|e| CliError::Usage(format!("physical: {e}")))
}

pub fn grid(s: &mut Settings, length: f64, n: usize) -> Result<PeriodicGrid, CliError> {
    let length = s.get("grid.L", length)?;
    let n = s.get("grid.N", n)?;
    PeriodicGrid::new(length, n).map_err(|e| CliError::Usage(format!("grid: {e}")))
}

/// Which equation a time-stepping run integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Kdv,
    Boussinesq,
}

pub fn model(s: &mut Settings) -> Result<Model, CliError> {
    Ok(match s.choice("model", &["kdv", "boussinesq"])?.as_str() {
        "kdv" => Model::Kdv,
        _ => Model::Boussinesq,
    })
}

/// Per-command defaults for the `scheme.` section.
#[derive(Debug, Clone, Copy)]
pub struct SchemeDefaults {
    /// `None` when the command derives the end time itself; the key is
    /// then not read.
    pub t_end: Option<f64>,
    /// `None` for the automatic step.
    pub dt: Option<f64>,
    pub alpha: f64,
    pub moving: bool,
    pub invariants_every: usize,
}

impl Default for SchemeDefaults {
    fn default() -> Self {
        Self {
            t_end: Some(1.0),
            dt: None,
            alpha: 0.0,
            moving: false,
            invariants_every: 100,
        }
    }
}

/// Time step used when `scheme.dt=auto`: the KdV dispersive advisory, or
/// a tenth of the linear travel time across one cell for Boussinesq.
pub fn auto_dt(model: Model, grid: &PeriodicGrid, params: &PhysicalParams, cfl: f64) -> f64 {
    match model {
        Model::Kdv => advisory_dt(grid, params, cfl),
        Model::Boussinesq => 0.1 * grid.dx() / params.linear_speed(),
    }
}

pub fn scheme(
    s: &mut Settings,
    model: Model,
    grid: &PeriodicGrid,
    params: &PhysicalParams,
    d: SchemeDefaults,
) -> Result<SchemeConfig, CliError> {
    let deriv: DerivativeScheme = s
        .choice("scheme.deriv", &["spectral", "fd4"])?
        .parse()
        .map_err(|e| CliError::Usage(format!("scheme.deriv: {e}")))?;
    let cfl = s.get("scheme.cfl", CFL_CONSTANT)?;
    let dt = match d.dt {
        None => s.get_auto::<f64>("scheme.dt")?,
        Some(v) => s.get_or_keyword("scheme.dt", v, "auto")?,
    }
    .unwrap_or_else(|| auto_dt(model, grid, params, cfl));
    let t_end = match d.t_end {
        Some(t) => s.get("scheme.t_end", t)?,
        None => 0.0,
    };
    let frame_name = s.choice(
        "scheme.frame",
        if d.moving { &["moving", "fixed"] } else { &["fixed", "moving"] },
    )?;
    let alpha = s.get("scheme.alpha", d.alpha)?;
    let frame = if frame_name == "moving" {
        Frame::Moving { alpha }
    } else {
        Frame::Fixed
    };
    let filter_cut = s.get_or_keyword("scheme.filter_cut", DEFAULT_FILTER_CUT, "none")?;
    let config = SchemeConfig {
        deriv,
        dt,
        t_end,
        filter_cut,
        frame,
        snapshot_every: s.get("scheme.snapshot_every", 0usize)?,
        invariants_every: s.get("scheme.invariants_every", d.invariants_every)?,
        epsilon: s.get_auto("scheme.epsilon")?,
    };
    config.validate().map_err(|e| CliError::Usage(format!("scheme: {e}")))?;
    Ok(config)
}

/// Initial elevation described by the `initial.` section.
#[derive(Debug, Clone)]
pub enum Initial {
    Solitary { spec: SolitarySpec, center: f64 },
    Cnoidal { spec: CnoidalSpec, periods: usize },
    Gaussian { h0: f64, width: f64, center: f64 },
    File { path: PathBuf },
}

pub fn initial(s: &mut Settings, params: &PhysicalParams, default_kind: &str) -> Result<Initial, CliError> {
    let mut kinds = vec![default_kind];
    kinds.extend(["solitary", "cnoidal", "gaussian", "file"].iter().filter(|k| **k != default_kind));
    let kind = s.choice("initial.kind", &kinds)?;
    let bad = |e: longwave_core::Error| CliError::Usage(format!("initial: {e}"));
    Ok(match kind.as_str() {
        "solitary" => Initial::Solitary {
            spec: SolitarySpec::new(s.get("initial.h0", 0.1)?, params).map_err(bad)?,
            center: s.get("initial.center", 0.0)?,
        },
        "cnoidal" => {
            let m = s.get("initial.m", 0.9)?;
            let l = s.get("initial.l", 0.1)?;
            let periods = s.get("initial.periods", 1usize)?;
            if periods == 0 {
                return Err(CliError::Usage("initial.periods must be >= 1".into()));
            }
            Initial::Cnoidal {
                spec: CnoidalSpec::from_parameter(m, l, params).map_err(bad)?,
                periods,
            }
        }
        "gaussian" => {
            let width = s.get("initial.width", 5.0)?;
            if !(width > 0.0) {
                return Err(CliError::Usage(format!("initial.width must be > 0, got {width}")));
            }
            Initial::Gaussian {
                h0: s.get("initial.h0", 0.1)?,
                width,
                center: s.get("initial.center", 0.0)?,
            }
        }
        _ => {
            let path = s.get::<String>("initial.path", String::new())?;
            if path.is_empty() {
                return Err(CliError::Usage("initial.kind=file needs initial.path".into()));
            }
            Initial::File { path: path.into() }
        }
    })
}

impl Initial {
    /// Domain length implied by a cnoidal wave: a whole number of
    /// wavelengths.
    pub fn natural_length(&self) -> Option<f64> {
        match self {
            Initial::Cnoidal { spec, periods } => Some(spec.wavelength() * *periods as f64),
            _ => None,
        }
    }

    pub fn field(&self, grid: PeriodicGrid) -> Result<WaveField, CliError> {
        Ok(match self {
            Initial::Solitary { spec, center } => spec.field(grid, *center, 0.0)?,
            Initial::Cnoidal { spec, .. } => spec.zero_mean_field(grid, 0.0)?.0,
            Initial::Gaussian { h0, width, center } => {
                WaveField::from_fn(grid, 0.0, |x| {
                    let d = grid.wrap(x - center);
                    h0 * (-d * d / (2.0 * width * width)).exp()
                })?
            }
            Initial::File { path } => {
                let field = table::read_profile(path)?.to_field(&path.display().to_string())?;
                if !field.grid().same_as(&grid) {
                    return Err(CliError::Input {
                        path: path.display().to_string(),
                        reason: format!(
                            "file grid (L={}, N={}) differs from the configured grid (L={}, N={})",
                            field.grid().length(),
                            field.grid().len(),
                            grid.length(),
                            grid.len()
                        ),
                    });
                }
                field
            }
        })
    }
}

/// Grid for commands that take an initial condition: a file or cnoidal
/// wave supplies its own length unless `grid.L` is given.
pub fn grid_for(s: &mut Settings, init: &Initial, length: f64, n: usize) -> Result<PeriodicGrid, CliError> {
    let (length, n) = match init {
        Initial::File { path } => {
            let p = table::read_profile(path)?;
            let f = p.to_field(&path.display().to_string())?;
            (f.grid().length(), f.grid().len())
        }
        other => (other.natural_length().unwrap_or(length), n),
    };
    grid(s, length, n)
}

/// Add `noise`·H of uniform seeded noise to a field.
pub fn add_noise(field: WaveField, amplitude: f64, seed: u64) -> Result<WaveField, CliError> {
    if amplitude == 0.0 {
        return Ok(field);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = *field.grid();
    let t = field.t();
    let h = field.into_values().into_iter().map(|v| v + amplitude * rng.gen_range(-1.0..1.0)).collect();
    Ok(WaveField::new(grid, h, t)?)
}

/// Right-moving initial rate for Boussinesq runs: the fixed-frame KdV
/// tendency of `h`.
pub fn right_moving_rate(field: &WaveField, params: &PhysicalParams, ops: &DiffOperator) -> Vec<f64> {
    kdv_rhs(field, params, Frame::Fixed, ops)
}

/// Output directory plus the list of files written into it.
#[derive(Debug)]
pub struct Output {
    pub dir: PathBuf,
    pub params: PhysicalParams,
    pub scheme: DerivativeScheme,
    pub files: Vec<String>,
}

impl Output {
    pub fn create(dir: &Path, params: PhysicalParams, scheme: DerivativeScheme) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            params,
            scheme,
            files: Vec::new(),
        })
    }

    pub fn profile(&mut self, name: &str, field: &WaveField) -> Result<(), CliError> {
        table::write_profile(&self.dir.join(name), field, &self.params, self.scheme)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn invariants(&mut self, name: &str, series: &[InvariantSet], epsilon: f64) -> Result<(), CliError> {
        table::write_invariants(&self.dir.join(name), series, epsilon)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
        table::write_table(&self.dir.join(name), columns, rows)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn finish(&self, manifest: &mut Manifest) -> Result<(), CliError> {
        manifest.files = self.files.clone();
        manifest.write(&self.dir)
    }
}

pub fn output_dir(s: &mut Settings, default: &str) -> Result<PathBuf, CliError> {
    Ok(PathBuf::from(s.get::<String>("output.dir", default.to_string())?))
}

pub fn seed(s: &mut Settings) -> Result<u64, CliError> {
    s.get("seed", 0u64)
}

/// Unused-key check plus the resolved echo for the manifest.
pub fn seal(s: &Settings, manifest: &mut Manifest) -> Result<(), CliError> {
    s.finish()?;
    manifest.config = s.resolved().clone();
    Ok(())
}
