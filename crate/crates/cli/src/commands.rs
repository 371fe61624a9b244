//! The `analytic`, `evolve`, `stability` and `invariants` subcommands.

use longwave_core::analytic::{
    boussinesq_periodic_speed, cnoidal_ode_residual, rayleigh_speed, solitary_speed,
};
use longwave_core::diff::{DerivativeScheme, DiffOperator};
use longwave_core::evolution::{
    advisory_dt, evolve_boussinesq, evolve_kdv, factorization_residual, BoussinesqState, NoObserver,
    Trajectory, CFL_CONSTANT,
};
use longwave_core::invariants::{
    canonical_epsilon, compute_invariants, conservation_drift, critical_point_residual,
};
use longwave_core::model::{PhysicalParams, WaveField};
use longwave_core::tracking::crest_position;
use longwave_core::velocity::{omega_pointwise, DEFAULT_MASK};
use longwave_core::Error as CoreError;

use crate::config::Settings;
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::setup::{self, Initial, Model, Output, SchemeDefaults};

/// Record a blow-up in the manifest, write it, and pass the error on.
pub fn guard<T>(
    result: Result<T, CoreError>,
    manifest: &mut Manifest,
    out: &Output,
) -> Result<T, CliError> {
    match result {
        Ok(v) => Ok(v),
        Err(CoreError::BlowUp { t, reason }) => {
            manifest.result("status", "blow_up");
            manifest.number("blowup_t", t);
            out.finish(manifest)?;
            Err(CliError::Core(CoreError::BlowUp { t, reason }))
        }
        Err(e) => Err(e.into()),
    }
}

fn deriv(s: &mut Settings) -> Result<DerivativeScheme, CliError> {
    s.choice("scheme.deriv", &["spectral", "fd4"])?
        .parse()
        .map_err(|e| CliError::Usage(format!("scheme.deriv: {e}")))
}

fn record_invariants(manifest: &mut Manifest, field: &WaveField, params: &PhysicalParams, eps: f64, ops: &DiffOperator) {
    let inv = compute_invariants(field, params, eps, ops);
    manifest.number("Q", inv.q);
    manifest.number("E", inv.e);
    manifest.number("M", inv.m);
    manifest.number("Hfun", inv.hfun);
    if let Some(v) = inv.xg_dot {
        manifest.number("xg_dot", v);
    }
}

fn record_trajectory(manifest: &mut Manifest, traj: &Trajectory, ops: &DiffOperator) {
    manifest.result("steps", traj.steps);
    manifest.number("t_final", traj.final_field.t());
    manifest.number("max_abs_final", traj.final_field.max_abs());
    if traj.invariants.len() > 1 {
        let d = conservation_drift(&traj.invariants);
        manifest.number("drift_Q", d.q);
        manifest.number("drift_E", d.e);
        manifest.number("drift_M", d.m);
        manifest.number("drift_Hfun", d.hfun);
    }
    if let Ok(c) = crest_position(&traj.final_field, ops) {
        manifest.number("crest_x", c.x);
        manifest.number("crest_height", c.height);
    }
    if let Some(f) = &traj.filter {
        manifest.number("filter_k_cut", f.k_cut);
        manifest.result("filter_evaluations", f.evaluations);
        manifest.number("filter_max_removed", f.max_removed);
    }
}

pub fn analytic(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("analytic", None);
    let params = setup::physical(&mut s)?;
    let init = setup::initial(&mut s, &params, "solitary")?;
    let grid = setup::grid_for(&mut s, &init, 160.0, 1024)?;
    let scheme = deriv(&mut s)?;
    let dir = setup::output_dir(&mut s, "out/analytic")?;
    setup::seal(&s, &mut manifest)?;

    let mut out = Output::create(&dir, params, scheme)?;
    let ops = DiffOperator::new(grid, scheme);
    let field = init.field(grid)?;
    match &init {
        Initial::Solitary { spec, .. } => {
            manifest.number("speed", solitary_speed(spec));
            manifest.number("rayleigh_speed", rayleigh_speed(params.g(), params.depth(), spec.h0())?);
            manifest.number("inverse_width", spec.inverse_width());
            let tail = spec.profile(0.5 * grid.length()) / spec.h0();
            manifest.number("tail_ratio", tail);
            manifest.result("tail_ok", tail < 1e-12);
        }
        Initial::Cnoidal { spec, .. } => {
            let (_, raw_mean) = spec.zero_mean_field(grid, 0.0)?;
            manifest.number("m", spec.parameter().value());
            manifest.number("k", spec.k());
            manifest.number("l", spec.l());
            manifest.number("wavelength", spec.wavelength());
            manifest.number("mean_shift", raw_mean);
            manifest.number("frame_speed", spec.frame_speed());
            manifest.number("zero_mean_speed", spec.zero_mean_speed(raw_mean));
            manifest.number("boussinesq_speed", boussinesq_periodic_speed(spec)?);
            let worst = grid.points().iter().map(|&x| cnoidal_ode_residual(spec, x).abs()).fold(0.0, f64::max);
            manifest.number("ode_residual_max", worst);
        }
        Initial::Gaussian { .. } | Initial::File { .. } => {}
    }
    record_invariants(&mut manifest, &field, &params, canonical_epsilon(&params), &ops);
    out.profile("profile.csv", &field)?;
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

pub fn evolve(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("evolve", None);
    let params = setup::physical(&mut s)?;
    let model = setup::model(&mut s)?;
    let init = setup::initial(&mut s, &params, "solitary")?;
    let noise = s.get("initial.noise", 0.0)?;
    let velocity = if model == Model::Boussinesq {
        s.choice("initial.velocity", &["right", "rest"])?
    } else {
        String::new()
    };
    let seed = setup::seed(&mut s)?;
    let grid = setup::grid_for(&mut s, &init, 160.0, 512)?;
    let config = setup::scheme(&mut s, model, &grid, &params, SchemeDefaults::default())?;
    let dir = setup::output_dir(&mut s, "out/evolve")?;
    setup::seal(&s, &mut manifest)?;

    let mut out = Output::create(&dir, params, config.deriv)?;
    let ops = DiffOperator::new(grid, config.deriv);
    let initial = setup::add_noise(init.field(grid)?, noise * params.depth(), seed)?;
    out.profile("profile_initial.csv", &initial)?;
    manifest.number("dt", config.dt);

    let traj = match model {
        Model::Kdv => guard(evolve_kdv(&initial, &params, &config, &mut NoObserver), &mut manifest, &out)?,
        Model::Boussinesq => {
            let rate = match velocity.as_str() {
                "right" => setup::right_moving_rate(&initial, &params, &ops),
                _ => vec![0.0; grid.len()],
            };
            let state = BoussinesqState::new(initial.clone(), rate)?;
            guard(evolve_boussinesq(&state, &params, &config, &mut NoObserver), &mut manifest, &out)?
        }
    };
    for (i, snap) in traj.snapshots.iter().enumerate() {
        out.profile(&format!("snapshot_{i:05}.csv"), snap)?;
    }
    out.profile("profile_final.csv", &traj.final_field)?;
    out.invariants("invariants.csv", &traj.invariants, config.epsilon_for(&params))?;
    if !traj.energy.is_empty() {
        let rows: Vec<Vec<f64>> = traj.energy.iter().map(|&(t, e)| vec![t, e]).collect();
        out.table("energy.csv", &["t", "energy"], &rows)?;
    }
    record_trajectory(&mut manifest, &traj, &ops);
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

pub fn stability(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("stability", None);
    let params = setup::physical(&mut s)?;
    let model = setup::model(&mut s)?;
    let init = setup::initial(&mut s, &params, "solitary")?;
    let grid = setup::grid_for(&mut s, &init, 160.0, 512)?;
    let steps = s.get("stability.steps", 1500usize)?;
    let defaults = SchemeDefaults {
        t_end: None,
        ..Default::default()
    };
    let mut config = setup::scheme(&mut s, model, &grid, &params, defaults)?;
    config.t_end = steps as f64 * config.dt;
    let dir = setup::output_dir(&mut s, "out/stability")?;
    setup::seal(&s, &mut manifest)?;

    let mut out = Output::create(&dir, params, config.deriv)?;
    let ops = DiffOperator::new(grid, config.deriv);
    let advisory = advisory_dt(&grid, &params, CFL_CONSTANT);
    manifest.number("cfl_constant", CFL_CONSTANT);
    manifest.number("advisory_dt", advisory);
    manifest.number("dt", config.dt);
    manifest.number("dt_over_advisory", config.dt / advisory);
    manifest.result("steps", steps);
    let initial = init.field(grid)?;
    let traj = match model {
        Model::Kdv => guard(evolve_kdv(&initial, &params, &config, &mut NoObserver), &mut manifest, &out)?,
        Model::Boussinesq => {
            let state = BoussinesqState::new(initial.clone(), setup::right_moving_rate(&initial, &params, &ops))?;
            guard(evolve_boussinesq(&state, &params, &config, &mut NoObserver), &mut manifest, &out)?
        }
    };
    let growth = traj.final_field.max_abs() / initial.max_abs().max(f64::MIN_POSITIVE);
    manifest.number("growth", growth);
    out.profile("profile_final.csv", &traj.final_field)?;
    manifest.result("status", "stable");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

pub fn invariants(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("invariants", None);
    let params = setup::physical(&mut s)?;
    let init = setup::initial(&mut s, &params, "solitary")?;
    let grid = setup::grid_for(&mut s, &init, 160.0, 1024)?;
    let scheme = deriv(&mut s)?;
    let eps = s.get_auto::<f64>("scheme.epsilon")?.unwrap_or_else(|| canonical_epsilon(&params));
    let dir = setup::output_dir(&mut s, "out/invariants")?;
    setup::seal(&s, &mut manifest)?;

    let mut out = Output::create(&dir, params, scheme)?;
    let ops = DiffOperator::new(grid, scheme);
    let field = init.field(grid)?;
    let inv = compute_invariants(&field, &params, eps, &ops);
    out.invariants("invariants.csv", &[inv], eps)?;
    record_invariants(&mut manifest, &field, &params, eps, &ops);
    match critical_point_residual(&field, &params, &ops) {
        Ok(cp) => {
            manifest.number("critical_lambda", cp.lambda);
            manifest.number("critical_spread", cp.spread);
        }
        Err(e) => manifest.result("critical_point", e),
    }
    manifest.number("factorization_residual", factorization_residual(&field, &params, &ops));
    if let Some(w) = omega_pointwise(&field, &params, &ops, DEFAULT_MASK).median() {
        manifest.number("omega_median", w);
    }
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}
