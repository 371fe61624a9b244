//! Named end-to-end experiments.

use longwave_core::analytic::{
    boussinesq_periodic_speed, cnoidal_ode_residual, rayleigh_speed, solitary_speed, CnoidalSpec, SolitarySpec,
};
use longwave_core::diff::{DerivativeScheme, DiffOperator};
use longwave_core::evolution::{
    evolve_boussinesq, evolve_kdv, factorization_residual, front_slope_trend, steepening_verdict,
    translating_wave_residuals, BoussinesqState, DeformationSpec, Frame, NoObserver, SchemeConfig,
};
use longwave_core::invariants::{conservation_drift, critical_point_residual};
use longwave_core::model::{PeriodicGrid, WaveField};
use longwave_core::tracking::{find_crests, shape_error_about_crest};
use longwave_core::velocity::bernoulli_residual;
use longwave_core::Error as CoreError;

use crate::commands::guard;
use crate::config::Settings;
use crate::error::CliError;
use crate::manifest::Manifest;
use crate::setup::{self, Model, Output, SchemeDefaults};

pub const SCENARIOS: [&str; 7] = [
    "solitary_transit",
    "two_soliton",
    "cnoidal_sweep",
    "steepening",
    "moment_conservation",
    "factorization",
    "boussinesq_filter",
];

pub fn run(name: &str, s: Settings) -> Result<Manifest, CliError> {
    match name {
        "solitary_transit" => solitary_transit(s),
        "two_soliton" => two_soliton(s),
        "cnoidal_sweep" => cnoidal_sweep(s),
        "steepening" => steepening(s),
        "moment_conservation" => moment_conservation(s),
        "factorization" => factorization(s),
        "boussinesq_filter" => boussinesq_filter(s),
        other => Err(CliError::Usage(format!(
            "unknown scenario `{other}`; known scenarios: {}",
            SCENARIOS.join(", ")
        ))),
    }
}

fn usage(e: CoreError) -> CliError {
    CliError::Usage(e.to_string())
}

fn solitary_transit(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("solitary_transit"));
    let params = setup::physical(&mut s)?;
    let spec = SolitarySpec::new(s.get("scenario.h0", 0.1)?, &params).map_err(usage)?;
    let transits = s.get("scenario.transits", 1usize)?;
    let grid = setup::grid(&mut s, 160.0, 1024)?;
    let defaults = SchemeDefaults {
        t_end: None,
        invariants_every: 1000,
        ..Default::default()
    };
    let mut config = setup::scheme(&mut s, Model::Kdv, &grid, &params, defaults)?;
    let dir = setup::output_dir(&mut s, "out/solitary_transit")?;
    setup::seal(&s, &mut manifest)?;

    let w = solitary_speed(&spec);
    let shift = config.frame.velocity(&params);
    config.t_end = transits as f64 * grid.length() / (w - shift).abs();
    let mut out = Output::create(&dir, params, config.deriv)?;
    let ops = DiffOperator::new(grid, config.deriv);
    let tail = spec.profile(0.5 * grid.length()) / spec.h0();
    manifest.number("tail_ratio", tail);
    manifest.result("tail_ok", tail < 1e-12);
    manifest.number("speed", w);
    manifest.number("t_end", config.t_end);
    manifest.number("dt", config.dt);

    let initial = spec.field(grid, 0.0, 0.0)?;
    out.profile("profile_initial.csv", &initial)?;
    let traj = guard(evolve_kdv(&initial, &params, &config, &mut NoObserver), &mut manifest, &out)?;
    out.profile("profile_final.csv", &traj.final_field)?;
    out.invariants("invariants.csv", &traj.invariants, config.epsilon_for(&params))?;

    let (crest, err) = shape_error_about_crest(&traj.final_field, &ops, |x| spec.profile(x))?;
    manifest.result("steps", traj.steps);
    manifest.number("crest_x", crest.x);
    manifest.number("crest_height", crest.height);
    manifest.number("shape_error", err);
    manifest.number("shape_error_rel", err / spec.h0());
    let d = conservation_drift(&traj.invariants);
    manifest.number("drift_Q", d.q);
    manifest.number("drift_E", d.e);
    manifest.number("drift_M", d.m);
    manifest.number("drift_Hfun", d.hfun);
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

fn two_soliton(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("two_soliton"));
    let params = setup::physical(&mut s)?;
    let tall = SolitarySpec::new(s.get("scenario.h0_tall", 0.5)?, &params).map_err(usage)?;
    let short = SolitarySpec::new(s.get("scenario.h0_short", 0.2)?, &params).map_err(usage)?;
    let x_tall: f64 = s.get("scenario.x_tall", -40.0)?;
    let x_short: f64 = s.get("scenario.x_short", 40.0)?;
    if tall.h0() <= short.h0() {
        return Err(CliError::Usage("scenario.h0_tall must exceed scenario.h0_short".into()));
    }
    let grid = setup::grid(&mut s, 200.0, 512)?;
    let defaults = SchemeDefaults {
        t_end: None,
        alpha: -0.175,
        moving: true,
        invariants_every: 1000,
        ..Default::default()
    };
    let mut config = setup::scheme(&mut s, Model::Kdv, &grid, &params, defaults)?;
    let dir = setup::output_dir(&mut s, "out/two_soliton")?;
    setup::seal(&s, &mut manifest)?;

    let v_frame = config.frame.velocity(&params);
    let v_tall = solitary_speed(&tall) - v_frame;
    let v_short = solitary_speed(&short) - v_frame;
    let gap = (x_short - x_tall).rem_euclid(grid.length());
    config.t_end = 2.0 * gap / (v_tall - v_short);
    manifest.number("t_end", config.t_end);
    manifest.number("dt", config.dt);

    let mut out = Output::create(&dir, params, config.deriv)?;
    let ops = DiffOperator::new(grid, config.deriv);
    let initial = WaveField::from_fn(grid, 0.0, |x| {
        tall.profile(grid.wrap(x - x_tall)) + short.profile(grid.wrap(x - x_short))
    })?;
    out.profile("profile_initial.csv", &initial)?;
    let traj = guard(evolve_kdv(&initial, &params, &config, &mut NoObserver), &mut manifest, &out)?;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        out.profile(&format!("snapshot_{i:05}.csv"), snap)?;
    }
    out.profile("profile_final.csv", &traj.final_field)?;
    out.invariants("invariants.csv", &traj.invariants, config.epsilon_for(&params))?;

    let crests = find_crests(&traj.final_field, &ops, 0.25 * short.h0());
    manifest.result("crests", crests.len());
    if crests.len() >= 2 {
        for (label, c, spec, start, v) in [
            ("tall", crests[0], tall, x_tall, v_tall),
            ("short", crests[1], short, x_short, v_short),
        ] {
            let err = (0..grid.len())
                .filter_map(|j| {
                    let d = grid.wrap(grid.x(j) - c.x);
                    (d.abs() < 4.0 / spec.inverse_width()).then(|| (traj.final_field.h()[j] - spec.profile(d)).abs())
                })
                .fold(0.0, f64::max);
            manifest.number(&format!("{label}_height"), c.height);
            manifest.number(&format!("{label}_shape_error_rel"), err / spec.h0());
            manifest.number(&format!("{label}_phase_shift"), grid.wrap(c.x - grid.wrap(start + v * config.t_end)));
        }
    }
    let d = conservation_drift(&traj.invariants);
    manifest.number("drift_Q", d.q);
    manifest.number("drift_E", d.e);
    manifest.number("drift_M", d.m);
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

fn cnoidal_sweep(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("cnoidal_sweep"));
    let params = setup::physical(&mut s)?;
    let m_values = s.get_list("scenario.m_values", &[0.1, 0.5, 0.9, 0.999])?;
    let l = s.get("scenario.l", 0.1)?;
    let n = s.get("grid.N", 512usize)?;
    let scheme = DerivativeScheme::Spectral;
    let dir = setup::output_dir(&mut s, "out/cnoidal_sweep")?;
    setup::seal(&s, &mut manifest)?;

    let specs = m_values
        .iter()
        .map(|&m| CnoidalSpec::from_parameter(m, l, &params).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output::create(&dir, params, scheme)?;
    let mut rows = Vec::new();
    let mut worst_ode = 0.0_f64;
    for (i, spec) in specs.iter().enumerate() {
        let grid = PeriodicGrid::new(spec.wavelength(), n).map_err(usage)?;
        let ops = DiffOperator::new(grid, scheme);
        let (field, mean) = spec.zero_mean_field(grid, 0.0)?;
        let ode = grid.points().iter().map(|&x| cnoidal_ode_residual(spec, x).abs()).fold(0.0, f64::max);
        worst_ode = worst_ode.max(ode);
        let kdv_speed = spec.zero_mean_speed(mean);
        let bous = boussinesq_periodic_speed(spec)?;
        let bern = bernoulli_residual(&field, kdv_speed, &params, &ops)?;
        rows.push(vec![
            spec.parameter().value(),
            spec.k(),
            spec.l(),
            spec.wavelength(),
            spec.frame_speed(),
            bous,
            (bous - spec.frame_speed()).abs(),
            ode,
            bern.spread,
        ]);
        out.profile(&format!("profile_{i:02}.csv"), &field)?;
    }
    out.table(
        "sweep.csv",
        &["m", "k", "l", "wavelength", "frame_speed", "boussinesq_speed", "speed_gap", "ode_residual", "bernoulli_spread"],
        &rows,
    )?;
    manifest.number("ode_residual_max", worst_ode);
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

fn steepening(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("steepening"));
    let params = setup::physical(&mut s)?;
    let hbar = s.get("scenario.hbar", 0.1)?;
    let p_ratio = s.get("scenario.p_ratio", 0.9)?;
    let alpha = s.get_auto::<f64>("scenario.alpha")?;
    let duration = s.get("scenario.duration", 1.0)?;
    let grid = setup::grid(&mut s, 160.0, 512)?;
    let dir = setup::output_dir(&mut s, "out/steepening")?;
    setup::seal(&s, &mut manifest)?;

    if !(params.sigma() > 0.0) {
        return Err(CliError::Usage("steepening needs sigma > 0 (depth above the critical depth)".into()));
    }
    let p_star = DeformationSpec::new(hbar, 1.0, 0.0).map_err(usage)?.steady_p(&params);
    let p = p_ratio * p_star;
    let spec = match alpha {
        Some(a) => DeformationSpec::new(hbar, p, a),
        None => DeformationSpec::with_tanh_cubed_frame(hbar, p, &params),
    }
    .map_err(usage)?;
    let verdict = steepening_verdict(&spec, &params);
    manifest.number("p", p);
    manifest.number("p_steady", p_star);
    manifest.number("alpha", spec.alpha);
    manifest.result("verdict", verdict);

    let mut out = Output::create(&dir, params, DerivativeScheme::Spectral)?;
    let initial = spec.field(grid)?;
    out.profile("profile_initial.csv", &initial)?;
    let trend = guard(front_slope_trend(&spec, &params, grid, duration), &mut manifest, &out)?;
    let config = SchemeConfig {
        dt: setup::auto_dt(Model::Kdv, &grid, &params, longwave_core::evolution::CFL_CONSTANT),
        t_end: duration,
        frame: Frame::Moving { alpha: spec.alpha },
        ..Default::default()
    };
    let traj = guard(evolve_kdv(&initial, &params, &config, &mut NoObserver), &mut manifest, &out)?;
    out.profile("profile_final.csv", &traj.final_field)?;
    manifest.number("front_change", trend.front_change());
    manifest.number("back_change", trend.back_change());
    manifest.result("observed_verdict", trend.verdict(1e-6));
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

fn moment_conservation(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("moment_conservation"));
    let params = setup::physical(&mut s)?;
    let init = setup::initial(&mut s, &params, "solitary")?;
    let grid = setup::grid_for(&mut s, &init, 160.0, 512)?;
    let defaults = SchemeDefaults {
        t_end: Some(20.0),
        ..Default::default()
    };
    let config = setup::scheme(&mut s, Model::Kdv, &grid, &params, defaults)?;
    let dir = setup::output_dir(&mut s, "out/moment_conservation")?;
    setup::seal(&s, &mut manifest)?;

    let mut out = Output::create(&dir, params, config.deriv)?;
    let ops = DiffOperator::new(grid, config.deriv);
    let initial = init.field(grid)?;
    out.profile("profile_initial.csv", &initial)?;
    if let Ok(cp) = critical_point_residual(&initial, &params, &ops) {
        manifest.number("critical_lambda", cp.lambda);
        manifest.number("critical_spread", cp.spread);
    }
    let traj = guard(evolve_kdv(&initial, &params, &config, &mut NoObserver), &mut manifest, &out)?;
    out.profile("profile_final.csv", &traj.final_field)?;
    out.invariants("invariants.csv", &traj.invariants, config.epsilon_for(&params))?;
    let d = conservation_drift(&traj.invariants);
    manifest.result("steps", traj.steps);
    manifest.number("drift_Q", d.q);
    manifest.number("drift_E", d.e);
    manifest.number("drift_M", d.m);
    manifest.number("drift_Hfun", d.hfun);
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

fn factorization(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("factorization"));
    let params = setup::physical(&mut s)?;
    let spec = SolitarySpec::new(s.get("scenario.h0", 0.1)?, &params).map_err(usage)?;
    let length = s.get("grid.L", 160.0)?;
    let ns = s.get_list("scenario.n_values", &[256usize, 512, 1024, 2048])?;
    let dir = setup::output_dir(&mut s, "out/factorization")?;
    setup::seal(&s, &mut manifest)?;

    let grids = ns
        .iter()
        .map(|&n| PeriodicGrid::new(length, n).map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output::create(&dir, params, DerivativeScheme::Spectral)?;
    let mut rows = Vec::new();
    for grid in &grids {
        let field = spec.field(*grid, 0.0, 0.0)?;
        let spectral = factorization_residual(&field, &params, &DiffOperator::spectral(*grid));
        let fd4 = factorization_residual(&field, &params, &DiffOperator::new(*grid, DerivativeScheme::CenteredFourthOrder));
        rows.push(vec![grid.len() as f64, spectral, fd4]);
    }
    out.table("factorization.csv", &["N", "spectral", "fd4"], &rows)?;

    let finest = grids[grids.len() - 1];
    let ops = DiffOperator::spectral(finest);
    let field = spec.field(finest, 0.0, 0.0)?;
    let w = solitary_speed(&spec);
    let plateau = rows[rows.len() - 1][1];
    manifest.number("residual_finest", plateau);
    manifest.number("second_order_prediction", (spec.h0() / (2.0 * params.depth())).powi(2));
    manifest.result("converges_to_zero", plateau < 1e-10);
    manifest.number("right_factor", translating_wave_residuals(&field, w, &params, &ops).kdv_factor);
    manifest.number("left_factor", translating_wave_residuals(&field, -w, &params, &ops).kdv_factor);
    let c = rayleigh_speed(params.g(), params.depth(), spec.h0())?;
    manifest.number("rayleigh_residual", translating_wave_residuals(&field, c, &params, &ops).boussinesq);
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}

fn boussinesq_filter(mut s: Settings) -> Result<Manifest, CliError> {
    let mut manifest = Manifest::new("scenario", Some("boussinesq_filter"));
    let params = setup::physical(&mut s)?;
    let spec = SolitarySpec::new(s.get("scenario.h0", 0.05)?, &params).map_err(usage)?;
    let noise = s.get("scenario.noise", 1e-10)?;
    let seed = setup::seed(&mut s)?;
    let grid = setup::grid(&mut s, 160.0, 256)?;
    let defaults = SchemeDefaults {
        t_end: Some(5.0),
        dt: Some(0.005),
        invariants_every: 20,
        ..Default::default()
    };
    let filtered = setup::scheme(&mut s, Model::Boussinesq, &grid, &params, defaults)?;
    let dir = setup::output_dir(&mut s, "out/boussinesq_filter")?;
    setup::seal(&s, &mut manifest)?;

    let mut out = Output::create(&dir, params, filtered.deriv)?;
    let ops = DiffOperator::new(grid, filtered.deriv);
    let field = setup::add_noise(spec.field(grid, 0.0, 0.0)?, noise * params.depth(), seed)?;
    let w = solitary_speed(&spec);
    let rate = ops.derivative(field.h(), 1).into_iter().map(|d| -w * d).collect();
    let state = BoussinesqState::new(field.clone(), rate)?;
    out.profile("profile_initial.csv", &field)?;

    let unfiltered = SchemeConfig {
        filter_cut: None,
        ..filtered.clone()
    };
    match evolve_boussinesq(&state, &params, &unfiltered, &mut NoObserver) {
        Err(CoreError::BlowUp { t, .. }) => {
            manifest.result("unfiltered", "blow_up");
            manifest.number("unfiltered_blowup_t", t);
        }
        Ok(_) => manifest.result("unfiltered", "survived"),
        Err(e) => return Err(e.into()),
    }
    let traj = guard(evolve_boussinesq(&state, &params, &filtered, &mut NoObserver), &mut manifest, &out)?;
    out.profile("profile_final_filtered.csv", &traj.final_field)?;
    let rows: Vec<Vec<f64>> = traj.energy.iter().map(|&(t, e)| vec![t, e]).collect();
    out.table("energy.csv", &["t", "energy"], &rows)?;
    let e0 = traj.energy.first().map(|p| p.1).unwrap_or(0.0);
    let drift = traj
        .energy
        .iter()
        .map(|&(_, e)| (e - e0).abs() / e0.abs().max(1e-300))
        .fold(0.0, f64::max);
    manifest.result("filtered", "ok");
    manifest.number("filtered_energy_drift", drift);
    if let Some(f) = &traj.filter {
        manifest.number("filter_k_cut", f.k_cut);
    }
    manifest.result("status", "ok");
    out.finish(&mut manifest)?;
    Ok(manifest)
}
