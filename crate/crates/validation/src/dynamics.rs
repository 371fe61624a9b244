use std::f64::consts::PI;

use longwave_core::analytic::{boussinesq_periodic_speed, solitary_speed, CnoidalSpec, SolitarySpec};
use longwave_core::diff::DiffOperator;
use longwave_core::evolution::{
    advisory_dt, evolve_boussinesq, evolve_kdv, BoussinesqState, Frame, NoObserver, SchemeConfig, CFL_CONSTANT,
};
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};
use longwave_core::tracking::{crest_position, find_crests, CrestTracker};
use longwave_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{sci, water, Report};

pub fn soliton_interaction() -> Report {
    let mut r = Report::new(7, "two solitons overtake and re-emerge with phase shifts");
    let params = water();
    let grid = PeriodicGrid::new(200.0, 512).expect("valid grid");
    let ops = DiffOperator::spectral(grid);
    let tall = SolitarySpec::new(0.5, &params).expect("valid amplitude");
    let short = SolitarySpec::new(0.2, &params).expect("valid amplitude");
    let (x_tall, x_short) = (-40.0, 40.0);
    for s in [&tall, &short] {
        let tail = s.profile(60.0);
        r.check(tail < 1e-12 * s.h0(), format!("h0 = {}: tail at the nearest image {tail:.3e}", s.h0()));
    }
    let initial = WaveField::from_fn(grid, 0.0, |x| {
        tall.profile(grid.wrap(x - x_tall)) + short.profile(grid.wrap(x - x_short))
    })
    .expect("finite samples");

    let frame = Frame::Moving { alpha: -0.175 };
    let v_frame = frame.velocity(&params);
    let v_tall = solitary_speed(&tall) - v_frame;
    let v_short = solitary_speed(&short) - v_frame;
    let t_end = 2.0 * (x_short - x_tall) / (v_tall - v_short);
    let config = SchemeConfig {
        dt: advisory_dt(&grid, &params, CFL_CONSTANT),
        t_end,
        frame,
        ..Default::default()
    };
    let Some(traj) = r.absorb("interaction run", evolve_kdv(&initial, &params, &config, &mut NoObserver)) else {
        return r;
    };
    r.note(format!("N = 512, L = 200, amplitudes 0.5 and 0.2, t_end = {t_end:.2} s in the moving frame"));

    let crests = find_crests(&traj.final_field, &ops, 0.05);
    r.check(crests.len() == 2, format!("{} crests above 0.05 after the interaction", crests.len()));
    if crests.len() != 2 {
        return r;
    }
    let (c_tall, c_short) = (crests[0], crests[1]);
    for (c, spec) in [(c_tall, tall), (c_short, short)] {
        let err = (0..grid.len())
            .filter_map(|j| {
                let d = grid.wrap(grid.x(j) - c.x);
                (d.abs() < 15.0).then(|| (traj.final_field.h()[j] - spec.profile(d)).abs())
            })
            .fold(0.0, f64::max);
        r.check(
            err < 0.01 * spec.h0() && (c.height - spec.h0()).abs() < 0.01 * spec.h0(),
            format!("h0 = {}: crest {:.6}, recentred shape error {:.3e} < 1% of h0", spec.h0(), c.height, err),
        );
    }
    let shift_tall = grid.wrap(c_tall.x - grid.wrap(x_tall + v_tall * t_end));
    let shift_short = grid.wrap(c_short.x - grid.wrap(x_short + v_short * t_end));
    r.check(shift_tall > 0.0, format!("taller wave pushed forward by {shift_tall:+.3} m"));
    r.check(shift_short < 0.0, format!("shorter wave pushed back by {shift_short:+.3} m"));
    r
}

pub fn speeds() -> Report {
    let mut r = Report::new(8, "measured solitary speed and the cnoidal speed expansion");
    let params = water();
    let grid = PeriodicGrid::new(160.0, 512).expect("valid grid");
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.1, &params).expect("valid amplitude");
    let w = solitary_speed(&spec);
    let config = SchemeConfig {
        dt: advisory_dt(&grid, &params, CFL_CONSTANT),
        t_end: 0.5 * grid.length() / w,
        ..Default::default()
    };
    let mut tracker = CrestTracker::new(grid.length());
    let mut step = 0usize;
    let mut track = |t: f64, h: &[f64]| {
        if step % 200 == 0 {
            let f = WaveField::new(grid, h.to_vec(), t).expect("finite samples");
            if let Ok(c) = crest_position(&f, &ops) {
                tracker.push(c.x);
            }
        }
        step += 1;
    };
    let initial = spec.field(grid, 0.0, 0.0).expect("finite profile");
    if let Some(traj) = r.absorb("speed run", evolve_kdv(&initial, &params, &config, &mut track)) {
        if let Some(c) = r.absorb("final crest", crest_position(&traj.final_field, &ops)) {
            tracker.push(c.x);
            let measured = tracker.travelled() / traj.final_field.t();
            let rel = (measured - w) / w;
            r.check(rel.abs() <= 0.01, format!("crest speed {measured:.6} vs {w:.6} m/s ({rel:+.2e})"));
        }
    }

    let k = 0.05;
    let mut gaps = Vec::new();
    for d in [0.2, 0.1, 0.05, 0.025] {
        let Some(spec) = r.absorb("cnoidal spec", CnoidalSpec::new(k, k + d, &params)) else {
            return r;
        };
        let Some(exact) = r.absorb("periodic speed", boussinesq_periodic_speed(&spec)) else {
            return r;
        };
        gaps.push((exact - spec.frame_speed()).abs());
    }
    r.note(format!("|sqrt(g(H+l-k)) - frame speed| for l-k = 0.2, 0.1, 0.05, 0.025: {}", sci(&gaps, 3)));
    for w in gaps.windows(2) {
        let ratio = w[1] / w[0];
        r.check((ratio - 0.25).abs() < 0.02, format!("halving ratio {ratio:.4}, second order"));
    }
    r
}

fn crossings(samples: &[(f64, f64)]) -> Vec<f64> {
    samples
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| w[0].0 + w[0].1 / (w[0].1 - w[1].1) * (w[1].0 - w[0].0))
        .collect()
}

fn with_velocity(h: WaveField, speed: f64, ops: &DiffOperator) -> longwave_core::Result<BoussinesqState> {
    let h_t = ops.derivative(h.h(), 1).into_iter().map(|d| -speed * d).collect();
    BoussinesqState::new(h, h_t)
}

pub fn boussinesq_handling() -> Report {
    let mut r = Report::new(10, "filtered Boussinesq integrator; unfiltered control blows up");
    let params = water();
    linear_mode(&mut r, &params);
    solitary_data(&mut r, &params);
    noise_control(&mut r, &params);
    r
}

fn linear_mode(r: &mut Report, params: &PhysicalParams) {
    let depth = params.depth();
    let grid = PeriodicGrid::new(160.0, 256).expect("valid grid");
    let k0 = 2.0 * PI * 12.0 / grid.length();
    let omega = k0 * params.linear_speed() * (1.0 - depth * depth * k0 * k0 / 3.0).sqrt();
    let period = 2.0 * PI / omega;
    let initial = WaveField::from_fn(grid, 0.0, |x| 1e-8 * depth * (k0 * x).cos()).expect("finite samples");
    let Some(state) = r.absorb("linear state", BoussinesqState::new(initial, vec![0.0; grid.len()])) else {
        return;
    };
    let config = SchemeConfig {
        dt: period / 400.0,
        t_end: 10.0 * period,
        ..Default::default()
    };
    let probe = grid.len() / 2;
    let mut samples = Vec::new();
    let run = evolve_boussinesq(&state, params, &config, &mut |t: f64, h: &[f64]| samples.push((t, h[probe])));
    if r.absorb("linear run", run).is_none() {
        return;
    }
    let z = crossings(&samples);
    if z.len() < 3 {
        r.check(false, "probe signal did not oscillate");
        return;
    }
    let measured = PI * (z.len() - 1) as f64 / (z[z.len() - 1] - z[0]);
    let rel = (measured - omega) / omega;
    r.check(rel.abs() <= 1e-3, format!("mode 12 frequency {measured:.8} vs {omega:.8} ({rel:+.2e})"));
}

fn solitary_data(r: &mut Report, params: &PhysicalParams) {
    let grid = PeriodicGrid::new(200.0, 512).expect("valid grid");
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.05, params).expect("valid amplitude");
    let w = solitary_speed(&spec);
    let Some(state) = r.absorb("solitary state", with_velocity(spec.field(grid, 0.0, 0.0).expect("finite profile"), w, &ops))
    else {
        return;
    };
    let t_end = grid.length() / w;
    let config = SchemeConfig {
        dt: 0.01,
        t_end,
        ..Default::default()
    };
    let mut tracker = CrestTracker::new(grid.length());
    let mut step = 0usize;
    let mut track = |t: f64, h: &[f64]| {
        if step % 10 == 0 {
            let f = WaveField::new(grid, h.to_vec(), t).expect("finite samples");
            if let Ok(c) = crest_position(&f, &ops) {
                tracker.push(c.x);
            }
        }
        step += 1;
    };
    let Some(traj) = r.absorb("solitary run", evolve_boussinesq(&state, params, &config, &mut track)) else {
        return;
    };
    if let Some(c) = r.absorb("final crest", crest_position(&traj.final_field, &ops)) {
        tracker.push(c.x);
        let speed = tracker.travelled() / t_end;
        let rel = (speed - w) / w;
        r.check(rel.abs() <= 0.01, format!("solitary crest speed {speed:.6} vs {w:.6} m/s ({rel:+.2e})"));
    }
}

fn noise_control(r: &mut Report, params: &PhysicalParams) {
    let grid = PeriodicGrid::new(160.0, 256).expect("valid grid");
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.05, params).expect("valid amplitude");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noisy: Vec<f64> = spec
        .field(grid, 0.0, 0.0)
        .expect("finite profile")
        .h()
        .iter()
        .map(|v| v + 1e-10 * params.depth() * rng.gen_range(-1.0..1.0))
        .collect();
    let field = WaveField::new(grid, noisy, 0.0).expect("finite samples");
    let Some(state) = r.absorb("noisy state", with_velocity(field, solitary_speed(&spec), &ops)) else {
        return;
    };
    let unfiltered = SchemeConfig {
        dt: 0.005,
        t_end: 5.0,
        filter_cut: None,
        ..Default::default()
    };
    match evolve_boussinesq(&state, params, &unfiltered, &mut NoObserver) {
        Err(Error::BlowUp { t, .. }) => r.check(true, format!("unfiltered run from 1e-10 noise blew up at t = {t:.3} s")),
        Err(e) => r.check(false, format!("unfiltered run failed differently: {e}")),
        Ok(_) => r.check(false, "unfiltered run survived 5 s"),
    }
    let filtered = SchemeConfig {
        invariants_every: 20,
        filter_cut: Some(0.5),
        ..unfiltered
    };
    if let Some(traj) = r.absorb("filtered run", evolve_boussinesq(&state, params, &filtered, &mut NoObserver)) {
        let e0 = traj.energy[0].1;
        let drift = traj.energy.iter().map(|&(_, e)| (e - e0).abs() / e0.abs()).fold(0.0, f64::max);
        r.check(drift <= 1e-6, format!("filtered run survives 5 s, energy drift {drift:.3e}"));
    }
}
