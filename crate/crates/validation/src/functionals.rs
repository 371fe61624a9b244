use std::f64::consts::PI;

use longwave_core::analytic::{solitary_speed, SolitarySpec};
use longwave_core::diff::DiffOperator;
use longwave_core::elliptic::sech_sq;
use longwave_core::evolution::{
    advisory_dt, deformation_rate_closed_form, deformation_rate_tanh_cubed, evolve_kdv, front_slope_trend,
    kdv_rhs, steepening_verdict, DeformationSpec, Frame, NoObserver, SchemeConfig, SteepeningVerdict, CFL_CONSTANT,
};
use longwave_core::invariants::{
    canonical_epsilon, conservation_drift, hamiltonian, hamiltonian_flow_rhs, variational_derivative,
};
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};
use longwave_core::tracking::shape_error_about_crest;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{max_abs, water, Report};

pub fn conservation() -> Report {
    let mut r = Report::new(4, "invariants are conserved over one solitary transit");
    let params = water();
    let h0 = 0.1;
    let grid = PeriodicGrid::new(160.0, 1024).expect("valid grid");
    let spec = SolitarySpec::new(h0, &params).expect("valid amplitude");
    let config = SchemeConfig {
        dt: advisory_dt(&grid, &params, CFL_CONSTANT),
        t_end: grid.length() / solitary_speed(&spec),
        invariants_every: 1000,
        ..Default::default()
    };
    let initial = spec.field(grid, 0.0, 0.0).expect("finite profile");
    let Some(traj) = r.absorb("transit run", evolve_kdv(&initial, &params, &config, &mut NoObserver)) else {
        return r;
    };
    r.note(format!("N = 1024, L = 160, h0 = 0.1, {} steps of dt = {:.4e}", traj.steps, config.dt));
    let d = conservation_drift(&traj.invariants);
    r.check(d.q <= 1e-12, format!("Q drift {:.3e} <= 1e-12", d.q));
    r.check(d.e <= 1e-6, format!("E drift {:.3e} <= 1e-6", d.e));
    r.check(d.m <= 1e-6, format!("M drift {:.3e} <= 1e-6", d.m));
    r.check(d.hfun <= 1e-6, format!("Hamiltonian drift {:.3e} <= 1e-6", d.hfun));
    let ops = DiffOperator::spectral(grid);
    if let Some((_, err)) = r.absorb("crest", shape_error_about_crest(&traj.final_field, &ops, |x| spec.profile(x))) {
        r.note(format!("recentred shape error after the transit {err:.3e}"));
    }
    r
}

fn smooth_field(rng: &mut ChaCha8Rng, grid: PeriodicGrid, scale: f64) -> WaveField {
    let modes: Vec<(f64, f64, f64)> = (1..=6)
        .map(|m| {
            let k = 2.0 * PI * m as f64 / grid.length();
            (k, scale * rng.gen_range(-1.0..1.0) / m as f64, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    WaveField::from_fn(grid, 0.0, |x| modes.iter().map(|&(k, a, ph)| a * (k * x + ph).cos()).sum())
        .expect("finite samples")
}

pub fn hamiltonian_identity() -> Report {
    let mut r = Report::new(5, "KdV is the Hamiltonian flow of the combined functional");
    let params = water();
    let grid = PeriodicGrid::new(40.0, 128).expect("valid grid");
    let ops = DiffOperator::spectral(grid);
    let eps = canonical_epsilon(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut worst_flow = 0.0_f64;
    for _ in 0..20 {
        let field = smooth_field(&mut rng, grid, 0.1);
        let a = hamiltonian_flow_rhs(&field, &params, eps, &ops);
        let b = kdv_rhs(&field, &params, Frame::Fixed, &ops);
        let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        worst_flow = worst_flow.max(max_abs(&diff) / max_abs(&b));
    }
    r.check(worst_flow <= 1e-12, format!("flow vs KdV on 20 random fields: {worst_flow:.3e} <= 1e-12"));

    let delta = 1e-6;
    let mut worst_grad = 0.0_f64;
    for _ in 0..20 {
        let h = smooth_field(&mut rng, grid, 0.1);
        let eta = smooth_field(&mut rng, grid, 1.0);
        let nudged = |s: f64| {
            let v = h.h().iter().zip(eta.h()).map(|(a, b)| a + s * b).collect();
            WaveField::new(grid, v, 0.0).expect("finite samples")
        };
        let fd = (hamiltonian(&nudged(delta), &params, eps, &ops) - hamiltonian(&nudged(-delta), &params, eps, &ops))
            / (2.0 * delta);
        let grad = variational_derivative(&h, &params, eps, &ops);
        let pairing: Vec<f64> = grad.iter().zip(eta.h()).map(|(g, e)| g * e).collect();
        let exact = grid.integrate(&pairing);
        worst_grad = worst_grad.max((fd - exact).abs() / exact.abs());
    }
    r.check(worst_grad <= 1e-8, format!("directional difference vs gradient: {worst_grad:.3e} <= 1e-8"));
    r
}

/// Moving-frame KdV rate on h̄·sech²(pξ) from hand-differentiated
/// h′ and h‴, with the summed term magnitudes for scaling.
fn rate_by_hand(spec: &DeformationSpec, params: &PhysicalParams, xi: f64) -> (f64, f64) {
    let (hbar, p, alpha) = (spec.hbar, spec.p, spec.alpha);
    let s = sech_sq(p * xi);
    let t = (p * xi).tanh();
    let h = hbar * s;
    let d1 = -2.0 * p * hbar * s * t;
    let d3 = 4.0 * p.powi(3) * hbar * s * t * (6.0 * s - 2.0);
    let c = -1.5 * (params.g() / params.depth()).sqrt();
    let terms = [h * d1, 2.0 / 3.0 * alpha * d1, params.sigma() / 3.0 * d3];
    (c * terms.iter().sum::<f64>(), c.abs() * terms.iter().map(|v| v.abs()).sum::<f64>())
}

pub fn deformation_law() -> Report {
    let mut r = Report::new(6, "deformation law and the steepening criterion");
    let params = water();

    let mut worst = 0.0_f64;
    for &hbar in &[0.05, 0.1, 0.3] {
        let p_star = (hbar / (4.0 * params.sigma())).sqrt();
        for &ratio in &[0.7, 0.9, 1.0, 1.1, 1.4] {
            for &alpha in &[-0.5 * hbar, 0.0, 0.02, -0.2] {
                let spec = DeformationSpec::new(hbar, ratio * p_star, alpha).expect("valid spec");
                let samples: Vec<(f64, f64, f64)> = (-200..=200)
                    .map(|i| {
                        let xi = 0.05 * i as f64 / spec.p;
                        let (d, size) = rate_by_hand(&spec, &params, xi);
                        (d, size, deformation_rate_closed_form(&spec, &params, xi))
                    })
                    .collect();
                let scale = samples.iter().fold(0.0_f64, |m, s| m.max(s.1));
                let gap = samples.iter().fold(0.0_f64, |m, s| m.max((s.2 - s.0).abs()));
                worst = worst.max(gap / scale);
            }
        }
    }
    r.check(worst <= 1e-12, format!("closed form vs direct rate over 60 specs: {worst:.3e} <= 1e-12"));

    let hbar = 0.1;
    let p_star = (hbar / (4.0 * params.sigma())).sqrt();
    let mut cubed = 0.0_f64;
    for &ratio in &[0.8, 0.9, 1.1, 1.2] {
        let spec = DeformationSpec::with_tanh_cubed_frame(hbar, ratio * p_star, &params).expect("valid spec");
        for i in -100..=100 {
            let xi = 0.1 * i as f64;
            let a = deformation_rate_tanh_cubed(&spec, &params, xi);
            let b = deformation_rate_closed_form(&spec, &params, xi);
            cubed = cubed.max((a - b).abs());
        }
    }
    r.check(cubed <= 1e-15, format!("tanh-cubed specialization gap {cubed:.3e}"));

    let grid = PeriodicGrid::new(160.0, 512).expect("valid grid");
    let sweep = [
        (0.8, SteepeningVerdict::SteepensInFront),
        (0.9, SteepeningVerdict::SteepensInFront),
        (1.0, SteepeningVerdict::Steady),
        (1.1, SteepeningVerdict::FlattensInFront),
        (1.2, SteepeningVerdict::FlattensInFront),
    ];
    for (ratio, expected) in sweep {
        let spec = if ratio == 1.0 {
            DeformationSpec::new(hbar, p_star, -0.5 * hbar)
        } else {
            DeformationSpec::with_tanh_cubed_frame(hbar, ratio * p_star, &params)
        }
        .expect("valid spec");
        let verdict = steepening_verdict(&spec, &params);
        r.check(verdict == expected, format!("p = {ratio}*p*: verdict {verdict}, expected {expected}"));
        if let Some(trend) = r.absorb("front slope run", front_slope_trend(&spec, &params, grid, 1.0)) {
            let seen = trend.verdict(1e-6);
            r.check(
                seen == expected,
                format!("p = {ratio}*p*: front slope changed by {:+.3e} in 1 s, {seen}", trend.front_change()),
            );
        }
    }
    r
}
