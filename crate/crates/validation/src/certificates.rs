use longwave_core::analytic::{cnoidal_ode_residual, rayleigh_speed, solitary_speed, CnoidalSpec, SolitarySpec};
use longwave_core::diff::{DerivativeScheme, DiffOperator};
use longwave_core::evolution::{factorization_residual, kdv_rhs, translating_wave_residuals, Frame};
use longwave_core::model::{critical_depth, PeriodicGrid, PhysicalParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{sci, water, Report};

const LENGTH: f64 = 160.0;

/// max|N(h) + ω·h_x| with the exact profile slope.
fn translation_residual(spec: &SolitarySpec, params: &PhysicalParams, n: usize, scheme: DerivativeScheme) -> f64 {
    let grid = PeriodicGrid::new(LENGTH, n).expect("valid grid");
    let ops = DiffOperator::new(grid, scheme);
    let field = spec.field(grid, 0.0, 0.0).expect("finite profile");
    let rate = kdv_rhs(&field, params, Frame::Fixed, &ops);
    let w = solitary_speed(spec);
    (0..n)
        .map(|j| (rate[j] + w * spec.derivatives(grid.x(j)).0).abs())
        .fold(0.0, f64::max)
}

pub fn solitary_certificate() -> Report {
    let mut r = Report::new(1, "solitary profile solves the fixed-frame KdV equation");
    let params = water();
    let h0 = 0.1;
    let spec = SolitarySpec::new(h0, &params).expect("valid amplitude");
    let tail = spec.profile(0.5 * LENGTH);
    r.check(tail < 1e-12 * h0, format!("tail h(L/2) = {tail:.3e} < 1e-12*h0"));

    let ns = [128, 256, 512, 1024];
    let spectral: Vec<f64> = ns.iter().map(|&n| translation_residual(&spec, &params, n, DerivativeScheme::Spectral)).collect();
    r.note(format!("spectral residuals at N = {ns:?}: {}", sci(&spectral, 3)));
    r.check(
        spectral.windows(2).take(2).all(|w| w[1] < w[0]),
        "spectral residual decreases until the roundoff floor",
    );
    r.check(spectral[3] < 1e-10, format!("spectral residual at N = 1024 is {:.3e} < 1e-10", spectral[3]));

    let fd4: Vec<f64> = [256, 512, 1024]
        .iter()
        .map(|&n| translation_residual(&spec, &params, n, DerivativeScheme::CenteredFourthOrder))
        .collect();
    for w in fd4.windows(2) {
        let ratio = w[0] / w[1];
        r.check((8.0..=32.0).contains(&ratio), format!("fourth-order residual halving ratio {ratio:.2} in [8, 32]"));
    }
    r
}

pub fn cnoidal_certificate() -> Report {
    let mut r = Report::new(2, "cnoidal profile solves its steady ODE; k -> 0 gives the solitary wave");
    let params = water();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &m in &[0.1, 0.5, 0.9, 0.999] {
        let Some(spec) = r.absorb("cnoidal spec", CnoidalSpec::from_parameter(m, 0.1, &params)) else {
            continue;
        };
        let lambda = spec.wavelength();
        let worst = (0..100)
            .map(|_| cnoidal_ode_residual(&spec, rng.gen_range(0.0..lambda)).abs())
            .fold(0.0, f64::max);
        r.check(worst <= 1e-10, format!("m = {m}: max ODE residual over 100 phases {worst:.3e} <= 1e-10"));
    }

    let h0 = 0.1;
    let solitary = SolitarySpec::new(h0, &params).expect("valid amplitude");
    if let Some(limit) = r.absorb("near-solitary cnoidal spec", CnoidalSpec::new(1e-12, h0, &params)) {
        let gap = (-400..=400)
            .map(|i| {
                let x = 0.1 * i as f64;
                (limit.profile(x) - solitary.profile(x)).abs()
            })
            .fold(0.0, f64::max);
        r.check(gap <= 1e-8, format!("k = 1e-12: max |cnoidal - solitary| on |x| <= 40 is {gap:.3e} <= 1e-8"));
    }
    r
}

pub fn factorization() -> Report {
    let mut r = Report::new(3, "factorization residual of the solitary wave converges to zero");
    let params = water();
    let h0 = 0.1;
    let spec = SolitarySpec::new(h0, &params).expect("valid amplitude");
    let residual = |n: usize, scheme: DerivativeScheme| {
        let grid = PeriodicGrid::new(LENGTH, n).expect("valid grid");
        let field = spec.field(grid, 0.0, 0.0).expect("finite profile");
        factorization_residual(&field, &params, &DiffOperator::new(grid, scheme))
    };
    let ns = [256, 512, 1024, 2048];
    let spectral: Vec<f64> = ns.iter().map(|&n| residual(n, DerivativeScheme::Spectral)).collect();
    let fd4: Vec<f64> = ns.iter().map(|&n| residual(n, DerivativeScheme::CenteredFourthOrder)).collect();
    r.note(format!("spectral residuals at N = {ns:?}: {}", sci(&spectral, 6)));
    r.note(format!("fourth-order residuals at N = {ns:?}: {}", sci(&fd4, 6)));
    r.check(spectral[3] < 1e-10, format!("spectral residual at N = 2048 is {:.3e} < 1e-10", spectral[3]));
    for w in fd4.windows(2) {
        let ratio = w[0] / w[1];
        r.check((8.0..=32.0).contains(&ratio), format!("fourth-order halving ratio {ratio:.4} in [8, 32]"));
    }
    let plateau = (h0 / (2.0 * params.depth())).powi(2);
    r.note(format!(
        "residual plateau {:.6e} vs (h0/2H)^2 = {plateau:.6e}: the KdV speed squared differs from g(H+h0) by gH(h0/2H)^2",
        spectral[3]
    ));

    let grid = PeriodicGrid::new(LENGTH, 1024).expect("valid grid");
    let ops = DiffOperator::spectral(grid);
    let field = spec.field(grid, 0.0, 0.0).expect("finite profile");
    let w = solitary_speed(&spec);
    let right = translating_wave_residuals(&field, w, &params, &ops);
    let left = translating_wave_residuals(&field, -w, &params, &ops);
    r.check(right.kdv_factor < 1e-10, format!("right mover satisfies the first-order factor: {:.3e}", right.kdv_factor));
    r.check(left.kdv_factor > 1.0, format!("left-moving control fails the first-order factor: {:.3}", left.kdv_factor));
    if let Some(c) = r.absorb("Rayleigh speed", rayleigh_speed(params.g(), params.depth(), h0)) {
        let rayleigh = translating_wave_residuals(&field, c, &params, &ops);
        r.note(format!(
            "same profile at speed sqrt(g(H+h0)) leaves second-order residual {:.3e}",
            rayleigh.boussinesq
        ));
    }
    r
}

pub fn critical_depth_for_water() -> Report {
    let mut r = Report::new(9, "critical depth for water is about half a centimetre");
    let Some(params) = r.absorb("water parameters", PhysicalParams::new(9.81, 1.0, 1000.0, 0.0728)) else {
        return r;
    };
    let d = critical_depth(&params);
    let cm = 100.0 * d;
    r.check((cm - 0.47).abs() < 0.005, format!("sqrt(3T/rho g) = {cm:.4} cm, 0.47 cm to two digits"));
    r.check((0.4..0.6).contains(&cm), "within the half-centimetre order of magnitude");
    let flipped = PhysicalParams::new(9.81, 0.5 * d, 1000.0, 0.0728).map(|p| p.sigma());
    if let Some(s) = r.absorb("shallow parameters", flipped) {
        r.check(s < 0.0, format!("sigma at half the critical depth is negative ({s:.3e})"));
    }
    r
}
