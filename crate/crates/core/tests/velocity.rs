use longwave_core::analytic::{solitary_speed, CnoidalSpec, SolitarySpec};
use longwave_core::diff::DiffOperator;
use longwave_core::evolution::{advisory_dt, evolve_kdv, SchemeConfig, CFL_CONSTANT};
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};
use longwave_core::velocity::{
    bernoulli_residual, mean_velocity_u, mean_velocity_u_approx, omega_from_mass_flux, omega_pointwise,
    DEFAULT_MASK,
};

fn water() -> PhysicalParams {
    PhysicalParams::gravity_water(1.0).unwrap()
}

#[test]
fn pointwise_omega_is_the_solitary_speed() {
    let params = water();
    let grid = PeriodicGrid::new(160.0, 2048).unwrap();
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.1, &params).unwrap();
    let w = solitary_speed(&spec);
    let om = omega_pointwise(&spec.field(grid, 0.0, 0.0).unwrap(), &params, &ops, DEFAULT_MASK);
    assert!(om.count_valid() > grid.len() / 4);
    assert!(om.max_deviation(w).unwrap() <= 1e-6 * w);
}

#[test]
fn mass_flux_omega_from_exact_translation() {
    let params = water();
    let grid = PeriodicGrid::new(160.0, 2048).unwrap();
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.1, &params).unwrap();
    let w = solitary_speed(&spec);
    let dt = 1e-4 * grid.length() / w;
    let before = spec.field(grid, 0.0, 0.0).unwrap();
    let after = spec.field(grid, w * dt, dt).unwrap();
    let om = omega_from_mass_flux(&before, &after, &ops, DEFAULT_MASK).unwrap();
    assert!(om.max_deviation(w).unwrap() <= 1e-4 * w);
}

#[test]
fn mass_flux_and_pointwise_agree_on_an_evolving_wave() {
    let params = water();
    let grid = PeriodicGrid::new(160.0, 512).unwrap();
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.1, &params).unwrap();
    let config = SchemeConfig {
        dt: advisory_dt(&grid, &params, CFL_CONSTANT),
        t_end: 1.0,
        ..Default::default()
    };
    let mut last: Vec<WaveField> = Vec::new();
    let mut keep = |t: f64, h: &[f64]| {
        last.push(WaveField::new(grid, h.to_vec(), t).unwrap());
        if last.len() > 2 {
            last.remove(0);
        }
    };
    evolve_kdv(&spec.field(grid, 0.0, 0.0).unwrap(), &params, &config, &mut keep).unwrap();
    let (a, b) = (&last[0], &last[1]);
    let flux = omega_from_mass_flux(a, b, &ops, DEFAULT_MASK).unwrap();
    let mid: Vec<f64> = a.h().iter().zip(b.h()).map(|(x, y)| 0.5 * (x + y)).collect();
    let mid = WaveField::new(grid, mid, 0.5 * (a.t() + b.t())).unwrap();
    let point = omega_pointwise(&mid, &params, &ops, DEFAULT_MASK);
    let mut gaps: Vec<f64> = (0..grid.len())
        .filter(|&j| flux.valid[j] && point.valid[j])
        .map(|j| (flux.values[j] - point.values[j]).abs())
        .collect();
    gaps.sort_by(f64::total_cmp);
    let median = gaps[gaps.len() / 2];
    assert!(median <= 0.01 * params.linear_speed(), "{median}");
}

#[test]
fn mean_velocity_and_its_approximation() {
    let params = water();
    let grid = PeriodicGrid::new(160.0, 256).unwrap();
    let mut gaps = Vec::new();
    for &h0 in &[0.2, 0.1] {
        let spec = SolitarySpec::new(h0, &params).unwrap();
        let w = solitary_speed(&spec);
        let f = spec.field(grid, 0.0, 0.0).unwrap();
        let u = mean_velocity_u(&f, w, &params).unwrap();
        let approx = mean_velocity_u_approx(&f, w, &params);
        for (j, &h) in f.h().iter().enumerate() {
            assert!((u[j] - w * h / (1.0 + h)).abs() <= 1e-15 * w);
            assert!(u[j] <= w && u[j] >= 0.0);
        }
        gaps.push(u.iter().zip(&approx).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    // The gap is third order in the amplitude.
    let ratio = gaps[0] / gaps[1];
    assert!((4.0..=16.0).contains(&ratio), "{ratio}");
}

fn cnoidal_spread(k: f64, l: f64, params: &PhysicalParams) -> f64 {
    let spec = CnoidalSpec::new(k, l, params).unwrap();
    let grid = PeriodicGrid::new(spec.wavelength(), 512).unwrap();
    let ops = DiffOperator::spectral(grid);
    let (field, mean) = spec.zero_mean_field(grid, 0.0).unwrap();
    bernoulli_residual(&field, spec.zero_mean_speed(mean), params, &ops).unwrap().spread
}

#[test]
fn cnoidal_bernoulli_residual_shrinks_at_third_order() {
    let params = water();
    for &(k, l) in &[(0.1, 0.1), (0.2, 0.05), (0.05, 0.2)] {
        let spreads: Vec<f64> = [1.0, 0.5, 0.25].iter().map(|s| cnoidal_spread(k * s, l * s, &params)).collect();
        for w in spreads.windows(2) {
            let ratio = w[1] / w[0];
            assert!((1.0 / 16.0..=0.25).contains(&ratio), "k={k} l={l}: {spreads:?}");
        }
    }
}

#[test]
fn solitary_bernoulli_residual_regression() {
    let params = water();
    let grid = PeriodicGrid::new(240.0, 2048).unwrap();
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.05, &params).unwrap();
    let b = bernoulli_residual(&spec.field(grid, 0.0, 0.0).unwrap(), solitary_speed(&spec), &params, &ops)
        .unwrap();
    assert!(b.spread <= 1.8e-3, "{:e}", b.spread);
    assert!(b.spread > 0.0);
}
