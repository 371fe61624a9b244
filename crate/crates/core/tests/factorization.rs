use longwave_core::analytic::{rayleigh_speed, solitary_speed, SolitarySpec};
use longwave_core::diff::{DerivativeScheme, DiffOperator};
use longwave_core::evolution::{factorization_residual, translating_wave_residuals};
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};

fn water() -> PhysicalParams {
    PhysicalParams::gravity_water(1.0).unwrap()
}

fn residual(h0: f64, n: usize, scheme: DerivativeScheme) -> f64 {
    let params = water();
    let grid = PeriodicGrid::new(160.0, n).unwrap();
    let spec = SolitarySpec::new(h0, &params).unwrap();
    factorization_residual(&spec.field(grid, 0.0, 0.0).unwrap(), &params, &DiffOperator::new(grid, scheme))
}

#[test]
fn zero_field_has_zero_residual() {
    let params = water();
    let grid = PeriodicGrid::new(40.0, 64).unwrap();
    assert_eq!(factorization_residual(&WaveField::zeros(grid), &params, &DiffOperator::spectral(grid)), 0.0);
}

#[test]
fn kdv_solitary_leaves_second_order_residual() {
    for &h0 in &[0.1, 0.05] {
        let plateau = (h0 / 2.0_f64).powi(2);
        for &n in &[512, 1024] {
            let r = residual(h0, n, DerivativeScheme::Spectral);
            assert!((r - plateau).abs() <= 1e-5 * plateau, "h0={h0} N={n}: {r:e}");
        }
        let fd4: Vec<f64> = [512, 1024, 2048]
            .iter()
            .map(|&n| (residual(h0, n, DerivativeScheme::CenteredFourthOrder) - plateau).abs())
            .collect();
        assert!(fd4[0] > fd4[1] && fd4[1] > fd4[2], "{fd4:?}");
    }
    let ratio = residual(0.1, 1024, DerivativeScheme::Spectral) / residual(0.05, 1024, DerivativeScheme::Spectral);
    assert!((ratio - 4.0).abs() < 1e-4);
}

#[test]
fn rayleigh_speed_translation_is_exact_boussinesq_wave() {
    let params = water();
    for &n in &[512usize, 1024] {
        let grid = PeriodicGrid::new(160.0, n).unwrap();
        let ops = DiffOperator::spectral(grid);
        let spec = SolitarySpec::new(0.1, &params).unwrap();
        let field = spec.field(grid, 0.0, 0.0).unwrap();
        let c = rayleigh_speed(params.g(), params.depth(), 0.1).unwrap();
        let r = translating_wave_residuals(&field, c, &params, &ops);
        assert!(r.boussinesq < 1e-9, "N={n}: {r:?}");
        let kdv = translating_wave_residuals(&field, solitary_speed(&spec), &params, &ops);
        assert!((kdv.boussinesq - 2.5e-3).abs() < 1e-8);
    }
}

#[test]
fn left_moving_control_fails_the_kdv_factor() {
    let params = water();
    let grid = PeriodicGrid::new(160.0, 1024).unwrap();
    let ops = DiffOperator::spectral(grid);
    let spec = SolitarySpec::new(0.1, &params).unwrap();
    let field = spec.field(grid, 0.0, 0.0).unwrap();
    let w = solitary_speed(&spec);
    let right = translating_wave_residuals(&field, w, &params, &ops);
    let left = translating_wave_residuals(&field, -w, &params, &ops);
    assert!(right.kdv_factor < 1e-10);
    assert!(left.kdv_factor > 1e-3);
    assert!((left.kdv_factor - 2.0 * w / params.linear_speed()).abs() < 1e-6);
}
