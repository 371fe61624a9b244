//! Pointwise wave velocity, the mean horizontal velocity of the column,
//! and the steady-flow Bernoulli balance.

use crate::diff::{DerivativeScheme, DiffOperator};
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, WaveField};

/// Default relative mask: samples with |h| < 1e-6·max|h| are excluded.
pub const DEFAULT_MASK: f64 = 1e-6;

/// Velocity samples with a validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedSamples {
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl MaskedSamples {
    pub fn valid_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(&self.valid)
            .filter_map(|(&v, &ok)| ok.then_some(v))
    }

    pub fn count_valid(&self) -> usize {
        self.valid.iter().filter(|&&b| b).count()
    }

    /// Largest |v − target| over valid samples; `None` if all are masked.
    pub fn max_deviation(&self, target: f64) -> Option<f64> {
        self.valid_values().map(|v| (v - target).abs()).reduce(f64::max)
    }

    pub fn median(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.valid_values().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        Some(if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityDiagnostics {
    pub omega: MaskedSamples,
    pub u: Vec<f64>,
    pub bernoulli: BernoulliResidual,
}

fn mask_of(h: &[f64], rel: f64) -> Vec<bool> {
    let peak = h.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    h.iter().map(|v| v.abs() > rel * peak && *v != 0.0).collect()
}

/// ω(x) = √(gH)·(1 + 3h/4H + (H²/6h)·h_xx), masked where |h| < mask·max|h|.
pub fn omega_pointwise(
    field: &WaveField,
    params: &PhysicalParams,
    ops: &DiffOperator,
    mask: f64,
) -> MaskedSamples {
    let h = field.h();
    let depth = params.depth();
    let c = params.linear_speed();
    let hxx = ops.derivative(h, 2);
    let valid = mask_of(h, mask);
    let values = (0..h.len())
        .map(|j| {
            if valid[j] {
                c * (1.0 + 0.75 * h[j] / depth + depth * depth / (6.0 * h[j]) * hxx[j])
            } else {
                f64::NAN
            }
        })
        .collect();
    MaskedSamples { values, valid }
}

/// ω(x) = (1/h)·∫(−∂h/∂t)dx from two snapshots.
///
/// ∂h/∂t is the difference quotient of the snapshots and h their average;
/// the running integral starts at the sample of smallest |h|.
pub fn omega_from_mass_flux(
    before: &WaveField,
    after: &WaveField,
    ops: &DiffOperator,
    mask: f64,
) -> Result<MaskedSamples> {
    before.check_same_grid(after)?;
    if !before.grid().same_as(ops.grid()) {
        return Err(Error::GridMismatch("operator built for another grid".into()));
    }
    let dt = after.t() - before.t();
    if !(dt > 0.0) {
        return Err(Error::Domain(format!(
            "snapshots must be ordered in time, got dt = {dt}"
        )));
    }
    let n = before.grid().len();
    let h: Vec<f64> = (0..n).map(|j| 0.5 * (before.h()[j] + after.h()[j])).collect();
    let minus_ht: Vec<f64> = (0..n).map(|j| -(after.h()[j] - before.h()[j]) / dt).collect();

    let mut flux = match ops.scheme() {
        DerivativeScheme::Spectral => ops.antiderivative(&minus_ht),
        DerivativeScheme::CenteredFourthOrder => {
            let spectral = DiffOperator::spectral(*ops.grid());
            spectral.antiderivative(&minus_ht)
        }
    };
    let anchor = (0..n)
        .min_by(|&a, &b| h[a].abs().total_cmp(&h[b].abs()))
        .unwrap_or(0);
    let offset = flux[anchor];
    flux.iter_mut().for_each(|v| *v -= offset);

    let valid = mask_of(&h, mask);
    let values = (0..n)
        .map(|j| if valid[j] { flux[j] / h[j] } else { f64::NAN })
        .collect();
    Ok(MaskedSamples { values, valid })
}

/// U = ωh/(H + h).
pub fn mean_velocity_u(field: &WaveField, omega: f64, params: &PhysicalParams) -> Result<Vec<f64>> {
    let depth = params.depth();
    field
        .h()
        .iter()
        .map(|&h| {
            if depth + h <= 0.0 {
                Err(Error::Domain(format!("dry point: H + h = {} <= 0", depth + h)))
            } else {
                Ok(omega * h / (depth + h))
            }
        })
        .collect()
}

/// Second-order approximation (ωh/H)(1 − h/H) of [`mean_velocity_u`].
pub fn mean_velocity_u_approx(field: &WaveField, omega: f64, params: &PhysicalParams) -> Vec<f64> {
    let depth = params.depth();
    field
        .h()
        .iter()
        .map(|&h| omega * h / depth * (1.0 - h / depth))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliResidual {
    pub samples: Vec<f64>,
    /// max − min of the samples.
    pub spread: f64,
    pub mean: f64,
}

/// −ωU + g·h + U²/2 + (Hω²/3)·h_xx pointwise, with U = ωh/(H + h) and h
/// the elevation above the mean level. Constant for an exact steady wave.
pub fn bernoulli_residual(
    field: &WaveField,
    omega: f64,
    params: &PhysicalParams,
    ops: &DiffOperator,
) -> Result<BernoulliResidual> {
    let h = field.h();
    let u = mean_velocity_u(field, omega, params)?;
    let hxx = ops.derivative(h, 2);
    let depth = params.depth();
    let g = params.g();
    let samples: Vec<f64> = (0..h.len())
        .map(|j| -omega * u[j] + g * h[j] + 0.5 * u[j] * u[j] + depth * omega * omega / 3.0 * hxx[j])
        .collect();
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(BernoulliResidual {
        samples,
        spread: hi - lo,
        mean,
    })
}

/// All three diagnostics for a steady profile moving at `omega`.
pub fn velocity_diagnostics(
    field: &WaveField,
    omega: f64,
    params: &PhysicalParams,
    ops: &DiffOperator,
) -> Result<VelocityDiagnostics> {
    Ok(VelocityDiagnostics {
        omega: omega_pointwise(field, params, ops, DEFAULT_MASK),
        u: mean_velocity_u(field, omega, params)?,
        bernoulli: bernoulli_residual(field, omega, params, ops)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PeriodicGrid;

    fn setup() -> (PhysicalParams, PeriodicGrid, DiffOperator) {
        let params = PhysicalParams::gravity_water(1.0).unwrap();
        let grid = PeriodicGrid::new(20.0, 64).unwrap();
        (params, grid, DiffOperator::spectral(grid))
    }

    #[test]
    fn flat_field() {
        let (params, grid, ops) = setup();
        let flat = WaveField::from_fn(grid, 0.0, |_| 0.04).unwrap();
        let w = omega_pointwise(&flat, &params, &ops, DEFAULT_MASK);
        let expect = params.linear_speed() * (1.0 + 0.75 * 0.04);
        assert_eq!(w.count_valid(), 64);
        assert!(w.max_deviation(expect).unwrap() < 1e-14);
    }

    #[test]
    fn zero_field_is_fully_masked() {
        let (params, grid, ops) = setup();
        let zero = WaveField::zeros(grid);
        let w = omega_pointwise(&zero, &params, &ops, DEFAULT_MASK);
        assert_eq!(w.count_valid(), 0);
        assert!(w.median().is_none());
        assert!(mean_velocity_u(&zero, 3.0, &params).unwrap().iter().all(|&u| u == 0.0));
        let b = bernoulli_residual(&zero, params.linear_speed(), &params, &ops).unwrap();
        assert_eq!(b.spread, 0.0);
    }

    #[test]
    fn mean_velocity_values() {
        let (params, grid, _) = setup();
        let f = WaveField::from_fn(grid, 0.0, |_| 0.1).unwrap();
        let u = mean_velocity_u(&f, 3.3, &params).unwrap();
        assert!((u[0] - 0.3).abs() < 1e-15);
        let dry = WaveField::from_fn(grid, 0.0, |x| if x > 0.0 { -1.5 } else { 0.0 }).unwrap();
        assert!(matches!(mean_velocity_u(&dry, 3.3, &params), Err(Error::Domain(_))));
    }

    #[test]
    fn identical_snapshots_give_zero_velocity() {
        let (_, grid, ops) = setup();
        let a = WaveField::from_fn(grid, 0.0, |x| 0.1 * (-x * x).exp()).unwrap();
        let b = WaveField::new(grid, a.h().to_vec(), 0.5).unwrap();
        let w = omega_from_mass_flux(&a, &b, &ops, DEFAULT_MASK).unwrap();
        assert!(w.max_deviation(0.0).unwrap() == 0.0);
        assert!(omega_from_mass_flux(&b, &a, &ops, DEFAULT_MASK).is_err());
        let other = WaveField::zeros(PeriodicGrid::new(20.0, 32).unwrap());
        assert!(matches!(
            omega_from_mass_flux(&a, &other, &ops, DEFAULT_MASK),
            Err(Error::GridMismatch(_))
        ));
    }
}
