//! Differentiation, integration and filtering on the periodic grid.
//!
//! The spectral operator is Fourier collocation with the Nyquist mode forced
//! to zero; the fourth-order centered stencils are kept as an independent
//! cross-check. Filtering, shifting and interpolation always go through the
//! FFT regardless of the chosen derivative scheme.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error};
use crate::model::PeriodicGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeScheme {
    #[default]
    Spectral,
    CenteredFourthOrder,
}

impl fmt::Display for DerivativeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivativeScheme::Spectral => f.write_str("spectral"),
            DerivativeScheme::CenteredFourthOrder => f.write_str("fd4"),
        }
    }
}

impl FromStr for DerivativeScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spectral" => Ok(Self::Spectral),
            "fd4" | "centered4" => Ok(Self::CenteredFourthOrder),
            other => Err(invalid(
                "deriv",
                format!("unknown scheme `{other}` (expected spectral or fd4)"),
            )),
        }
    }
}

#[derive(Clone)]
pub struct DiffOperator {
    grid: PeriodicGrid,
    scheme: DerivativeScheme,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffOperator")
            .field("grid", &self.grid)
            .field("scheme", &self.scheme)
            .finish()
    }
}

impl DiffOperator {
    pub fn new(grid: PeriodicGrid, scheme: DerivativeScheme) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.len();
        Self {
            grid,
            scheme,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            wavenumbers: (0..n).map(|j| grid.wavenumber(j)).collect(),
        }
    }

    pub fn spectral(grid: PeriodicGrid) -> Self {
        Self::new(grid, DerivativeScheme::Spectral)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn scheme(&self) -> DerivativeScheme {
        self.scheme
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    fn nyquist(&self) -> usize {
        self.grid.len() / 2
    }

    /// Unnormalized forward DFT.
    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.grid.len(), "sample count does not match grid");
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse DFT scaled by 1/N, returning the real part.
    pub fn inverse_real(&self, mut coeffs: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut coeffs);
        let scale = 1.0 / self.grid.len() as f64;
        coeffs.into_iter().map(|c| c.re * scale).collect()
    }

    /// `order`-th derivative with the configured scheme.
    pub fn derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        match self.scheme {
            DerivativeScheme::Spectral => self.spectral_derivative(f, order),
            DerivativeScheme::CenteredFourthOrder => fd4_derivative(f, order, self.grid.dx()),
        }
    }

    pub fn spectral_derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        if order == 0 {
            return f.to_vec();
        }
        let mut c = self.forward(f);
        let nyq = self.nyquist();
        for (j, (cj, &k)) in c.iter_mut().zip(&self.wavenumbers).enumerate() {
            if j == nyq {
                *cj = Complex64::new(0.0, 0.0);
            } else {
                *cj *= Complex64::new(0.0, k).powu(order);
            }
        }
        self.inverse_real(c)
    }

    /// Zero-mean periodic antiderivative. The mean of `f` is discarded since
    /// its integral is not periodic.
    pub fn antiderivative(&self, f: &[f64]) -> Vec<f64> {
        match self.scheme {
            DerivativeScheme::Spectral => {
                let mut c = self.forward(f);
                let nyq = self.nyquist();
                for (j, (cj, &k)) in c.iter_mut().zip(&self.wavenumbers).enumerate() {
                    if j == 0 || j == nyq {
                        *cj = Complex64::new(0.0, 0.0);
                    } else {
                        *cj /= Complex64::new(0.0, k);
                    }
                }
                self.inverse_real(c)
            }
            DerivativeScheme::CenteredFourthOrder => {
                let n = f.len();
                let mean = f.iter().sum::<f64>() / n as f64;
                let dx = self.grid.dx();
                let mut out = vec![0.0; n];
                for j in 1..n {
                    out[j] = out[j - 1] + 0.5 * dx * (f[j - 1] + f[j] - 2.0 * mean);
                }
                let shift = out.iter().sum::<f64>() / n as f64;
                out.iter_mut().for_each(|v| *v -= shift);
                out
            }
        }
    }

    /// Sharp low-pass: zero every mode with |k| > `k_cut`.
    pub fn lowpass(&self, f: &[f64], k_cut: f64) -> Vec<f64> {
        let mut c = self.forward(f);
        for (cj, &k) in c.iter_mut().zip(&self.wavenumbers) {
            if k.abs() > k_cut {
                *cj = Complex64::new(0.0, 0.0);
            }
        }
        self.inverse_real(c)
    }

    /// Samples of f(x − s) from the trigonometric interpolant of `f`.
    pub fn shift(&self, f: &[f64], s: f64) -> Vec<f64> {
        let mut c = self.forward(f);
        let nyq = self.nyquist();
        for (j, (cj, &k)) in c.iter_mut().zip(&self.wavenumbers).enumerate() {
            if j == nyq {
                *cj *= (k * s).cos();
            } else {
                *cj *= Complex64::from_polar(1.0, -k * s);
            }
        }
        self.inverse_real(c)
    }

    /// Trigonometric interpolant of grid data, evaluable off-grid.
    pub fn interpolant(&self, f: &[f64]) -> TrigInterpolant {
        TrigInterpolant {
            coeffs: self.forward(f),
            wavenumbers: self.wavenumbers.clone(),
            origin: self.grid.x(0),
        }
    }
}

/// Continuous trigonometric interpolant of periodic samples.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
    wavenumbers: Vec<f64>,
    origin: f64,
}

impl TrigInterpolant {
    /// Value and first two derivatives at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.coeffs.len();
        let nyq = n / 2;
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        let dx = x - self.origin;
        for (j, (c, &k)) in self.coeffs.iter().zip(&self.wavenumbers).enumerate() {
            if j == nyq {
                // Real-valued Nyquist term c·cos(k·x).
                let (s, co) = (k * dx).sin_cos();
                v += c.re * co;
                d1 -= c.re * k * s;
                d2 -= c.re * k * k * co;
                continue;
            }
            let e = c * Complex64::from_polar(1.0, k * dx);
            v += e.re;
            d1 -= k * e.im;
            d2 -= k * k * e.re;
        }
        let scale = 1.0 / n as f64;
        (v * scale, d1 * scale, d2 * scale)
    }
}

fn fd4_derivative(f: &[f64], order: u32, dx: f64) -> Vec<f64> {
    let n = f.len() as isize;
    let at = |j: isize| f[j.rem_euclid(n) as usize];
    match order {
        0 => f.to_vec(),
        1 => (0..n)
            .map(|j| (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * dx))
            .collect(),
        2 => (0..n)
            .map(|j| {
                (-at(j + 2) + 16.0 * at(j + 1) - 30.0 * at(j) + 16.0 * at(j - 1) - at(j - 2))
                    / (12.0 * dx * dx)
            })
            .collect(),
        3 => (0..n)
            .map(|j| {
                (-at(j + 3) + 8.0 * at(j + 2) - 13.0 * at(j + 1) + 13.0 * at(j - 1)
                    - 8.0 * at(j - 2)
                    + at(j - 3))
                    / (8.0 * dx * dx * dx)
            })
            .collect(),
        _ => {
            let inner = fd4_derivative(f, order - 2, dx);
            fd4_derivative(&inner, 2, dx)
        }
    }
}

/// Nyquist wavenumber π/dx.
pub fn nyquist_wavenumber(grid: &PeriodicGrid) -> f64 {
    PI / grid.dx()
}
