//! Physical parameters and the periodic grid/field types shared by every
//! other module. Units are SI throughout.

use crate::error::{invalid, Error, Result};

/// Standard gravity (m/s²).
pub const GRAVITY: f64 = 9.81;
/// Density of water (kg/m³).
pub const WATER_DENSITY: f64 = 1000.0;
/// Surface tension of a clean air–water interface (N/m).
pub const WATER_SURFACE_TENSION: f64 = 0.0728;

/// Gravity, undisturbed depth, density and surface tension of the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    g: f64,
    depth: f64,
    rho: f64,
    tension: f64,
}

impl PhysicalParams {
    pub fn new(g: f64, depth: f64, rho: f64, tension: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid("g", format!("must be finite and > 0, got {g}")));
        }
        if !(depth.is_finite() && depth > 0.0) {
            return Err(invalid("H", format!("must be finite and > 0, got {depth}")));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(invalid("rho", format!("must be finite and > 0, got {rho}")));
        }
        if !(tension.is_finite() && tension >= 0.0) {
            return Err(invalid("T", format!("must be finite and >= 0, got {tension}")));
        }
        Ok(Self {
            g,
            depth,
            rho,
            tension,
        })
    }

    /// Water without capillarity at the given depth.
    pub fn gravity_water(depth: f64) -> Result<Self> {
        Self::new(GRAVITY, depth, WATER_DENSITY, 0.0)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tension(&self) -> f64 {
        self.tension
    }

    /// Lagrange long-wave speed √(gH).
    pub fn linear_speed(&self) -> f64 {
        (self.g * self.depth).sqrt()
    }

    pub fn sigma(&self) -> f64 {
        dispersion_sigma(self)
    }
}

/// Dispersion parameter σ = H³/3 − T·H/(ρg) in m³. Negative below the
/// critical depth, where only depression solitary waves exist.
pub fn dispersion_sigma(params: &PhysicalParams) -> f64 {
    let h = params.depth;
    h * h * h / 3.0 - params.tension * h / (params.rho * params.g)
}

/// Depth √(3T/(ρg)) at which σ changes sign.
pub fn critical_depth(params: &PhysicalParams) -> f64 {
    (3.0 * params.tension / (params.rho * params.g)).sqrt()
}

/// Uniform periodic grid x_j = −L/2 + j·dx, j = 0..N−1, dx = L/N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    length: f64,
    n: usize,
}

impl PeriodicGrid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid("L", format!("must be finite and > 0, got {length}")));
        }
        if n < 8 || n % 2 != 0 {
            return Err(invalid("N", format!("must be even and >= 8, got {n}")));
        }
        Ok(Self { length, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumber of FFT bin `j` in standard FFT ordering.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as isize;
        let j = j as isize;
        let signed = if j <= n / 2 { j } else { j - n };
        2.0 * std::f64::consts::PI * signed as f64 / self.length
    }

    /// Maps an arbitrary abscissa into [−L/2, L/2).
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.length;
        (x + 0.5 * l).rem_euclid(l) - 0.5 * l
    }

    /// Sample `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|j| f(self.x(j))).collect()
    }

    /// Periodic rectangle-rule integral of grid samples.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n);
        values.iter().sum::<f64>() * self.dx()
    }

    pub fn same_as(&self, other: &PeriodicGrid) -> bool {
        self.n == other.n && self.length == other.length
    }
}

/// Surface elevation h(x) above the undisturbed level at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: PeriodicGrid,
    h: Vec<f64>,
    t: f64,
}

impl WaveField {
    pub fn new(grid: PeriodicGrid, h: Vec<f64>, t: f64) -> Result<Self> {
        if h.len() != grid.len() {
            return Err(invalid(
                "h",
                format!("expected {} samples, got {}", grid.len(), h.len()),
            ));
        }
        if let Some(j) = h.iter().position(|v| !v.is_finite()) {
            return Err(invalid("h", format!("non-finite sample at index {j}")));
        }
        if !t.is_finite() {
            return Err(invalid("t", "time must be finite"));
        }
        Ok(Self { grid, h, t })
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            h: vec![0.0; grid.len()],
            grid,
            t: 0.0,
        }
    }

    pub fn from_fn(grid: PeriodicGrid, t: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.sample(f), t)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn into_values(self) -> Vec<f64> {
        self.h
    }

    pub fn max_abs(&self) -> f64 {
        self.h.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.h.iter().sum::<f64>() / self.h.len() as f64
    }

    pub(crate) fn check_same_grid(&self, other: &WaveField) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(L={}, N={}) vs (L={}, N={})",
                self.grid.length(),
                self.grid.len(),
                other.grid.length(),
                other.grid.len()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn water(depth: f64) -> PhysicalParams {
        PhysicalParams::new(GRAVITY, depth, WATER_DENSITY, WATER_SURFACE_TENSION).unwrap()
    }

    #[test]
    fn sigma_without_tension_is_cube_over_three() {
        let p = PhysicalParams::new(9.81, 1.0, 1000.0, 0.0).unwrap();
        assert!((dispersion_sigma(&p) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn sigma_vanishes_at_bisected_root() {
        // Root of H³/3 = T·H/(ρg), found by bisection.
        let f = |h: f64| h * h * h / 3.0 - 0.0728 * h / (1000.0 * 9.81);
        let (mut lo, mut hi) = (1e-4, 1e-2);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 0.004718).abs() < 1e-6);
        let s = dispersion_sigma(&water(root));
        assert!(s.abs() < 1e-20, "sigma at root = {s}");
    }

    #[test]
    fn sigma_half_metre_matches_direct_arithmetic() {
        // 0.125/3 − 0.0728·0.5/9810, evaluated by hand.
        let expected = 0.041_666_666_666_666_664 - 3.710_499_490_316_004e-6;
        let s = dispersion_sigma(&water(0.5));
        assert!((s - expected).abs() < 1e-15);
        assert!((s - 0.041_663_0).abs() < 1e-7);
    }

    #[test]
    fn critical_depth_for_water() {
        let d = critical_depth(&water(1.0));
        assert!((d - 0.004_718_368_037_986_866).abs() < 1e-15, "{d}");
        let no_tension = PhysicalParams::new(9.81, 1.0, 1000.0, 0.0).unwrap();
        assert_eq!(critical_depth(&no_tension), 0.0);
        let s = dispersion_sigma(&water(d));
        // Relative to either term of the difference.
        assert!(s.abs() <= 1e-15 * d.powi(3) / 3.0);
    }

    #[test]
    fn sigma_sign_and_monotonicity() {
        let hc = critical_depth(&water(1.0));
        for i in 1..50 {
            let h = hc * i as f64 / 50.0;
            assert!(dispersion_sigma(&water(h)) < 0.0);
        }
        let mut prev = dispersion_sigma(&water(hc));
        for i in 1..200 {
            let h = hc * (1.0 + 0.05 * i as f64);
            let s = dispersion_sigma(&water(h));
            assert!(s > prev);
            prev = s;
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(9.81, -1.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(9.81, 1.0, 0.0, 0.0).is_err());
        assert!(PhysicalParams::new(9.81, 1.0, 1.0, -0.1).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn grid_validation_and_layout() {
        assert!(PeriodicGrid::new(1.0, 6).is_err());
        assert!(PeriodicGrid::new(1.0, 9).is_err());
        assert!(PeriodicGrid::new(0.0, 8).is_err());
        let g = PeriodicGrid::new(10.0, 8).unwrap();
        assert_eq!(g.x(0), -5.0);
        assert_eq!(g.x(4), 0.0);
        assert!((g.wrap(5.0) + 5.0).abs() < 1e-15);
        assert!((g.wrap(-7.5) - 2.5).abs() < 1e-15);
        let total: f64 = (0..g.len()).map(|_| g.dx()).sum();
        assert!((total - g.length()).abs() <= 1e-12 * g.length());
    }

    #[test]
    fn field_rejects_wrong_length_and_nan() {
        let g = PeriodicGrid::new(1.0, 8).unwrap();
        assert!(WaveField::new(g, vec![0.0; 7], 0.0).is_err());
        let mut v = vec![0.0; 8];
        v[3] = f64::INFINITY;
        assert!(WaveField::new(g, v, 0.0).is_err());
    }
}
