//! Closed-form steady waves: the sech² solitary wave and the cn² cnoidal
//! wave, their speeds, and the first-order steady-wave ODEs they satisfy.

use crate::elliptic::{complete_k, jacobi_cn_sn_dn, sech_sq, EllipticParameter};
use crate::error::{invalid, Error, Result};
use crate::model::{PeriodicGrid, PhysicalParams, WaveField};

/// Solitary wave h(x) = h0·sech²(√(h0/4σ)·x).
///
/// Elevation waves need σ > 0 and h0 > 0; depression waves (σ < 0, below
/// the critical depth) need h0 < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitarySpec {
    h0: f64,
    sigma: f64,
    depth: f64,
    g: f64,
}

impl SolitarySpec {
    pub fn new(h0: f64, params: &PhysicalParams) -> Result<Self> {
        Self::with_sigma(h0, params.sigma(), params.depth(), params.g())
    }

    pub fn with_sigma(h0: f64, sigma: f64, depth: f64, g: f64) -> Result<Self> {
        if !(h0.is_finite() && sigma.is_finite()) || h0 * sigma <= 0.0 {
            return Err(Error::Domain(format!(
                "no steady solitary wave for h0 = {h0}, sigma = {sigma}: need h0*sigma > 0"
            )));
        }
        if !(depth > 0.0 && g > 0.0) {
            return Err(invalid("H", "depth and gravity must be positive"));
        }
        Ok(Self {
            h0,
            sigma,
            depth,
            g,
        })
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Inverse width √(h0/4σ) (1/m).
    pub fn inverse_width(&self) -> f64 {
        (self.h0 / (4.0 * self.sigma)).sqrt()
    }

    pub fn profile(&self, x: f64) -> f64 {
        solitary_profile(self, x)
    }

    /// First and second x-derivatives of the closed-form profile.
    pub fn derivatives(&self, x: f64) -> (f64, f64) {
        let kappa = self.inverse_width();
        let s = sech_sq(kappa * x);
        let t = (kappa * x).tanh();
        let d1 = -2.0 * kappa * self.h0 * s * t;
        let d2 = self.h0 * kappa * kappa * (4.0 * s - 6.0 * s * s);
        (d1, d2)
    }

    /// Profile centred at `center` sampled on `grid`, using the periodic
    /// image nearest to each grid point.
    pub fn field(&self, grid: PeriodicGrid, center: f64, t: f64) -> Result<WaveField> {
        WaveField::from_fn(grid, t, |x| self.profile(grid.wrap(x - center)))
    }
}

pub fn solitary_profile(spec: &SolitarySpec, x: f64) -> f64 {
    spec.h0 * sech_sq(spec.inverse_width() * x)
}

/// ω = √(gH) + ½√(g/H)·h0.
pub fn solitary_speed(spec: &SolitarySpec) -> f64 {
    (spec.g * spec.depth).sqrt() + 0.5 * (spec.g / spec.depth).sqrt() * spec.h0
}

/// Unapproximated √(g(H + h0)).
pub fn rayleigh_speed(g: f64, depth: f64, h0: f64) -> Result<f64> {
    if depth + h0 <= 0.0 {
        return Err(Error::Domain(format!(
            "rayleigh speed needs H + h0 > 0, got H = {depth}, h0 = {h0}"
        )));
    }
    Ok((g * (depth + h0)).sqrt())
}

/// (h′)² − h²(h0 − h)/σ on the closed-form profile, normalized by h0³/σ.
pub fn steady_ode_residual_solitary(spec: &SolitarySpec, x: f64) -> f64 {
    let h = spec.profile(x);
    let (d1, _) = spec.derivatives(x);
    let scale = spec.h0.powi(3) / spec.sigma;
    (d1 * d1 - h * h * (spec.h0 - h) / spec.sigma) / scale
}

/// Cnoidal wave h̃(ξ) = l·cn²(√((l+k)/4σ)·ξ | m), m = l/(l+k), measured
/// from the trough level with the crest at ξ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalSpec {
    k: f64,
    l: f64,
    sigma: f64,
    depth: f64,
    g: f64,
}

impl CnoidalSpec {
    pub fn new(k: f64, l: f64, params: &PhysicalParams) -> Result<Self> {
        Self::with_sigma(k, l, params.sigma(), params.depth(), params.g())
    }

    pub fn with_sigma(k: f64, l: f64, sigma: f64, depth: f64, g: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(invalid("k", format!("must be > 0, got {k}")));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(invalid("l", format!("must be > 0, got {l}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", format!("cnoidal waves need sigma > 0, got {sigma}")));
        }
        if !(depth > 0.0 && g > 0.0) {
            return Err(invalid("H", "depth and gravity must be positive"));
        }
        Ok(Self {
            k,
            l,
            sigma,
            depth,
            g,
        })
    }

    /// Spec with the given elliptic parameter and crest height l.
    pub fn from_parameter(m: f64, l: f64, params: &PhysicalParams) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(invalid("m", format!("must lie in (0, 1), got {m}")));
        }
        Self::new(l * (1.0 - m) / m, l, params)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn parameter(&self) -> EllipticParameter {
        // l/(l+k) lies strictly inside (0, 1) for positive roots.
        EllipticParameter::new(self.l / (self.l + self.k)).expect("l, k > 0")
    }

    /// Spatial frequency √((l+k)/4σ) of the cn argument.
    pub fn beta(&self) -> f64 {
        ((self.l + self.k) / (4.0 * self.sigma)).sqrt()
    }

    /// Moving-frame parameter α = (k − l)/2 for which the profile is steady.
    pub fn alpha(&self) -> f64 {
        0.5 * (self.k - self.l)
    }

    /// Fixed-frame speed √(gH) − √(g/H)·α of the trough-referenced profile.
    pub fn frame_speed(&self) -> f64 {
        (self.g * self.depth).sqrt() - (self.g / self.depth).sqrt() * self.alpha()
    }

    /// Fixed-frame speed after shifting the profile down by `mean` so it
    /// has zero spatial mean.
    pub fn zero_mean_speed(&self, mean: f64) -> f64 {
        self.frame_speed() - 1.5 * (self.g / self.depth).sqrt() * mean
    }

    pub fn profile(&self, xi: f64) -> f64 {
        cnoidal_profile(self, xi)
    }

    pub fn wavelength(&self) -> f64 {
        cnoidal_wavelength(self)
    }

    /// Zero-mean field on `grid` with the crest at `phase`. The grid length
    /// should be a whole number of wavelengths.
    pub fn zero_mean_field(&self, grid: PeriodicGrid, phase: f64) -> Result<(WaveField, f64)> {
        let raw = grid.sample(|x| self.profile(x - phase));
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let h = raw.into_iter().map(|v| v - mean).collect();
        Ok((WaveField::new(grid, h, 0.0)?, mean))
    }
}

pub fn cnoidal_profile(spec: &CnoidalSpec, xi: f64) -> f64 {
    let (cn, _, _) = jacobi_cn_sn_dn(spec.beta() * xi, spec.parameter())
        .expect("finite argument and valid parameter");
    spec.l * cn * cn
}

/// 4K(m)·√(σ/(l+k)).
pub fn cnoidal_wavelength(spec: &CnoidalSpec) -> f64 {
    let k = complete_k(spec.parameter()).expect("m < 1 for positive k");
    4.0 * k * (spec.sigma / (spec.l + spec.k)).sqrt()
}

/// (dh̃/dξ)² − (h̃+k)h̃(l−h̃)/σ on the closed-form profile, normalized by
/// (l+k)³/σ.
pub fn cnoidal_ode_residual(spec: &CnoidalSpec, xi: f64) -> f64 {
    let beta = spec.beta();
    let (cn, sn, dn) =
        jacobi_cn_sn_dn(beta * xi, spec.parameter()).expect("finite argument and valid parameter");
    let h = spec.l * cn * cn;
    let dh = -2.0 * spec.l * beta * cn * sn * dn;
    let rhs = (h + spec.k) * h * (spec.l - h) / spec.sigma;
    (dh * dh - rhs) / ((spec.l + spec.k).powi(3) / spec.sigma)
}

/// ω = √(g(H + l − k)).
pub fn boussinesq_periodic_speed(spec: &CnoidalSpec) -> Result<f64> {
    let level = spec.depth + spec.l - spec.k;
    if level <= 0.0 {
        return Err(Error::Domain(format!(
            "periodic speed needs H + l - k > 0, got {level}"
        )));
    }
    Ok((spec.g * level).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalParams {
        PhysicalParams::gravity_water(1.0).unwrap()
    }

    #[test]
    fn solitary_crest_and_tail() {
        let s = SolitarySpec::new(0.2, &unit()).unwrap();
        assert_eq!(s.profile(0.0), 0.2);
        let far = 40.0 / s.inverse_width();
        assert!(s.profile(far) < 1e-30);
        assert!(s.profile(-far) < 1e-30);
    }

    #[test]
    fn solitary_half_height_abscissa_matches_root_finding() {
        let s = SolitarySpec::new(0.2, &unit()).unwrap();
        // arcsech(1/√2) = ln(√2 + 1)
        let closed = (4.0 * s.sigma() / s.h0()).sqrt() * (2f64.sqrt() + 1.0).ln();
        let (mut lo, mut hi) = (0.0, 20.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if s.profile(mid) > 0.1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((closed - lo).abs() < 1e-12);
        assert!((s.profile(closed) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn solitary_sign_rule() {
        assert!(SolitarySpec::with_sigma(0.1, -1e-3, 0.003, 9.81).is_err());
        assert!(SolitarySpec::with_sigma(-0.1, 1.0, 1.0, 9.81).is_err());
        assert!(SolitarySpec::with_sigma(0.0, 1.0, 1.0, 9.81).is_err());
        let depression = SolitarySpec::with_sigma(-1e-4, -1e-9, 0.003, 9.81).unwrap();
        assert!(depression.profile(0.0) < 0.0);
        assert!(depression.profile(1e-3) > depression.profile(0.0));
    }

    #[test]
    fn speeds() {
        let g = 9.81;
        let flat = SolitarySpec::with_sigma(1e-300, 5f64.powi(3) / 3.0, 5.0, g).unwrap();
        assert!((solitary_speed(&flat) - 49.05f64.sqrt()).abs() < 1e-12);
        let s = SolitarySpec::with_sigma(0.5, 5f64.powi(3) / 3.0, 5.0, g).unwrap();
        assert!((solitary_speed(&s) - 7.353_749_043_855_114).abs() < 1e-12);
        assert!((rayleigh_speed(g, 5.0, 0.0).unwrap() - 7.003_570_517_957_252).abs() < 1e-12);
        assert!((rayleigh_speed(g, 5.0, 0.5).unwrap() - 7.345_406_728_017_177).abs() < 1e-12);
        assert!(rayleigh_speed(g, 1.0, -1.0).is_err());
    }

    #[test]
    fn rayleigh_gap_is_second_order() {
        let g = 9.81;
        let gap = |h0: f64| {
            let s = SolitarySpec::with_sigma(h0, 1.0 / 3.0, 1.0, g).unwrap();
            (rayleigh_speed(g, 1.0, h0).unwrap() - solitary_speed(&s)).abs()
        };
        for h0 in [0.2, 0.1, 0.05] {
            let ratio = gap(h0) / gap(0.5 * h0);
            assert!((4.0 / 1.5..=4.0 * 1.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn solitary_speed_linear_and_increasing() {
        let g = 9.81;
        let base = 9.81_f64.sqrt();
        let mut prev = 0.0;
        for i in 1..20 {
            let h0 = 0.02 * i as f64;
            let s = SolitarySpec::with_sigma(h0, 1.0 / 3.0, 1.0, g).unwrap();
            let w = solitary_speed(&s);
            assert!(((w - base) / h0 - 0.5 * g.sqrt()).abs() < 1e-12);
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn solitary_ode_residual() {
        let s = SolitarySpec::new(0.2, &unit()).unwrap();
        assert_eq!(steady_ode_residual_solitary(&s, 0.0), 0.0);
        let w = 1.0 / s.inverse_width();
        assert!(steady_ode_residual_solitary(&s, w).abs() <= 1e-12);
        assert!(steady_ode_residual_solitary(&s, 80.0 * w).abs() <= 1e-12);
        for i in 0..400 {
            let x = -20.0 * w + 0.1 * w * i as f64;
            assert!(steady_ode_residual_solitary(&s, x).abs() <= 1e-12);
        }
    }

    #[test]
    fn cnoidal_crest_trough_wavelength() {
        let c = CnoidalSpec::with_sigma(0.1, 0.1, 1.0 / 3.0, 1.0, 9.81).unwrap();
        assert_eq!(c.profile(0.0), 0.1);
        let k = complete_k(c.parameter()).unwrap();
        assert!(c.profile(k / c.beta()).abs() < 1e-10);
        assert!((c.wavelength() - 9.574_400_463_750_805).abs() < 1e-10);
        // Small-l limit approaches 2π√(σ/k).
        let thin = CnoidalSpec::with_sigma(0.1, 1e-12, 1.0 / 3.0, 1.0, 9.81).unwrap();
        let expect = 2.0 * std::f64::consts::PI * ((1.0 / 3.0) / 0.1_f64).sqrt();
        assert!((thin.wavelength() - expect).abs() < 1e-9);
    }

    #[test]
    fn cnoidal_residual_zero_at_crest() {
        let c = CnoidalSpec::with_sigma(0.05, 0.1, 1.0 / 3.0, 1.0, 9.81).unwrap();
        assert_eq!(cnoidal_ode_residual(&c, 0.0), 0.0);
    }

    #[test]
    fn cnoidal_wavelength_decreases_with_k() {
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let k = 0.01 * i as f64;
            let c = CnoidalSpec::with_sigma(k, 0.1, 1.0 / 3.0, 1.0, 9.81).unwrap();
            let lam = c.wavelength();
            assert!(lam < prev);
            prev = lam;
        }
    }

    #[test]
    fn periodic_speed_values() {
        let sym = CnoidalSpec::with_sigma(0.07, 0.07, 1.0 / 3.0, 1.0, 9.81).unwrap();
        assert!((boussinesq_periodic_speed(&sym).unwrap() - 9.81f64.sqrt()).abs() < 1e-15);
        let c = CnoidalSpec::with_sigma(0.02, 0.12, 1.0 / 3.0, 1.0, 9.81).unwrap();
        let w = boussinesq_periodic_speed(&c).unwrap();
        assert!((w - 3.284_965_753_246_143).abs() < 1e-12);
        let dry = CnoidalSpec::with_sigma(2.0, 0.5, 1.0 / 3.0, 1.0, 9.81).unwrap();
        assert!(boussinesq_periodic_speed(&dry).is_err());
    }

    #[test]
    fn periodic_speed_matches_frame_speed_to_second_order() {
        let gap = |d: f64| {
            let c = CnoidalSpec::with_sigma(0.05, 0.05 + d, 1.0 / 3.0, 1.0, 9.81).unwrap();
            (boussinesq_periodic_speed(&c).unwrap() - c.frame_speed()).abs()
        };
        for d in [0.2, 0.1, 0.05] {
            let ratio = gap(d) / gap(0.5 * d);
            assert!((4.0 / 1.5..=4.0 * 1.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn cnoidal_rejects_bad_roots() {
        assert!(CnoidalSpec::with_sigma(0.0, 0.1, 1.0, 1.0, 9.81).is_err());
        assert!(CnoidalSpec::with_sigma(0.1, -0.1, 1.0, 1.0, 9.81).is_err());
        assert!(CnoidalSpec::with_sigma(0.1, 0.1, -1.0, 1.0, 9.81).is_err());
    }
}
