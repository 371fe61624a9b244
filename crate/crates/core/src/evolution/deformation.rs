//! Evolution of a near-solitary profile h(ξ) = h̄·sech²(pξ) in the moving
//! frame, and whether its front steepens or flattens.

use crate::diff::DiffOperator;
use crate::elliptic::sech_sq;
use crate::error::{invalid, Result};
use crate::model::{PeriodicGrid, PhysicalParams, WaveField};

use super::{advisory_dt, evolve_kdv, Frame, NoObserver, SchemeConfig, CFL_CONSTANT};

/// Amplitude h̄, inverse width p and frame parameter α of a sech² profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationSpec {
    pub hbar: f64,
    pub p: f64,
    pub alpha: f64,
}

impl DeformationSpec {
    pub fn new(hbar: f64, p: f64, alpha: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(invalid("hbar", format!("must be > 0, got {hbar}")));
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(invalid("p", format!("must be > 0, got {p}")));
        }
        if !alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        Ok(Self { hbar, p, alpha })
    }

    /// The frame α = 4σp² − (3/2)h̄, in which the rate collapses to a
    /// single sech²·tanh³ term.
    pub fn with_tanh_cubed_frame(hbar: f64, p: f64, params: &PhysicalParams) -> Result<Self> {
        Self::new(hbar, p, 4.0 * params.sigma() * p * p - 1.5 * hbar)
    }

    /// Inverse width of the steady wave with the same amplitude.
    pub fn steady_p(&self, params: &PhysicalParams) -> f64 {
        (self.hbar / (4.0 * params.sigma())).sqrt()
    }

    pub fn profile(&self, xi: f64) -> f64 {
        self.hbar * sech_sq(self.p * xi)
    }

    pub fn field(&self, grid: PeriodicGrid) -> Result<WaveField> {
        WaveField::from_fn(grid, 0.0, |x| self.profile(x))
    }
}

/// ∂h/∂τ of the moving-frame KdV equation on the sech² profile:
///
/// 3√(g/H)·p·s·t·[−h̄(4σp² − h̄)·s + ⅔h̄(α + 2σp²)], s = sech²(pξ), t = tanh(pξ).
///
/// This is the multiplied-out form, so it stays finite at 4σp² = h̄.
pub fn deformation_rate_closed_form(spec: &DeformationSpec, params: &PhysicalParams, xi: f64) -> f64 {
    let DeformationSpec { hbar, p, alpha } = *spec;
    let sigma = params.sigma();
    let s = sech_sq(p * xi);
    let t = (p * xi).tanh();
    let q = 4.0 * sigma * p * p;
    let bracket = -hbar * (q - hbar) * s + 2.0 / 3.0 * hbar * (alpha + 0.5 * q);
    3.0 * (params.g() / params.depth()).sqrt() * p * s * t * bracket
}

/// 3√(g/H)·h̄p(4σp² − h̄)·sech²(pξ)·tanh³(pξ), the rate in the frame
/// α = 4σp² − (3/2)h̄ (the spec's own α is ignored).
pub fn deformation_rate_tanh_cubed(spec: &DeformationSpec, params: &PhysicalParams, xi: f64) -> f64 {
    let DeformationSpec { hbar, p, .. } = *spec;
    let q = 4.0 * params.sigma() * p * p;
    let s = sech_sq(p * xi);
    let t = (p * xi).tanh();
    3.0 * (params.g() / params.depth()).sqrt() * hbar * p * (q - hbar) * s * t * t * t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteepeningVerdict {
    SteepensInFront,
    FlattensInFront,
    Steady,
}

impl SteepeningVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SteepeningVerdict::SteepensInFront => "steepens_in_front",
            SteepeningVerdict::FlattensInFront => "flattens_in_front",
            SteepeningVerdict::Steady => "steady",
        }
    }
}

impl std::fmt::Display for SteepeningVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compare p with the steady inverse width √(h̄/4σ).
pub fn steepening_verdict(spec: &DeformationSpec, params: &PhysicalParams) -> SteepeningVerdict {
    let p_star = spec.steady_p(params);
    if (spec.p - p_star).abs() <= 1e-12 * p_star {
        SteepeningVerdict::Steady
    } else if spec.p < p_star {
        SteepeningVerdict::SteepensInFront
    } else {
        SteepeningVerdict::FlattensInFront
    }
}

/// Largest slope magnitude on the front (ξ > 0) and back (ξ < 0) faces
/// before and after a short moving-frame run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSlopeTrend {
    pub front_before: f64,
    pub front_after: f64,
    pub back_before: f64,
    pub back_after: f64,
    pub duration: f64,
}

impl FrontSlopeTrend {
    /// Relative change of the front slope.
    pub fn front_change(&self) -> f64 {
        (self.front_after - self.front_before) / self.front_before
    }

    pub fn back_change(&self) -> f64 {
        (self.back_after - self.back_before) / self.back_before
    }

    /// Verdict implied by the measured front slope; changes below
    /// `tolerance` (relative) count as steady.
    pub fn verdict(&self, tolerance: f64) -> SteepeningVerdict {
        let c = self.front_change();
        if c.abs() <= tolerance {
            SteepeningVerdict::Steady
        } else if c > 0.0 {
            SteepeningVerdict::SteepensInFront
        } else {
            SteepeningVerdict::FlattensInFront
        }
    }
}

fn face_slopes(h: &[f64], grid: &PeriodicGrid, ops: &DiffOperator) -> (f64, f64) {
    let hx = ops.derivative(h, 1);
    let mut front: f64 = 0.0;
    let mut back: f64 = 0.0;
    for (j, d) in hx.iter().enumerate() {
        if grid.x(j) > 0.0 {
            front = front.max(d.abs());
        } else if grid.x(j) < 0.0 {
            back = back.max(d.abs());
        }
    }
    (front, back)
}

/// Evolve the sech² profile for `duration` seconds in the frame of
/// `spec.alpha` and record the face slopes.
pub fn front_slope_trend(
    spec: &DeformationSpec,
    params: &PhysicalParams,
    grid: PeriodicGrid,
    duration: f64,
) -> Result<FrontSlopeTrend> {
    let initial = spec.field(grid)?;
    let ops = DiffOperator::spectral(grid);
    let config = SchemeConfig {
        dt: advisory_dt(&grid, params, CFL_CONSTANT),
        t_end: duration,
        frame: Frame::Moving { alpha: spec.alpha },
        ..Default::default()
    };
    let traj = evolve_kdv(&initial, params, &config, &mut NoObserver)?;
    let (front_before, back_before) = face_slopes(initial.h(), &grid, &ops);
    let (front_after, back_after) = face_slopes(traj.final_field.h(), &grid, &ops);
    Ok(FrontSlopeTrend {
        front_before,
        front_after,
        back_before,
        back_after,
        duration,
    })
}
