//! Method-of-lines time integration of the unidirectional KdV equation (fixed
//! or moving frame) and the bidirectional Boussinesq equation.
//!
//! Fixed frame:
//! h_t = −(3/2)√(g/H)·∂x(⅔Hh + ½h² + (σ/3)h_xx)
//!
//! Moving frame ξ = x − (√(gH) − √(g/H)α)t:
//! h_τ = −(3/2)√(g/H)·∂ξ(½h² + ⅔αh + (σ/3)h_ξξ)
//!
//! Boussinesq, as a first-order system in (h, h_t):
//! h_tt = gH·∂xx(h + 3h²/2H + (H²/3)h_xx)
//!
//! The Boussinesq system is linearly ill-posed above k = √3/H, so its
//! right-hand side is passed through a sharp spectral low-pass unless the
//! filter is explicitly disabled.

mod deformation;
mod factorization;

use std::cell::Cell;

use rustfft::num_complex::Complex64;
use std::fmt;

pub use deformation::{
    deformation_rate_closed_form, deformation_rate_tanh_cubed, front_slope_trend,
    steepening_verdict, DeformationSpec, FrontSlopeTrend, SteepeningVerdict,
};
pub use factorization::{factorization_residual, translating_wave_residuals, TranslatingResiduals};

use crate::diff::{DerivativeScheme, DiffOperator};
use crate::error::{invalid, Error, Result};
use crate::invariants::{compute_invariants_with_rate, InvariantSet};
use crate::model::{PeriodicGrid, PhysicalParams, WaveField};

/// RK4 dispersive stability constant: the largest stable value is ≈ 5.66
/// (2√2 on the imaginary axis times 2); 2.0 was frozen after a sweep over
/// N ∈ {256, 512, 1024} with solitary data of h0/H up to 0.5.
pub const CFL_CONSTANT: f64 = 2.0;

/// Any |h| above this multiple of the depth aborts a run.
pub const BLOWUP_DEPTH_FACTOR: f64 = 10.0;

/// Default low-pass cutoff as a fraction of √3/H.
pub const DEFAULT_FILTER_CUT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Frame {
    #[default]
    Fixed,
    /// Frame translating at √(gH) − √(g/H)·alpha.
    Moving { alpha: f64 },
}

impl Frame {
    /// Velocity of the frame relative to the fixed frame.
    pub fn velocity(&self, params: &PhysicalParams) -> f64 {
        match *self {
            Frame::Fixed => 0.0,
            Frame::Moving { alpha } => {
                params.linear_speed() - (params.g() / params.depth()).sqrt() * alpha
            }
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Fixed => f.write_str("fixed"),
            Frame::Moving { alpha } => write!(f, "moving(alpha={alpha:e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub deriv: DerivativeScheme,
    pub dt: f64,
    pub t_end: f64,
    /// Boussinesq low-pass cutoff as a fraction of √3/H; `None` disables it.
    pub filter_cut: Option<f64>,
    pub frame: Frame,
    /// Steps between stored snapshots; 0 keeps only the first and last.
    pub snapshot_every: usize,
    /// Steps between invariant samples; 0 samples only the ends.
    pub invariants_every: usize,
    /// Scale parameter of the Hamiltonian; `None` means −H²/12.
    pub epsilon: Option<f64>,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            deriv: DerivativeScheme::Spectral,
            dt: 1e-3,
            t_end: 1.0,
            filter_cut: Some(DEFAULT_FILTER_CUT),
            frame: Frame::Fixed,
            snapshot_every: 0,
            invariants_every: 0,
            epsilon: None,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(invalid("t_end", format!("must be >= 0, got {}", self.t_end)));
        }
        if let Some(cut) = self.filter_cut {
            if !(cut > 0.0 && cut < 1.0) {
                return Err(invalid("filter_cut", format!("must lie in (0, 1), got {cut}")));
            }
        }
        if let Frame::Moving { alpha } = self.frame {
            if !alpha.is_finite() {
                return Err(invalid("alpha", "must be finite"));
            }
        }
        Ok(())
    }

    /// Number of equal steps covering [0, t_end] with step ≤ dt.
    pub fn step_count(&self) -> usize {
        if self.t_end == 0.0 {
            0
        } else {
            (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize
        }
    }

    pub fn epsilon_for(&self, params: &PhysicalParams) -> f64 {
        self.epsilon
            .unwrap_or_else(|| crate::invariants::canonical_epsilon(params))
    }
}

/// Largest KdV time step under the RK4 dispersive bound
/// dt ≤ c·dx³·H / (√(gH)·max(|σ|, H³/3)·π³).
pub fn advisory_dt(grid: &PeriodicGrid, params: &PhysicalParams, c_cfl: f64) -> f64 {
    let h = params.depth();
    let dx = grid.dx();
    let sigma = params.sigma().abs().max(h * h * h / 3.0);
    c_cfl * dx.powi(3) * h / (params.linear_speed() * sigma * std::f64::consts::PI.powi(3))
}

/// Autonomous right-hand side for the method of lines.
pub trait Dynamics {
    fn rhs(&self, state: &[f64]) -> Vec<f64>;

    /// Surface-elevation part of a state vector.
    fn elevation<'a>(&self, state: &'a [f64]) -> &'a [f64];
}

/// Unidirectional KdV dynamics in a fixed or moving frame.
#[derive(Debug, Clone)]
pub struct KdvDynamics {
    ops: DiffOperator,
    params: PhysicalParams,
    frame: Frame,
}

impl KdvDynamics {
    pub fn new(ops: DiffOperator, params: PhysicalParams, frame: Frame) -> Self {
        Self { ops, params, frame }
    }
}

impl Dynamics for KdvDynamics {
    fn rhs(&self, state: &[f64]) -> Vec<f64> {
        kdv_rhs_values(state, &self.params, self.frame, &self.ops)
    }

    fn elevation<'a>(&self, state: &'a [f64]) -> &'a [f64] {
        state
    }
}

pub(crate) fn kdv_rhs_values(
    h: &[f64],
    params: &PhysicalParams,
    frame: Frame,
    ops: &DiffOperator,
) -> Vec<f64> {
    let depth = params.depth();
    let sigma = params.sigma();
    let linear = match frame {
        Frame::Fixed => 2.0 / 3.0 * depth,
        Frame::Moving { alpha } => 2.0 / 3.0 * alpha,
    };
    let scale = -1.5 * (params.g() / depth).sqrt();
    if ops.scheme() == DerivativeScheme::Spectral {
        return spectral_kdv_rhs(h, linear, sigma, scale, ops);
    }
    let hxx = ops.derivative(h, 2);
    let flux: Vec<f64> = h
        .iter()
        .zip(&hxx)
        .map(|(&v, &vxx)| linear * v + 0.5 * v * v + sigma / 3.0 * vxx)
        .collect();
    ops.derivative(&flux, 1)
        .into_iter()
        .map(|v| scale * v)
        .collect()
}

/// Same flux derivative assembled in Fourier space with three transforms.
fn spectral_kdv_rhs(h: &[f64], linear: f64, sigma: f64, scale: f64, ops: &DiffOperator) -> Vec<f64> {
    let hh = ops.forward(h);
    let sq: Vec<f64> = h.iter().map(|v| v * v).collect();
    let sq = ops.forward(&sq);
    let nyq = h.len() / 2;
    let coeffs = hh
        .iter()
        .zip(&sq)
        .zip(ops.wavenumbers())
        .enumerate()
        .map(|(j, ((&a, &b), &k))| {
            if j == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                let flux = a * (linear - sigma / 3.0 * k * k) + 0.5 * b;
                Complex64::new(0.0, scale * k) * flux
            }
        })
        .collect();
    ops.inverse_real(coeffs)
}

/// ∂h/∂t of the KdV equation in the given frame.
pub fn kdv_rhs(
    field: &WaveField,
    params: &PhysicalParams,
    frame: Frame,
    ops: &DiffOperator,
) -> Vec<f64> {
    kdv_rhs_values(field.h(), params, frame, ops)
}

/// Record of how much the Boussinesq low-pass removed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FilterLog {
    pub k_cut: f64,
    pub evaluations: u64,
    /// Largest max-norm of the removed part of h_tt over all evaluations.
    pub max_removed: f64,
}

/// Bidirectional Boussinesq dynamics on the state [h; h_t].
#[derive(Debug)]
pub struct BoussinesqDynamics {
    ops: DiffOperator,
    params: PhysicalParams,
    k_cut: Option<f64>,
    evaluations: Cell<u64>,
    max_removed: Cell<f64>,
}

impl BoussinesqDynamics {
    pub fn new(ops: DiffOperator, params: PhysicalParams, filter_cut: Option<f64>) -> Self {
        let k_cut = filter_cut.map(|c| c * 3f64.sqrt() / params.depth());
        Self {
            ops,
            params,
            k_cut,
            evaluations: Cell::new(0),
            max_removed: Cell::new(0.0),
        }
    }

    pub fn filter_log(&self) -> Option<FilterLog> {
        self.k_cut.map(|k_cut| FilterLog {
            k_cut,
            evaluations: self.evaluations.get(),
            max_removed: self.max_removed.get(),
        })
    }

    fn split(&self, state: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.ops.grid().len();
        let (h, ht) = state.split_at(n);
        let (dh, dht) = boussinesq_rates(h, ht, &self.params, &self.ops);
        match self.k_cut {
            None => (dh, dht),
            Some(k_cut) => {
                let fh = self.ops.lowpass(&dh, k_cut);
                let fht = self.ops.lowpass(&dht, k_cut);
                let removed = dht
                    .iter()
                    .zip(&fht)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                self.evaluations.set(self.evaluations.get() + 1);
                self.max_removed.set(self.max_removed.get().max(removed));
                (fh, fht)
            }
        }
    }
}

impl Dynamics for BoussinesqDynamics {
    fn rhs(&self, state: &[f64]) -> Vec<f64> {
        let (mut dh, dht) = self.split(state);
        dh.extend(dht);
        dh
    }

    fn elevation<'a>(&self, state: &'a [f64]) -> &'a [f64] {
        &state[..self.ops.grid().len()]
    }
}

fn boussinesq_rates(
    h: &[f64],
    ht: &[f64],
    params: &PhysicalParams,
    ops: &DiffOperator,
) -> (Vec<f64>, Vec<f64>) {
    let depth = params.depth();
    let hxx = ops.derivative(h, 2);
    let bracket: Vec<f64> = h
        .iter()
        .zip(&hxx)
        .map(|(&v, &vxx)| v + 1.5 * v * v / depth + depth * depth / 3.0 * vxx)
        .collect();
    let c2 = params.g() * depth;
    let htt = ops.derivative(&bracket, 2).into_iter().map(|v| c2 * v).collect();
    (ht.to_vec(), htt)
}

/// Surface elevation and its time derivative for the Boussinesq system.
#[derive(Debug, Clone, PartialEq)]
pub struct BoussinesqState {
    pub h: WaveField,
    pub h_t: Vec<f64>,
}

impl BoussinesqState {
    pub fn new(h: WaveField, h_t: Vec<f64>) -> Result<Self> {
        if h_t.len() != h.grid().len() {
            return Err(Error::GridMismatch(format!(
                "h has {} samples but h_t has {}",
                h.grid().len(),
                h_t.len()
            )));
        }
        Ok(Self { h, h_t })
    }

    fn to_vector(&self) -> Vec<f64> {
        let mut y = self.h.h().to_vec();
        y.extend_from_slice(&self.h_t);
        y
    }
}

/// (h_t, h_tt) of the Boussinesq system, low-pass filtered per `config`.
pub fn boussinesq_rhs(
    h: &WaveField,
    h_t: &WaveField,
    params: &PhysicalParams,
    config: &SchemeConfig,
    ops: &DiffOperator,
) -> Result<(Vec<f64>, Vec<f64>)> {
    h.check_same_grid(h_t)?;
    if !h.grid().same_as(ops.grid()) {
        return Err(Error::GridMismatch("operator built for another grid".into()));
    }
    let dynamics = BoussinesqDynamics::new(ops.clone(), *params, config.filter_cut);
    let mut y = h.h().to_vec();
    y.extend_from_slice(h_t.h());
    Ok(dynamics.split(&y))
}

/// One classical fourth-order Runge–Kutta step of `dynamics`.
///
/// Fails with [`Error::BlowUp`] if any stage turns non-finite or the new
/// elevation exceeds `blowup_limit` in magnitude.
pub fn rk4_step<D: Dynamics + ?Sized>(
    dynamics: &D,
    y: &[f64],
    t: f64,
    dt: f64,
    blowup_limit: f64,
) -> Result<Vec<f64>> {
    let check = |stage: &[f64], which: &str| -> Result<()> {
        if stage.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::BlowUp {
                t,
                reason: format!("non-finite value in RK4 {which}"),
            })
        }
    };
    let axpy = |a: f64, x: &[f64]| -> Vec<f64> { y.iter().zip(x).map(|(u, v)| u + a * v).collect() };

    let k1 = dynamics.rhs(y);
    check(&k1, "stage 1")?;
    let k2 = dynamics.rhs(&axpy(0.5 * dt, &k1));
    check(&k2, "stage 2")?;
    let k3 = dynamics.rhs(&axpy(0.5 * dt, &k2));
    check(&k3, "stage 3")?;
    let k4 = dynamics.rhs(&axpy(dt, &k3));
    check(&k4, "stage 4")?;

    let next: Vec<f64> = (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    check(&next, "update")?;
    let peak = dynamics
        .elevation(&next)
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak > blowup_limit {
        return Err(Error::BlowUp {
            t: t + dt,
            reason: format!("|h| = {peak:e} exceeds {blowup_limit:e}"),
        });
    }
    Ok(next)
}

/// Advance a KdV field by one RK4 step of `config.dt`.
pub fn step_kdv(
    field: &WaveField,
    params: &PhysicalParams,
    config: &SchemeConfig,
    ops: &DiffOperator,
) -> Result<WaveField> {
    config.validate()?;
    let dynamics = KdvDynamics::new(ops.clone(), *params, config.frame);
    let limit = BLOWUP_DEPTH_FACTOR * params.depth();
    let next = rk4_step(&dynamics, field.h(), field.t(), config.dt, limit)?;
    WaveField::new(*field.grid(), next, field.t() + config.dt)
}

/// Advance a Boussinesq state by one RK4 step of `config.dt`.
pub fn step_boussinesq(
    state: &BoussinesqState,
    params: &PhysicalParams,
    config: &SchemeConfig,
    ops: &DiffOperator,
) -> Result<BoussinesqState> {
    config.validate()?;
    let dynamics = BoussinesqDynamics::new(ops.clone(), *params, config.filter_cut);
    let limit = BLOWUP_DEPTH_FACTOR * params.depth();
    let y = rk4_step(&dynamics, &state.to_vector(), state.h.t(), config.dt, limit)?;
    let n = state.h.grid().len();
    let h = WaveField::new(*state.h.grid(), y[..n].to_vec(), state.h.t() + config.dt)?;
    Ok(BoussinesqState {
        h,
        h_t: y[n..].to_vec(),
    })
}

/// Snapshots, invariant series and end state of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<WaveField>,
    pub invariants: Vec<InvariantSet>,
    pub final_field: WaveField,
    /// Final h_t for Boussinesq runs.
    pub final_rate: Option<Vec<f64>>,
    /// Boussinesq energy samples (t, value), aligned with `invariants`.
    pub energy: Vec<(f64, f64)>,
    pub steps: usize,
    pub filter: Option<FilterLog>,
}

/// Called once per accepted step (and once for the initial state).
pub trait Observer {
    fn observe(&mut self, t: f64, h: &[f64]);
}

impl<F: FnMut(f64, &[f64])> Observer for F {
    fn observe(&mut self, t: f64, h: &[f64]) {
        self(t, h)
    }
}

/// Observer that ignores everything.
pub struct NoObserver;

impl Observer for NoObserver {
    fn observe(&mut self, _: f64, _: &[f64]) {}
}

fn check_grid(field: &WaveField, ops: &DiffOperator) -> Result<()> {
    if field.grid().same_as(ops.grid()) {
        Ok(())
    } else {
        Err(Error::GridMismatch("operator built for another grid".into()))
    }
}

/// Integrate the KdV equation from `initial` to `config.t_end`.
pub fn evolve_kdv(
    initial: &WaveField,
    params: &PhysicalParams,
    config: &SchemeConfig,
    observer: &mut dyn Observer,
) -> Result<Trajectory> {
    config.validate()?;
    let ops = DiffOperator::new(*initial.grid(), config.deriv);
    check_grid(initial, &ops)?;
    let dynamics = KdvDynamics::new(ops.clone(), *params, config.frame);
    let epsilon = config.epsilon_for(params);
    let grid = *initial.grid();

    let sample = |y: &[f64], t: f64| -> Result<InvariantSet> {
        let field = WaveField::new(grid, y.to_vec(), t)?;
        let rate = kdv_rhs_values(y, params, Frame::Fixed, &ops);
        Ok(compute_invariants_with_rate(&field, &rate, params, epsilon, &ops))
    };

    integrate(&dynamics, initial.h().to_vec(), initial.t(), grid, params, config, observer, &sample, &|_| None)
        .map(|(mut traj, _)| {
            traj.final_rate = None;
            traj
        })
}

/// Integrate the Boussinesq system from `initial` to `config.t_end`.
pub fn evolve_boussinesq(
    initial: &BoussinesqState,
    params: &PhysicalParams,
    config: &SchemeConfig,
    observer: &mut dyn Observer,
) -> Result<Trajectory> {
    config.validate()?;
    let grid = *initial.h.grid();
    let ops = DiffOperator::new(grid, config.deriv);
    let dynamics = BoussinesqDynamics::new(ops.clone(), *params, config.filter_cut);
    let epsilon = config.epsilon_for(params);
    let n = grid.len();

    let sample = |y: &[f64], t: f64| -> Result<InvariantSet> {
        let field = WaveField::new(grid, y[..n].to_vec(), t)?;
        Ok(compute_invariants_with_rate(&field, &y[n..], params, epsilon, &ops))
    };
    let energy = |y: &[f64]| Some(boussinesq_energy_values(&y[..n], &y[n..], params, &ops));

    let (mut traj, y) = integrate(
        &dynamics,
        initial.to_vector(),
        initial.h.t(),
        grid,
        params,
        config,
        observer,
        &sample,
        &energy,
    )?;
    traj.final_rate = Some(y[n..].to_vec());
    traj.filter = dynamics.filter_log();
    Ok(traj)
}

#[allow(clippy::too_many_arguments)]
fn integrate<D: Dynamics>(
    dynamics: &D,
    mut y: Vec<f64>,
    t0: f64,
    grid: PeriodicGrid,
    params: &PhysicalParams,
    config: &SchemeConfig,
    observer: &mut dyn Observer,
    sample: &dyn Fn(&[f64], f64) -> Result<InvariantSet>,
    energy: &dyn Fn(&[f64]) -> Option<f64>,
) -> Result<(Trajectory, Vec<f64>)> {
    let steps = config.step_count();
    let dt = if steps == 0 { 0.0 } else { config.t_end / steps as f64 };
    let limit = BLOWUP_DEPTH_FACTOR * params.depth();

    let mut snapshots = vec![WaveField::new(grid, dynamics.elevation(&y).to_vec(), t0)?];
    let mut invariants = vec![sample(&y, t0)?];
    let mut energies = Vec::new();
    if let Some(e) = energy(&y) {
        energies.push((t0, e));
    }
    observer.observe(t0, dynamics.elevation(&y));

    let mut t = t0;
    for step in 1..=steps {
        y = rk4_step(dynamics, &y, t, dt, limit)?;
        t = t0 + step as f64 * dt;
        observer.observe(t, dynamics.elevation(&y));
        let last = step == steps;
        if last || (config.snapshot_every > 0 && step % config.snapshot_every == 0) {
            snapshots.push(WaveField::new(grid, dynamics.elevation(&y).to_vec(), t)?);
        }
        if last || (config.invariants_every > 0 && step % config.invariants_every == 0) {
            invariants.push(sample(&y, t)?);
            if let Some(e) = energy(&y) {
                energies.push((t, e));
            }
        }
    }

    let final_field = WaveField::new(grid, dynamics.elevation(&y).to_vec(), t)?;
    Ok((
        Trajectory {
            snapshots,
            invariants,
            final_field,
            final_rate: None,
            energy: energies,
            steps,
            filter: None,
        },
        y,
    ))
}

/// Conserved energy of the Boussinesq system,
/// ∫ ½u² + gH(½h² + h³/2H − (H²/6)h_x²) dx with u_x = h_t.
///
/// The mean of h_t is discarded (it only shifts the total mass).
pub fn boussinesq_energy(state: &BoussinesqState, params: &PhysicalParams, ops: &DiffOperator) -> f64 {
    boussinesq_energy_values(state.h.h(), &state.h_t, params, ops)
}

fn boussinesq_energy_values(h: &[f64], ht: &[f64], params: &PhysicalParams, ops: &DiffOperator) -> f64 {
    let depth = params.depth();
    let c2 = params.g() * depth;
    let u = ops.antiderivative(ht);
    let hx = ops.derivative(h, 1);
    let density: Vec<f64> = (0..h.len())
        .map(|j| {
            0.5 * u[j] * u[j]
                + c2 * (0.5 * h[j] * h[j] + 0.5 * h[j].powi(3) / depth
                    - depth * depth / 6.0 * hx[j] * hx[j])
        })
        .collect();
    ops.grid().integrate(&density)
}
