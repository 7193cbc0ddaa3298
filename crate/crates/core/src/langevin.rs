//! Single-trajectory integration of the noisy, swept-bias phase equation
//!
//! ```text
//! φ̈ + β φ̇ + sin φ = v τ + i_n(τ) + i_s(τ),   ⟨i_n(τ) i_n(τ')⟩ = D δ(τ − τ')
//! ```
//!
//! The integrator is a discrete-gradient midpoint scheme: the Josephson
//! force is replaced by the difference quotient of `1 − cos φ` across the
//! step and friction acts on the mean velocity. In the absence of drive and
//! noise the discrete energy `φ̇²/2 + 1 − cos φ` then decreases by exactly
//! `β Δτ φ̄̇²` per step. White noise enters as a Gaussian velocity kick of
//! standard deviation `√(D Δτ)` (an acceleration impulse of standard
//! deviation `√(D/Δτ)`).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{JtdError, Result};
use crate::rng::NoiseStream;

/// How the zero-voltage → voltage transition is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EscapeCriterion {
    /// `φ > phi_esc`.
    #[default]
    FixedPhase,
    /// `φ` exceeds the instantaneous barrier top `π − arcsin(i_b)`.
    BarrierTop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JunctionConfig {
    /// Dimensionless damping `1/(R C ω_J)`.
    pub beta: f64,
    /// Two-sided white-noise strength `D = 2β k_B T / E_J0`.
    pub noise_intensity: f64,
    pub phi0: f64,
    pub phi_dot0: f64,
    pub dt: f64,
    pub phi_esc: f64,
    /// Ramp cap; trajectories still trapped when `v τ` exceeds it are reported
    /// as unswitched.
    pub i_b_max: f64,
    pub escape: EscapeCriterion,
    /// Overrides the step guard derived from the ramp cap. Required when the
    /// bias does not ramp (`v = 0`).
    pub max_steps: Option<u64>,
}

impl Default for JunctionConfig {
    fn default() -> Self {
        Self {
            beta: 1e-4,
            noise_intensity: 1e-7,
            phi0: 0.1,
            phi_dot0: 0.0,
            dt: 0.02,
            phi_esc: FRAC_PI_2,
            i_b_max: 1.05,
            escape: EscapeCriterion::FixedPhase,
            max_steps: None,
        }
    }
}

impl JunctionConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("beta", self.beta),
            ("noise_intensity", self.noise_intensity),
            ("phi0", self.phi0),
            ("phi_dot0", self.phi_dot0),
            ("dt", self.dt),
            ("phi_esc", self.phi_esc),
            ("i_b_max", self.i_b_max),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(JtdError::invalid(name, format!("{value} is not finite")));
            }
        }
        if self.beta <= 0.0 {
            return Err(JtdError::invalid("beta", "must be > 0"));
        }
        if self.dt <= 0.0 {
            return Err(JtdError::invalid("dt", "must be > 0"));
        }
        if self.noise_intensity < 0.0 {
            return Err(JtdError::invalid("noise_intensity", "must be >= 0"));
        }
        if self.phi_esc <= self.phi0 {
            return Err(JtdError::invalid("phi_esc", "must exceed phi0"));
        }
        if !(self.i_b_max > 0.0 && self.i_b_max <= 1.2) {
            return Err(JtdError::invalid("i_b_max", "must lie in (0, 1.2]"));
        }
        if self.max_steps == Some(0) {
            return Err(JtdError::invalid("max_steps", "must be >= 1"));
        }
        Ok(())
    }

    pub fn noiseless(mut self) -> Self {
        self.noise_intensity = 0.0;
        self
    }
}

/// Microwave current injected on top of the bias ramp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Signal {
    #[default]
    None,
    /// `i_mw sin(ω τ)`.
    Cw { i_mw: f64, omega_mw: f64 },
    /// Gaussian-enveloped carrier carrying `n_ph` photons:
    /// `√n_ph i_ph exp(−((τ−τ_d)/τ_ph)²/2) cos(ω_ph (τ−τ_d))`.
    Pulse {
        n_ph: f64,
        i_ph: f64,
        omega_ph: f64,
        tau_ph: f64,
        tau_d: f64,
    },
}

/// Envelope exponent beyond which the pulse is treated as exactly zero.
const PULSE_CUTOFF_SIGMAS: f64 = 40.0;

impl Signal {
    #[inline]
    pub fn current(&self, tau: f64) -> f64 {
        match *self {
            Signal::None => 0.0,
            Signal::Cw { i_mw, omega_mw } => i_mw * (omega_mw * tau).sin(),
            Signal::Pulse {
                n_ph,
                i_ph,
                omega_ph,
                tau_ph,
                tau_d,
            } => {
                let s = (tau - tau_d) / tau_ph;
                if s.abs() > PULSE_CUTOFF_SIGMAS {
                    return 0.0;
                }
                n_ph.sqrt() * i_ph * (-0.5 * s * s).exp() * (omega_ph * (tau - tau_d)).cos()
            }
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Signal::None)
    }

    /// Same waveform with its strength replaced (amplitude for CW, photon
    /// number for pulses).
    pub fn with_strength(&self, strength: f64) -> Signal {
        match *self {
            Signal::None => Signal::None,
            Signal::Cw { omega_mw, .. } => Signal::Cw {
                i_mw: strength,
                omega_mw,
            },
            Signal::Pulse {
                i_ph,
                omega_ph,
                tau_ph,
                tau_d,
                ..
            } => Signal::Pulse {
                n_ph: strength,
                i_ph,
                omega_ph,
                tau_ph,
                tau_d,
            },
        }
    }

    pub fn with_frequency(&self, omega: f64) -> Signal {
        match *self {
            Signal::None => Signal::None,
            Signal::Cw { i_mw, .. } => Signal::Cw {
                i_mw,
                omega_mw: omega,
            },
            Signal::Pulse {
                n_ph,
                i_ph,
                tau_ph,
                tau_d,
                ..
            } => Signal::Pulse {
                n_ph,
                i_ph,
                omega_ph: omega,
                tau_ph,
                tau_d,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Signal::None => Ok(()),
            Signal::Cw { i_mw, omega_mw } => {
                if !i_mw.is_finite() || !omega_mw.is_finite() {
                    return Err(JtdError::invalid("signal", "cw parameters must be finite"));
                }
                Ok(())
            }
            Signal::Pulse {
                n_ph,
                i_ph,
                omega_ph,
                tau_ph,
                tau_d,
            } => {
                if [n_ph, i_ph, omega_ph, tau_ph, tau_d]
                    .iter()
                    .any(|x| !x.is_finite())
                {
                    return Err(JtdError::invalid("signal", "pulse parameters must be finite"));
                }
                if n_ph < 0.0 {
                    return Err(JtdError::invalid("n_ph", "must be >= 0"));
                }
                if tau_ph <= 0.0 {
                    return Err(JtdError::invalid("tau_ph", "must be > 0"));
                }
                Ok(())
            }
        }
    }
}

/// Linear bias ramp `i_b = v τ` plus an optional signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub v: f64,
    #[serde(default)]
    pub signal: Signal,
}

impl DriveSpec {
    pub fn new(v: f64, signal: Signal) -> Self {
        Self { v, signal }
    }

    /// Ramp with sweep-rate parameter `κ = v/β`.
    pub fn from_kappa(kappa: f64, beta: f64, signal: Signal) -> Self {
        Self {
            v: kappa * beta,
            signal,
        }
    }

    pub fn kappa(&self, beta: f64) -> f64 {
        self.v / beta
    }

    pub fn validate(&self) -> Result<()> {
        if !self.v.is_finite() || self.v < 0.0 {
            return Err(JtdError::invalid("v", "must be finite and >= 0"));
        }
        self.signal.validate()
    }
}

/// Outcome of one ramp cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchingEvent {
    pub switched: bool,
    /// Bias `v τ` at the end of the first step whose phase crossed the
    /// escape threshold.
    pub i_sw: Option<f64>,
    pub tau_sw: Option<f64>,
    pub steps: u64,
}

/// Step guard: explicit `max_steps`, otherwise enough steps for the ramp to
/// pass `i_b_max`.
pub fn step_limit(config: &JunctionConfig, drive: &DriveSpec) -> Result<u64> {
    if let Some(n) = config.max_steps {
        return Ok(n);
    }
    if drive.v <= 0.0 {
        return Err(JtdError::invalid(
            "max_steps",
            "required when the sweep rate v is zero",
        ));
    }
    let n = (config.i_b_max / (drive.v * config.dt)).ceil();
    if n > u64::MAX as f64 {
        return Err(JtdError::invalid("v", "ramp would need more than u64::MAX steps"));
    }
    Ok(n as u64 + 1)
}

/// Increment size above which the series below are abandoned for libm.
const SERIES_LIMIT: f64 = 0.05;

/// `(1 − cos x)/x` and `sin x / x` by truncated Taylor series; truncation
/// error is below 2e-16 for `|x| < SERIES_LIMIT`.
#[inline(always)]
fn rotation_quotients(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let one_minus_cos =
        x * (1.0 / 2.0 - x2 * (1.0 / 24.0 - x2 * (1.0 / 720.0 - x2 * (1.0 / 40_320.0))));
    let sinc = 1.0 - x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5_040.0)));
    (one_minus_cos, sinc)
}

/// Constants of the implicit step for a given `(β, Δτ)`.
#[derive(Debug, Clone, Copy)]
pub struct StepCoefficients {
    dt: f64,
    inv_dt: f64,
    /// `Δτ / (2 + β Δτ)`
    gain: f64,
}

impl StepCoefficients {
    pub fn new(beta: f64, dt: f64) -> Self {
        Self {
            dt,
            inv_dt: 1.0 / dt,
            gain: dt / (2.0 + beta * dt),
        }
    }
}

/// Phase-space state plus the bookkeeping needed to advance it.
///
/// `sin φ` and `cos φ` are carried along by exact-angle rotations and
/// re-evaluated from `φ` every `RESYNC_INTERVAL` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub phi: f64,
    pub phi_dot: f64,
    sin_phi: f64,
    cos_phi: f64,
    since_resync: u32,
}

const RESYNC_INTERVAL: u32 = 1024;

impl PhaseState {
    pub fn new(phi: f64, phi_dot: f64) -> Self {
        let (sin_phi, cos_phi) = phi.sin_cos();
        Self {
            phi,
            phi_dot,
            sin_phi,
            cos_phi,
            since_resync: 0,
        }
    }

    /// `φ̇²/2 + 1 − cos φ`.
    pub fn energy(&self) -> f64 {
        0.5 * self.phi_dot * self.phi_dot + 1.0 - self.phi.cos()
    }

    /// Advances by one step under external current `force` (taken at the
    /// step midpoint) and velocity kick `kick`.
    ///
    /// Solves `x = gain·(2φ̇ + Δτ(force − S(x)) + kick)` for the phase
    /// increment `x`, where `S(x)` is the mean of `sin` over `[φ, φ + x]`.
    #[inline]
    pub fn step(&mut self, k: &StepCoefficients, force: f64, kick: f64) {
        let dt = k.dt;
        let base = 2.0 * self.phi_dot + dt * (force - self.sin_phi) + kick;
        // Linearised predictor, S(x) ≈ sin φ + x cos φ / 2; first-order
        // expansion of its denominator suffices since the sweep fixes the rest.
        let x0 = k.gain * base * (1.0 - 0.5 * dt * k.gain * self.cos_phi);
        if x0.abs() < SERIES_LIMIT {
            let (a, b) = rotation_quotients(x0);
            let s_mean = self.cos_phi * a + self.sin_phi * b;
            let x = k.gain * (base + dt * (self.sin_phi - s_mean));
            if x.abs() < SERIES_LIMIT {
                // |x − x0| ~ 1e-8, so a first-order update of the quotients
                // is exact to rounding.
                let h = x - x0;
                let x0sq = x0 * x0;
                let a = a + h * (0.5 - 0.125 * x0sq);
                let b = b - h * x0 * (1.0 / 3.0 - x0sq / 30.0);
                let cos_x = 1.0 - x * a;
                let sin_x = x * b;
                let s = self.sin_phi * cos_x + self.cos_phi * sin_x;
                let c = self.cos_phi * cos_x - self.sin_phi * sin_x;
                self.advance(k, x, s, c);
                return;
            }
        }
        let base = base + dt * self.sin_phi;
        let mut x = x0;
        for _ in 0..4 {
            x = k.gain * (base - dt * exact_mean_sin(self.phi, x));
        }
        let (s, c) = (self.phi + x).sin_cos();
        self.advance(k, x, s, c);
    }

    #[inline(always)]
    fn advance(&mut self, k: &StepCoefficients, x: f64, sin_phi: f64, cos_phi: f64) {
        self.phi += x;
        self.phi_dot = 2.0 * x * k.inv_dt - self.phi_dot;
        self.sin_phi = sin_phi;
        self.cos_phi = cos_phi;
        self.since_resync += 1;
        if self.since_resync >= RESYNC_INTERVAL {
            let (s, c) = self.phi.sin_cos();
            self.sin_phi = s;
            self.cos_phi = c;
            self.since_resync = 0;
        }
    }
}

fn exact_mean_sin(phi: f64, x: f64) -> f64 {
    if x == 0.0 {
        phi.sin()
    } else {
        (phi.cos() - (phi + x).cos()) / x
    }
}

/// One ramp cycle in progress. [`integrate`] drives it to completion; the
/// ensemble runner interleaves several of these per worker.
#[derive(Debug, Clone)]
pub struct Trajectory {
    state: PhaseState,
    noise: NoiseStream,
    coeffs: StepCoefficients,
    signal: Signal,
    v: f64,
    kick_scale: f64,
    escape: EscapeCriterion,
    phi_esc: f64,
    i_b_max: f64,
    steps: u64,
    max_steps: u64,
}

impl Trajectory {
    pub fn new(config: &JunctionConfig, drive: &DriveSpec, noise: NoiseStream) -> Result<Self> {
        config.validate()?;
        drive.validate()?;
        Ok(Self::new_unchecked(config, drive, noise, step_limit(config, drive)?))
    }

    /// Skips validation; `max_steps` must come from [`step_limit`].
    pub(crate) fn new_unchecked(
        config: &JunctionConfig,
        drive: &DriveSpec,
        noise: NoiseStream,
        max_steps: u64,
    ) -> Self {
        Self {
            state: PhaseState::new(config.phi0, config.phi_dot0),
            noise,
            coeffs: StepCoefficients::new(config.beta, config.dt),
            signal: drive.signal.clone(),
            v: drive.v,
            kick_scale: (config.noise_intensity * config.dt).sqrt(),
            escape: config.escape,
            phi_esc: config.phi_esc,
            i_b_max: config.i_b_max,
            steps: 0,
            max_steps,
        }
    }

    pub fn state(&self) -> &PhaseState {
        &self.state
    }

    pub fn tau(&self) -> f64 {
        self.steps as f64 * self.coeffs.dt
    }

    pub fn bias(&self) -> f64 {
        self.v * self.tau()
    }

    /// Takes one step; returns the outcome once the cycle has ended.
    #[inline]
    pub fn advance(&mut self) -> Option<Result<SwitchingEvent>> {
        let n = self.steps;
        let dt = self.coeffs.dt;
        let tau_mid = (n as f64 + 0.5) * dt;
        let mut force = self.v * tau_mid;
        if !self.signal.is_none() {
            force += self.signal.current(tau_mid);
        }
        let kick = if self.kick_scale > 0.0 {
            self.kick_scale * self.noise.standard_normal()
        } else {
            0.0
        };
        self.state.step(&self.coeffs, force, kick);

        let steps = n + 1;
        self.steps = steps;
        let tau = steps as f64 * dt;
        let i_b = self.v * tau;
        if !self.state.phi.is_finite() || !self.state.phi_dot.is_finite() {
            return Some(Err(JtdError::NonFinite { step: steps }));
        }
        let threshold = match self.escape {
            EscapeCriterion::FixedPhase => self.phi_esc,
            EscapeCriterion::BarrierTop => PI - i_b.clamp(-1.0, 1.0).asin(),
        };
        if i_b > self.i_b_max || (steps >= self.max_steps && self.state.phi <= threshold) {
            return Some(Ok(SwitchingEvent {
                switched: false,
                i_sw: None,
                tau_sw: None,
                steps,
            }));
        }
        if self.state.phi > threshold {
            return Some(Ok(SwitchingEvent {
                switched: true,
                i_sw: Some(i_b),
                tau_sw: Some(tau),
                steps,
            }));
        }
        None
    }
}

/// Integrates one ramp cycle from `(phi0, phi_dot0)` at `τ = 0` until the
/// phase escapes, the bias passes `i_b_max`, or the step guard is reached.
/// Equal inputs and equal noise streams give bit-identical events.
pub fn integrate(
    config: &JunctionConfig,
    drive: &DriveSpec,
    noise: &mut NoiseStream,
) -> Result<SwitchingEvent> {
    let mut traj = Trajectory::new(config, drive, noise.clone())?;
    loop {
        if let Some(outcome) = traj.advance() {
            *noise = traj.noise;
            return outcome;
        }
    }
}

/// Per-step acceleration impulses `i_n` as seen by the integrator
/// (variance `D/Δτ`).
pub fn noise_impulses(noise_intensity: f64, dt: f64, noise: &mut NoiseStream, n: usize) -> Vec<f64> {
    let scale = (noise_intensity / dt).sqrt();
    (0..n).map(|_| scale * noise.standard_normal()).collect()
}
