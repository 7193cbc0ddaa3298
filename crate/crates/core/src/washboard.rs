//! Closed-form physics of the tilted washboard `U/E_J0 = 1 − cos φ − i_b φ`.
//!
//! Energies are in units of `E_J0`, rates in units of `ω_J`, temperatures as
//! `θ = k_B T / E_J0`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{JtdError, Result};

pub fn potential(phi: f64, i_b: f64) -> f64 {
    1.0 - phi.cos() - i_b * phi
}

fn check_bias(i_b: f64) -> Result<()> {
    if (0.0..=1.0).contains(&i_b) {
        Ok(())
    } else {
        Err(JtdError::Domain {
            what: "i_b",
            value: i_b,
            domain: "[0, 1]",
        })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(JtdError::Domain {
            what: "theta",
            value: theta,
            domain: "(0, inf)",
        })
    }
}

/// `ΔU/E_J0 = 2[√(1 − i_b²) − i_b arccos i_b]`.
pub fn barrier_height(i_b: f64) -> Result<f64> {
    check_bias(i_b)?;
    let du = 2.0 * ((1.0 - i_b * i_b).sqrt() - i_b * i_b.acos());
    Ok(du.max(0.0))
}

/// Well bottom, barrier top, and their energies at one bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierGeometry {
    pub i_b: f64,
    /// `arcsin i_b`
    pub phi_min: f64,
    /// `π − arcsin i_b`
    pub phi_max: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub delta_u: f64,
}

impl BarrierGeometry {
    pub fn at(i_b: f64) -> Result<Self> {
        let delta_u = barrier_height(i_b)?;
        let phi_min = i_b.asin();
        let phi_max = PI - phi_min;
        Ok(Self {
            i_b,
            phi_min,
            phi_max,
            u_min: potential(phi_min, i_b),
            u_max: potential(phi_max, i_b),
            delta_u,
        })
    }
}

/// `ω_p/ω_J = (1 − i_b²)^{1/4}`.
pub fn omega_ratio(i_b: f64) -> Result<f64> {
    check_bias(i_b)?;
    Ok((1.0 - i_b * i_b).max(0.0).powf(0.25))
}

/// Parameters entering the escape rates at one bias point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeRateParams {
    pub theta: f64,
    pub a_th: f64,
    pub quality_q: f64,
    pub omega_ratio: f64,
}

impl EscapeRateParams {
    pub fn at(i_b: f64, theta: f64, a_th: f64, quality_q: f64) -> Result<Self> {
        check_theta(theta)?;
        if !(a_th > 0.0 && a_th <= 1.0) {
            return Err(JtdError::Domain {
                what: "a_th",
                value: a_th,
                domain: "(0, 1]",
            });
        }
        Ok(Self {
            theta,
            a_th,
            quality_q,
            omega_ratio: omega_ratio(i_b)?,
        })
    }
}

/// Thermal-activation rate `Γ/ω_J = (ω_p/2πω_J) a_th exp(−ΔU/θ)`.
pub fn thermal_rate(i_b: f64, theta: f64, a_th: f64) -> Result<f64> {
    let p = EscapeRateParams::at(i_b, theta, a_th, f64::INFINITY)?;
    let du = barrier_height(i_b)?;
    Ok(p.omega_ratio / TAU * a_th * (-du / theta).exp())
}

/// Tunnelling prefactor `a_q = √(864π ΔU/ħω_p)`.
pub fn quantum_prefactor(delta_u_over_hbar_omega: f64) -> f64 {
    (864.0 * PI * delta_u_over_hbar_omega.max(0.0)).sqrt()
}

/// Tunnelling rate `Γ/ω_J = (ω_p/2πω_J) a_q exp[−(ΔU/θ)(1 + 0.87/Q)]`, with
/// `hbar_omega_over_ej = ħω_p/E_J0` at this bias.
pub fn quantum_rate(i_b: f64, theta: f64, quality_q: f64, hbar_omega_over_ej: f64) -> Result<f64> {
    check_bias(i_b)?;
    check_theta(theta)?;
    if !(quality_q > 0.0) {
        return Err(JtdError::Domain {
            what: "quality_q",
            value: quality_q,
            domain: "(0, inf]",
        });
    }
    if !(hbar_omega_over_ej > 0.0) {
        return Err(JtdError::Domain {
            what: "hbar_omega_over_ej",
            value: hbar_omega_over_ej,
            domain: "(0, inf)",
        });
    }
    let du = barrier_height(i_b)?;
    let a_q = quantum_prefactor(du / hbar_omega_over_ej);
    let w = omega_ratio(i_b)?;
    Ok(w / TAU * a_q * (-(du / theta) * (1.0 + 0.87 / quality_q)).exp())
}

/// Default quadrature grid: 4096 equally spaced biases on `[0, 1]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.0, 1.0, 4096)
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Switching-current density for a linear ramp of rate `v`,
///
/// ```text
/// P(i) = (Γ(i)/v) exp(−(1/v) ∫₀^i Γ(i') di'),
/// ```
///
/// evaluated on `grid`, with the survival integral by cumulative trapezoid
/// from the first grid point.
///
/// The pointwise values are then rescaled so that their trapezoid integral
/// equals `1 − exp(−∫Γ/v)`, the exact switching probability for the
/// piecewise-linear rate. This removes the quadrature overshoot of a steep
/// density and keeps the mass at or below one. Survival beyond the grid is
/// left out, not folded back in.
pub fn analytic_scd<F>(rate_fn: F, v: f64, grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    if !(v > 0.0 && v.is_finite()) {
        return Err(JtdError::invalid("v", "sweep rate must be positive"));
    }
    if grid.is_empty() {
        return Err(JtdError::Empty("grid"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(JtdError::invalid("grid", "must be strictly increasing"));
    }
    if grid[0] < 0.0 || grid[grid.len() - 1] > 1.0 {
        return Err(JtdError::invalid("grid", "must lie within [0, 1]"));
    }
    let rates: Vec<f64> = grid.iter().map(|&i| rate_fn(i)).collect();
    if let Some(&bad) = rates.iter().find(|r| !(**r >= 0.0)) {
        return Err(JtdError::invalid(
            "rate_fn",
            format!("rates must be non-negative, got {bad}"),
        ));
    }
    let mut cumulative = 0.0;
    let mut density = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        if k > 0 {
            cumulative += 0.5 * (rates[k] + rates[k - 1]) * (grid[k] - grid[k - 1]);
        }
        density.push(rates[k] / v * (-cumulative / v).exp());
    }
    let quadrature = cumulative_trapezoid(grid, &density)
        .last()
        .copied()
        .unwrap_or(0.0);
    let switched = -(-cumulative / v).exp_m1();
    if quadrature > 0.0 {
        let scale = switched / quadrature;
        density.iter_mut().for_each(|p| *p *= scale);
    }
    Ok(density)
}

/// Cumulative distribution of a density on a grid, by trapezoid.
pub fn cumulative_trapezoid(grid: &[f64], density: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        if k > 0 {
            acc += 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
        }
        out.push(acc);
    }
    out
}

/// Thermal-activation SCD for a noise intensity `D = 2βθ`, the form used to
/// check equilibrium ensembles.
pub fn thermal_scd(noise_intensity: f64, beta: f64, v: f64, a_th: f64, grid: &[f64]) -> Result<Vec<f64>> {
    let theta = noise_intensity / (2.0 * beta);
    check_theta(theta)?;
    // Validate once so the closure can stay infallible.
    EscapeRateParams::at(0.0, theta, a_th, f64::INFINITY)?;
    analytic_scd(
        |i| thermal_rate(i.clamp(0.0, 1.0), theta, a_th).unwrap_or(0.0),
        v,
        grid,
    )
}
