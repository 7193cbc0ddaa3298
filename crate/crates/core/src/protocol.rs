//! Detection experiments: signal-absent vs signal-present ensemble pairs,
//! parameter sweeps, and detector figures of merit.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::discriminator::{compare, Comparison, RocResult};
use crate::ensemble::{run_ensemble, EnsembleSpec, Scd};
use crate::error::{JtdError, Result};
use crate::langevin::{DriveSpec, JunctionConfig, Signal};
use crate::rng::tagged_seed;

pub const DEFAULT_AUC_THRESHOLD: f64 = 0.7;
/// Max abs residual of the linear fit that delimits the dynamic range.
pub const DEFAULT_LINEARITY_TOLERANCE: f64 = 0.02;
/// Single-photon pulse amplitude in units of `I_c`.
pub const DEFAULT_PHOTON_AMPLITUDE: f64 = 0.005;
/// Pulse width in units of `1/ω_J` (5 ns at the reference junction).
pub const DEFAULT_PULSE_WIDTH: f64 = 356.0;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Equilibrium,
    Critical,
    Nonequilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Adiabaticity {
    /// `ε = v/β`, the ratio of the damping time to the ramp time.
    pub epsilon: f64,
    pub regime: Regime,
}

pub fn adiabaticity(v: f64, beta: f64) -> Result<Adiabaticity> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(JtdError::invalid("v", "must be > 0"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(JtdError::invalid("beta", "must be > 0"));
    }
    let epsilon = v / beta;
    let regime = if epsilon < 1.0 {
        Regime::Equilibrium
    } else if epsilon == 1.0 {
        Regime::Critical
    } else {
        Regime::Nonequilibrium
    };
    Ok(Adiabaticity { epsilon, regime })
}

/// Pulse arriving halfway through the ramp.
pub fn photon_pulse(n_ph: f64, v: f64) -> Signal {
    Signal::Pulse {
        n_ph,
        i_ph: DEFAULT_PHOTON_AMPLITUDE,
        omega_ph: 1.0,
        tau_ph: DEFAULT_PULSE_WIDTH,
        tau_d: 0.5 / v,
    }
}

/// One detector operating point: everything needed to build the P0/P1 pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionSpec {
    pub n_runs: u64,
    pub master_seed: u64,
    pub config: JunctionConfig,
    /// Sweep-rate parameter `κ = v/β`.
    pub kappa: f64,
    pub signal: Signal,
}

impl DetectionSpec {
    pub fn v(&self) -> f64 {
        self.kappa * self.config.beta
    }

    /// Signal-absent ensemble; seeded independently of the signal-present one.
    pub fn background(&self) -> EnsembleSpec {
        EnsembleSpec {
            n_runs: self.n_runs,
            master_seed: tagged_seed(self.master_seed, "p0"),
            config: self.config.clone(),
            drive: DriveSpec::new(self.v(), Signal::None),
        }
    }

    pub fn with_signal(&self) -> EnsembleSpec {
        EnsembleSpec {
            n_runs: self.n_runs,
            master_seed: tagged_seed(self.master_seed, "p1"),
            config: self.config.clone(),
            drive: DriveSpec::new(self.v(), self.signal.clone()),
        }
    }

    pub fn pair(&self) -> (EnsembleSpec, EnsembleSpec) {
        (self.background(), self.with_signal())
    }
}

/// Memoises ensembles by their full specification. Sweeps use it to run a
/// shared P0 once.
#[derive(Debug, Default)]
pub struct ScdCache {
    entries: Mutex<Vec<(EnsembleSpec, Arc<Scd>)>>,
}

impl ScdCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_run(&self, spec: &EnsembleSpec) -> Result<Arc<Scd>> {
        if let Some(hit) = self.lookup(spec) {
            return Ok(hit);
        }
        let scd = Arc::new(run_ensemble(spec)?);
        let mut entries = self.entries.lock().expect("cache lock poisoned");
        if let Some((_, existing)) = entries.iter().find(|(s, _)| s == spec) {
            return Ok(existing.clone());
        }
        entries.push((spec.clone(), scd.clone()));
        Ok(scd)
    }

    /// Stores an ensemble computed elsewhere, e.g. one that was timed.
    pub fn insert(&self, spec: EnsembleSpec, scd: Scd) -> Arc<Scd> {
        let scd = Arc::new(scd);
        let mut entries = self.entries.lock().expect("cache lock poisoned");
        entries.retain(|(s, _)| *s != spec);
        entries.push((spec, scd.clone()));
        scd
    }

    fn lookup(&self, spec: &EnsembleSpec) -> Option<Arc<Scd>> {
        let entries = self.entries.lock().expect("cache lock poisoned");
        entries
            .iter()
            .find(|(s, _)| s == spec)
            .map(|(_, scd)| scd.clone())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutcome {
    pub scd0: Arc<Scd>,
    pub scd1: Arc<Scd>,
    pub roc: RocResult,
    pub comparison: Comparison,
    pub auc_threshold: f64,
    /// `auc* ≥ auc_threshold`.
    pub detectable: bool,
}

fn check_pair(p0: &EnsembleSpec, p1: &EnsembleSpec) -> Result<()> {
    if p0.config != p1.config {
        return Err(JtdError::invalid(
            "config",
            "P0 and P1 must share the junction configuration",
        ));
    }
    if p0.drive.v != p1.drive.v {
        return Err(JtdError::invalid("v", "P0 and P1 must share the bias ramp"));
    }
    if !p0.drive.signal.is_none() {
        return Err(JtdError::invalid("signal", "P0 must not carry a signal"));
    }
    if p0.master_seed == p1.master_seed {
        return Err(JtdError::invalid(
            "master_seed",
            "P0 and P1 need independent noise; seeds must differ",
        ));
    }
    Ok(())
}

fn check_threshold(auc_threshold: f64) -> Result<()> {
    if (0.5..=1.0).contains(&auc_threshold) {
        Ok(())
    } else {
        Err(JtdError::invalid("auc_threshold", "must lie in [0.5, 1]"))
    }
}

/// Runs (or reuses) both ensembles and compares their raw samples.
pub fn detect_with_cache(
    p0: &EnsembleSpec,
    p1: &EnsembleSpec,
    auc_threshold: f64,
    cache: &ScdCache,
) -> Result<DetectionOutcome> {
    check_pair(p0, p1)?;
    check_threshold(auc_threshold)?;
    let scd0 = cache.get_or_run(p0)?;
    let scd1 = cache.get_or_run(p1)?;
    if scd0.samples.is_empty() || scd1.samples.is_empty() {
        return Err(JtdError::Empty("switched samples"));
    }
    let (roc, comparison) = compare(&scd0.samples, &scd1.samples)?;
    Ok(DetectionOutcome {
        detectable: comparison.auc_star >= auc_threshold,
        scd0,
        scd1,
        roc,
        comparison,
        auc_threshold,
    })
}

pub fn detect(p0: &EnsembleSpec, p1: &EnsembleSpec, auc_threshold: f64) -> Result<DetectionOutcome> {
    detect_with_cache(p0, p1, auc_threshold, &ScdCache::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub auc_raw: f64,
    pub auc_star: f64,
    pub d_kc: Option<f64>,
}

impl SweepPoint {
    fn from_comparison(value: f64, c: &Comparison) -> Self {
        Self {
            value,
            auc_raw: c.auc,
            auc_star: c.auc_star,
            d_kc: c.d_kc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    /// Name of the swept quantity (`kappa`, `phi0`, `strength`, `omega`).
    pub parameter: String,
    pub points: Vec<SweepPoint>,
    pub auc_threshold: f64,
}

impl SweepCurve {
    /// Grid point with the largest `auc*`; the first one wins ties.
    pub fn argmax(&self) -> Option<SweepPoint> {
        self.points.iter().copied().fold(None, |best, p| match best {
            Some(b) if b.auc_star >= p.auc_star => Some(b),
            _ => Some(p),
        })
    }
}

fn check_grid(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(JtdError::Empty(name));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(JtdError::invalid(name, "grid values must be finite"));
    }
    Ok(())
}

fn sweep<F>(
    base: &DetectionSpec,
    parameter: &str,
    grid: &[f64],
    auc_threshold: f64,
    cache: &ScdCache,
    mut at: F,
) -> Result<SweepCurve>
where
    F: FnMut(&DetectionSpec, f64) -> DetectionSpec,
{
    check_threshold(auc_threshold)?;
    let mut points = Vec::with_capacity(grid.len());
    for &value in grid {
        let spec = at(base, value);
        let (p0, p1) = spec.pair();
        let outcome = detect_with_cache(&p0, &p1, auc_threshold, cache)?;
        points.push(SweepPoint::from_comparison(value, &outcome.comparison));
    }
    Ok(SweepCurve {
        parameter: parameter.to_string(),
        points,
        auc_threshold,
    })
}

pub fn sweep_kappa(
    base: &DetectionSpec,
    kappas: &[f64],
    auc_threshold: f64,
    cache: &ScdCache,
) -> Result<SweepCurve> {
    check_grid("kappa grid", kappas)?;
    if kappas.iter().any(|&k| k <= 0.0) {
        return Err(JtdError::invalid("kappa grid", "values must be > 0"));
    }
    sweep(base, "kappa", kappas, auc_threshold, cache, |b, kappa| {
        let mut s = b.clone();
        s.kappa = kappa;
        retime_pulse(&mut s);
        s
    })
}

pub fn sweep_phi0(
    base: &DetectionSpec,
    phi0s: &[f64],
    auc_threshold: f64,
    cache: &ScdCache,
) -> Result<SweepCurve> {
    check_grid("phi0 grid", phi0s)?;
    if phi0s.iter().any(|&p| p >= base.config.phi_esc) {
        return Err(JtdError::invalid("phi0 grid", "values must lie below phi_esc"));
    }
    sweep(base, "phi0", phi0s, auc_threshold, cache, |b, phi0| {
        let mut s = b.clone();
        s.config.phi0 = phi0;
        s
    })
}

/// Amplitude (CW) or photon-number (pulse) sweep with the detection
/// sensitivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSweep {
    pub curve: SweepCurve,
    /// Smallest grid strength with `auc* ≥ threshold`.
    pub min_detectable: Option<f64>,
    /// Linear interpolation of the first upward threshold crossing.
    pub crossing: Option<f64>,
}

pub fn sweep_amplitude(
    base: &DetectionSpec,
    strengths: &[f64],
    auc_threshold: f64,
    cache: &ScdCache,
) -> Result<AmplitudeSweep> {
    check_grid("strength grid", strengths)?;
    if strengths.iter().any(|&s| s < 0.0) {
        return Err(JtdError::invalid("strength grid", "values must be >= 0"));
    }
    if strengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(JtdError::invalid("strength grid", "must be ascending"));
    }
    if base.signal.is_none() {
        return Err(JtdError::invalid("signal", "an amplitude sweep needs a waveform"));
    }
    let curve = sweep(base, "strength", strengths, auc_threshold, cache, |b, s| {
        let mut spec = b.clone();
        spec.signal = b.signal.with_strength(s);
        spec
    })?;
    let (min_detectable, crossing) = first_crossing(&curve.points, auc_threshold);
    Ok(AmplitudeSweep {
        curve,
        min_detectable,
        crossing,
    })
}

fn first_crossing(points: &[SweepPoint], threshold: f64) -> (Option<f64>, Option<f64>) {
    let Some(k) = points.iter().position(|p| p.auc_star >= threshold) else {
        return (None, None);
    };
    let hit = points[k];
    if k == 0 {
        return (Some(hit.value), Some(hit.value));
    }
    let prev = points[k - 1];
    let frac = (threshold - prev.auc_star) / (hit.auc_star - prev.auc_star);
    (
        Some(hit.value),
        Some(prev.value + frac * (hit.value - prev.value)),
    )
}

/// Nominal operating band `Δω = 1/Q = β` around the plasma frequency.
pub fn nominal_bandwidth(beta: f64) -> f64 {
    beta
}

/// `Q = ω_J R C = 1/β`.
pub fn quality_factor(beta: f64) -> f64 {
    1.0 / beta
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthScan {
    pub curve: SweepCurve,
    pub band: f64,
    /// `max − min` of `auc*` over grid points inside `1 ± band/2`.
    pub in_band_variation: f64,
    pub all_in_band_detectable: bool,
}

pub fn bandwidth_scan(
    base: &DetectionSpec,
    omegas: &[f64],
    auc_threshold: f64,
    cache: &ScdCache,
) -> Result<BandwidthScan> {
    check_grid("frequency grid", omegas)?;
    if omegas.iter().any(|&w| w <= 0.0) {
        return Err(JtdError::invalid("frequency grid", "values must be > 0"));
    }
    if base.signal.is_none() {
        return Err(JtdError::invalid("signal", "a bandwidth scan needs a waveform"));
    }
    let band = nominal_bandwidth(base.config.beta);
    let curve = sweep(base, "omega", omegas, auc_threshold, cache, |b, w| {
        let mut spec = b.clone();
        spec.signal = b.signal.with_frequency(w);
        spec
    })?;
    // Half-band edge with a little slack for grids built as 1 ± β/2.
    let half = 0.5 * band * (1.0 + 1e-9);
    let in_band: Vec<f64> = curve
        .points
        .iter()
        .filter(|p| (p.value - 1.0).abs() <= half)
        .map(|p| p.auc_star)
        .collect();
    let (lo, hi) = in_band
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| {
            (lo.min(a), hi.max(a))
        });
    Ok(BandwidthScan {
        in_band_variation: if in_band.is_empty() { 0.0 } else { hi - lo },
        all_in_band_detectable: !in_band.is_empty() && lo >= auc_threshold,
        band,
        curve,
    })
}

/// Keeps a pulse arriving at mid-ramp when `κ` changes.
fn retime_pulse(spec: &mut DetectionSpec) {
    let v = spec.v();
    if let Signal::Pulse { tau_d, .. } = &mut spec.signal {
        *tau_d = 0.5 / v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicRange {
    pub n_min: f64,
    pub n_max: f64,
}

/// Ordinary least squares; returns the max abs residual.
fn linear_fit_max_residual(points: &[SweepPoint]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 3 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.value).sum::<f64>() / n;
    let my = points.iter().map(|p| p.auc_star).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.value - mx).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.value - mx) * (p.auc_star - my))
        .sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    points
        .iter()
        .map(|p| (p.auc_star - (my + slope * (p.value - mx))).abs())
        .fold(0.0, f64::max)
}

/// Photon-number window over which the detector responds linearly.
///
/// `n_min` is the smallest strength reaching the threshold; `n_max` is the
/// last point of the longest initial run of the curve that a straight line
/// fits with every residual below `tolerance`.
pub fn dynamic_range(curve: &SweepCurve, auc_threshold: f64, tolerance: f64) -> Result<DynamicRange> {
    if curve.points.is_empty() {
        return Err(JtdError::Empty("curve"));
    }
    if !(tolerance > 0.0) {
        return Err(JtdError::invalid("tolerance", "must be > 0"));
    }
    let mut pts = curve.points.clone();
    pts.sort_by(|a, b| a.value.total_cmp(&b.value));
    let n_min = pts
        .iter()
        .find(|p| p.auc_star >= auc_threshold)
        .map(|p| p.value)
        .ok_or(JtdError::NeverDetectable {
            threshold: auc_threshold,
        })?;
    let mut end = 1;
    while end < pts.len() && linear_fit_max_residual(&pts[..=end]) < tolerance {
        end += 1;
    }
    Ok(DynamicRange {
        n_min,
        n_max: pts[end - 1].value,
    })
}

/// Minimum detectable CW power `i_mw² I_c² R_mw / (2χ)` in watts.
pub fn min_power(i_mw: f64, i_c: f64, r_mw: f64, chi: f64) -> Result<f64> {
    for (name, x) in [("i_mw", i_mw), ("i_c", i_c), ("r_mw", r_mw)] {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(JtdError::invalid(name, "must be finite and >= 0"));
        }
    }
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(JtdError::invalid("chi", "must be > 0"));
    }
    Ok(i_mw * i_mw * i_c * i_c * r_mw / (2.0 * chi))
}

/// External field used to preset the initial phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxModulation {
    /// Flux density, T.
    pub b0: f64,
    /// Effective magnetic thickness `d + 2λ`, m.
    pub l: f64,
    /// Junction width, m.
    pub big_l: f64,
    /// Phase without the field, rad.
    pub phi0_base: f64,
}

impl FluxModulation {
    pub fn from_layers(b0: f64, barrier: f64, penetration_depth: f64, width: f64, phi0_base: f64) -> Self {
        Self {
            b0,
            l: barrier + 2.0 * penetration_depth,
            big_l: width,
            phi0_base,
        }
    }

    /// Phase shift per tesla, `2 e l L / ħ`.
    pub fn coefficient(&self) -> f64 {
        2.0 * ELEMENTARY_CHARGE * self.l * self.big_l / HBAR
    }
}

/// `φ₀ = φ̃₀ + 2 e l L B₀ / ħ`.
pub fn phi0_from_flux(m: &FluxModulation) -> Result<f64> {
    if !(m.l > 0.0 && m.big_l > 0.0) {
        return Err(JtdError::invalid("l", "junction dimensions must be > 0"));
    }
    Ok(m.phi0_base + m.coefficient() * m.b0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(value: f64, auc_star: f64) -> SweepPoint {
        SweepPoint {
            value,
            auc_raw: auc_star,
            auc_star,
            d_kc: None,
        }
    }

    fn curve(points: Vec<SweepPoint>) -> SweepCurve {
        SweepCurve {
            parameter: "strength".into(),
            points,
            auc_threshold: DEFAULT_AUC_THRESHOLD,
        }
    }

    #[test]
    fn regimes_from_table() {
        let a = adiabaticity(1e-5, 1e-4).unwrap();
        assert!((a.epsilon - 0.1).abs() < 1e-15);
        assert_eq!(a.regime, Regime::Equilibrium);
        let a = adiabaticity(1e-4, 1e-4).unwrap();
        assert_eq!((a.epsilon, a.regime), (1.0, Regime::Critical));
        let a = adiabaticity(5e-4, 1e-4).unwrap();
        assert!((a.epsilon - 5.0).abs() < 1e-12);
        assert_eq!(a.regime, Regime::Nonequilibrium);
        assert_eq!(
            adiabaticity(1.0000001e-4, 1e-4).unwrap().regime,
            Regime::Nonequilibrium
        );
        assert!(adiabaticity(0.0, 1e-4).is_err());
    }

    #[test]
    fn min_power_values() {
        let p = min_power(2.91e-4, 1.0, 100.0, 0.5).unwrap();
        assert!((p - 8.4681e-6).abs() < 1e-10);
        assert_eq!(min_power(0.0, 1.0, 100.0, 0.5).unwrap(), 0.0);
        let p = min_power(2.91e-4, 10e-9, 100.0, 0.5).unwrap();
        assert!((p - 8.4681e-22).abs() < 1e-26);
        assert!(min_power(1e-4, 1.0, 100.0, 0.0).is_err());
    }

    #[test]
    fn flux_phase_coefficient() {
        let m = FluxModulation::from_layers(1.0, 1.2e-9, 16e-9, 1.5e-6, 0.0);
        assert!((m.l - 33.2e-9).abs() < 1e-20);
        let k = phi0_from_flux(&m).unwrap();
        assert!((k - 151.0).abs() < 1.0, "coefficient {k}");
        let zero = FluxModulation { b0: 0.0, phi0_base: 0.3, ..m };
        assert_eq!(phi0_from_flux(&zero).unwrap(), 0.3);
        let small = FluxModulation { b0: 3.3e-4, ..m };
        assert!((phi0_from_flux(&small).unwrap() - 0.05).abs() < 1e-3);
        let bad = FluxModulation { l: 0.0, ..m };
        assert!(phi0_from_flux(&bad).is_err());
    }

    #[test]
    fn argmax_of_single_point() {
        let c = curve(vec![pt(3.0, 0.6)]);
        assert_eq!(c.argmax().unwrap().value, 3.0);
        let c = curve(vec![pt(1.0, 0.6), pt(2.0, 0.9), pt(3.0, 0.9)]);
        assert_eq!(c.argmax().unwrap().value, 2.0);
    }

    #[test]
    fn crossing_interpolates() {
        let pts = [pt(1.0, 0.5), pt(2.0, 0.6), pt(3.0, 0.8)];
        let (m, x) = first_crossing(&pts, 0.7);
        assert_eq!(m, Some(3.0));
        assert!((x.unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(first_crossing(&pts[..2], 0.7), (None, None));
    }

    #[test]
    fn flat_saturated_curve_spans_everything() {
        let c = curve((1..=25).map(|n| pt(n as f64, 1.0)).collect());
        let r = dynamic_range(&c, 0.7, DEFAULT_LINEARITY_TOLERANCE).unwrap();
        assert_eq!((r.n_min, r.n_max), (1.0, 25.0));
    }

    #[test]
    fn clipped_linear_curve() {
        let c = curve(
            (1..=25)
                .map(|n| pt(n as f64, (0.5 + 0.04 * n as f64).min(1.0)))
                .collect(),
        );
        // Clipping starts after N = 12. The last unclipped-looking point
        // departs by 0.02, but a least-squares fit including it spreads that
        // over the segment (max residual 0.02·(1 − h₁₃) ≈ 0.0145), so at the
        // default tolerance the segment runs one point further.
        let r = dynamic_range(&c, 0.7, DEFAULT_LINEARITY_TOLERANCE).unwrap();
        assert_eq!((r.n_min, r.n_max), (5.0, 13.0));
        let r = dynamic_range(&c, 0.7, 0.01).unwrap();
        assert_eq!(r.n_max, 12.0);
    }

    #[test]
    fn dynamic_range_needs_a_crossing() {
        let c = curve((1..=5).map(|n| pt(n as f64, 0.55)).collect());
        assert!(matches!(
            dynamic_range(&c, 0.7, 0.02),
            Err(JtdError::NeverDetectable { .. })
        ));
    }

    #[test]
    fn pair_checks() {
        let spec = DetectionSpec {
            n_runs: 4,
            master_seed: 1,
            config: JunctionConfig::default(),
            kappa: 5.0,
            signal: Signal::Cw {
                i_mw: 1e-3,
                omega_mw: 1.0,
            },
        };
        let (p0, p1) = spec.pair();
        assert_ne!(p0.master_seed, p1.master_seed);
        assert!(check_pair(&p0, &p1).is_ok());
        let mut same_seed = p1.clone();
        same_seed.master_seed = p0.master_seed;
        assert!(check_pair(&p0, &same_seed).is_err());
        let mut other = p1.clone();
        other.config.phi0 = 0.2;
        assert!(check_pair(&p0, &other).is_err());
        assert!(check_pair(&p1, &p0).is_err());
    }
}
