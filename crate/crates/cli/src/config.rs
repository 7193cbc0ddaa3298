//! TOML experiment files.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use jtd::langevin::{JunctionConfig, Signal};
use jtd::protocol::{
    DetectionSpec, FluxModulation, DEFAULT_AUC_THRESHOLD, DEFAULT_LINEARITY_TOLERANCE,
    DEFAULT_PHOTON_AMPLITUDE, DEFAULT_PULSE_WIDTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Trajectory,
    Scd,
    Detect,
    SweepKappa,
    SweepPhi0,
    SweepAmplitude,
    Bandwidth,
    Metrics,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Trajectory => "trajectory",
            Command::Scd => "scd",
            Command::Detect => "detect",
            Command::SweepKappa => "sweep-kappa",
            Command::SweepPhi0 => "sweep-phi0",
            Command::SweepAmplitude => "sweep-amplitude",
            Command::Bandwidth => "bandwidth",
            Command::Metrics => "metrics",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub plot: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: u64,
    #[serde(default = "default_threshold")]
    pub auc_threshold: f64,
    #[serde(default)]
    pub junction: JunctionConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub signal: SignalConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub trajectory: TrajectoryConfig,
    pub metrics: Option<MetricsConfig>,
    pub flux: Option<FluxConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_runs() -> u64 {
    10_000
}

fn default_threshold() -> f64 {
    DEFAULT_AUC_THRESHOLD
}

/// Exactly one of `kappa` and `v`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub kappa: Option<f64>,
    pub v: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    #[default]
    None,
    Cw {
        i_mw: f64,
        #[serde(default = "unit")]
        omega_mw: f64,
    },
    Pulse {
        #[serde(default = "unit")]
        n_ph: f64,
        #[serde(default = "photon_amplitude")]
        i_ph: f64,
        #[serde(default = "unit")]
        omega_ph: f64,
        #[serde(default = "pulse_width")]
        tau_ph: f64,
        /// Defaults to mid-ramp, `1/(2v)`.
        tau_d: Option<f64>,
    },
}

fn unit() -> f64 {
    1.0
}

fn photon_amplitude() -> f64 {
    DEFAULT_PHOTON_AMPLITUDE
}

fn pulse_width() -> f64 {
    DEFAULT_PULSE_WIDTH
}

/// Grid of a sweep: explicit `values`, or `start`/`stop`/`points`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    #[serde(default = "default_tolerance")]
    pub linearity_tolerance: f64,
    /// Also report the linear dynamic range (amplitude sweeps).
    #[serde(default)]
    pub dynamic_range: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            values: None,
            start: None,
            stop: None,
            points: None,
            linearity_tolerance: DEFAULT_LINEARITY_TOLERANCE,
            dynamic_range: false,
        }
    }
}

fn default_tolerance() -> f64 {
    DEFAULT_LINEARITY_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    /// Keep every n-th step in the trace.
    #[serde(default = "default_record_every")]
    pub record_every: u64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            record_every: default_record_every(),
        }
    }
}

fn default_record_every() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    pub i_mw: f64,
    /// Critical current in amperes; `1.0` reports power in units of `I_c²`.
    #[serde(default = "unit")]
    pub i_c: f64,
    pub r_mw: f64,
    pub chi: f64,
}

/// Junction geometry for setting the initial phase by an external field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxConfig {
    /// Tesla.
    pub b0: f64,
    /// Barrier thickness `d`, m.
    pub barrier: f64,
    /// London penetration depth `λ`, m.
    pub penetration_depth: f64,
    /// Junction width `L`, m.
    pub width: f64,
    #[serde(default)]
    pub phi0_base: f64,
}

impl FluxConfig {
    pub fn modulation(&self) -> FluxModulation {
        FluxModulation::from_layers(
            self.b0,
            self.barrier,
            self.penetration_depth,
            self.width,
            self.phi0_base,
        )
    }
}

/// A config problem tied to one key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        // Unknown keys are reported by name inside the message.
        let key = message
            .split('`')
            .nth(1)
            .filter(|_| message.starts_with("unknown field"))
            .map(str::to_string)
            .unwrap_or_else(|| "config".to_string());
        ConfigError::new(key, message)
    })
}

impl ExperimentConfig {
    pub fn v(&self) -> Result<f64, ConfigError> {
        match (self.drive.kappa, self.drive.v) {
            (Some(k), None) => Ok(k * self.junction.beta),
            (None, Some(v)) => Ok(v),
            (Some(_), Some(_)) => Err(ConfigError::new("drive", "give either kappa or v, not both")),
            (None, None) => Err(ConfigError::new("drive.kappa", "missing sweep rate")),
        }
    }

    pub fn kappa(&self) -> Result<f64, ConfigError> {
        Ok(self.v()? / self.junction.beta)
    }

    pub fn signal(&self) -> Result<Signal, ConfigError> {
        Ok(match self.signal {
            SignalConfig::None => Signal::None,
            SignalConfig::Cw { i_mw, omega_mw } => Signal::Cw { i_mw, omega_mw },
            SignalConfig::Pulse {
                n_ph,
                i_ph,
                omega_ph,
                tau_ph,
                tau_d,
            } => Signal::Pulse {
                n_ph,
                i_ph,
                omega_ph,
                tau_ph,
                tau_d: match tau_d {
                    Some(t) => t,
                    None => 0.5 / self.v()?,
                },
            },
        })
    }

    pub fn detection(&self) -> Result<DetectionSpec, ConfigError> {
        Ok(DetectionSpec {
            n_runs: self.runs,
            master_seed: self.seed,
            config: self.junction.clone(),
            kappa: self.kappa()?,
            signal: self.signal()?,
        })
    }

    /// Sweep grid, falling back to `default` = `(start, stop, points)`.
    pub fn grid(&self, default: Option<(f64, f64, usize)>) -> Result<Vec<f64>, ConfigError> {
        let s = &self.sweep;
        if let Some(values) = &s.values {
            if s.start.is_some() || s.stop.is_some() || s.points.is_some() {
                return Err(ConfigError::new(
                    "sweep.values",
                    "give either values or start/stop/points",
                ));
            }
            if values.is_empty() {
                return Err(ConfigError::new("sweep.values", "must not be empty"));
            }
            return Ok(values.clone());
        }
        let (start, stop, points) = match (s.start, s.stop, s.points, default) {
            (Some(a), Some(b), Some(n), _) => (a, b, n),
            (None, None, None, Some(d)) => d,
            _ => {
                return Err(ConfigError::new(
                    "sweep",
                    "needs values, or all of start, stop and points",
                ))
            }
        };
        if points == 0 {
            return Err(ConfigError::new("sweep.points", "must be >= 1"));
        }
        Ok(jtd::washboard::uniform_grid(start, stop, points))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = parse("command = \"scd\"\n[drive]\nkappa = 0.2\n").unwrap();
        assert_eq!(c.command, Some(Command::Scd));
        assert_eq!(c.runs, 10_000);
        assert_eq!(c.junction, JunctionConfig::default());
        assert!((c.v().unwrap() - 2e-5).abs() < 1e-20);
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse("[junction]\nphi_0 = 0.1\n").unwrap_err();
        assert_eq!(e.key, "phi_0");
        let e = parse("runz = 3\n").unwrap_err();
        assert_eq!(e.key, "runz");
    }

    #[test]
    fn pulse_defaults_to_mid_ramp() {
        let c = parse("[drive]\nkappa = 8.6\n[signal]\nkind = \"pulse\"\n").unwrap();
        match c.signal().unwrap() {
            Signal::Pulse { n_ph, i_ph, tau_ph, tau_d, .. } => {
                assert_eq!((n_ph, i_ph, tau_ph), (1.0, 0.005, 356.0));
                assert!((tau_d - 0.5 / 8.6e-4).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_forms() {
        let c = parse("[sweep]\nstart = 1.0\nstop = 2.0\npoints = 3\n").unwrap();
        assert_eq!(c.grid(None).unwrap(), vec![1.0, 1.5, 2.0]);
        let c = parse("[sweep]\nvalues = [3.0]\nstart = 1.0\n").unwrap();
        assert!(c.grid(None).is_err());
        let c = parse("").unwrap();
        assert_eq!(c.grid(Some((0.0, 1.0, 2))).unwrap(), vec![0.0, 1.0]);
        assert!(c.grid(None).is_err());
    }

    #[test]
    fn both_rates_rejected() {
        let c = parse("[drive]\nkappa = 1.0\nv = 1e-4\n").unwrap();
        assert_eq!(c.v().unwrap_err().key, "drive");
    }
}
