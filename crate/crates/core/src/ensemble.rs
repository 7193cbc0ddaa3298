//! Parallel Monte Carlo ensembles of ramp cycles and the resulting
//! switching-current distributions.
//!
//! Trajectory `k` of an ensemble always draws from
//! `NoiseStream::for_trajectory(master_seed, k)`, so an ensemble is a pure
//! function of its [`EnsembleSpec`]: worker count, chunking and the lane
//! interleaving inside a worker never change a single bit of the output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{JtdError, Result};
use crate::langevin::{step_limit, DriveSpec, JunctionConfig, SwitchingEvent, Trajectory};
use crate::rng::NoiseStream;

/// Bin width of the histogram stored with every SCD.
pub const SCD_BIN_WIDTH: f64 = 1e-3;
/// Plotting window for SCD histograms.
pub const PLOT_RANGE: (f64, f64) = (0.8, 1.02);
pub const PLOT_BINS: usize = 200;

/// Trajectories advanced side by side within one worker. Their dependency
/// chains are independent, which lets the core overlap them.
const LANES: usize = 4;
/// Trajectories per scheduling unit.
const CHUNK: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n_runs: u64,
    pub master_seed: u64,
    pub config: JunctionConfig,
    pub drive: DriveSpec,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(JtdError::invalid("n_runs", "must be >= 1"));
        }
        self.config.validate()?;
        self.drive.validate()?;
        step_limit(&self.config, &self.drive)?;
        Ok(())
    }
}

/// Uniform-width histogram. Bins are `[e_i, e_{i+1})` except the last,
/// which also holds values equal to the upper edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples outside the range, or NaN.
    pub outside: u64,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn histogram(samples: &[f64], n_bins: usize, range: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = range;
    if n_bins == 0 {
        return Err(JtdError::invalid("n_bins", "must be >= 1"));
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(JtdError::invalid(
            "range",
            format!("[{lo}, {hi}] is empty or not finite"),
        ));
    }
    let width = (hi - lo) / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + i as f64 * width })
        .collect();
    let mut counts = vec![0u64; n_bins];
    let mut outside = 0;
    for &x in samples {
        if !(x >= lo && x <= hi) {
            outside += 1;
            continue;
        }
        let mut bin = (((x - lo) / width) as usize).min(n_bins - 1);
        // Float division can land one bin off near an edge.
        while bin > 0 && x < edges[bin] {
            bin -= 1;
        }
        while bin + 1 < n_bins && x >= edges[bin + 1] {
            bin += 1;
        }
        counts[bin] += 1;
    }
    Ok(Histogram {
        edges,
        counts,
        outside,
    })
}

/// Empirical switching-current distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scd {
    /// Switching currents of the switched trajectories, in trajectory order.
    pub samples: Vec<f64>,
    /// Trajectory index of each entry of `samples`.
    pub indices: Vec<u64>,
    pub n_runs: u64,
    pub n_unswitched: u64,
    /// Histogram of `samples` over `[0, i_b_max]`.
    pub histogram: Histogram,
}

impl Scd {
    /// Builds an SCD from per-trajectory events listed in trajectory order.
    pub fn from_events(events: &[SwitchingEvent], i_b_max: f64) -> Result<Self> {
        let mut samples = Vec::with_capacity(events.len());
        let mut indices = Vec::with_capacity(events.len());
        for (k, ev) in events.iter().enumerate() {
            if let (true, Some(i_sw)) = (ev.switched, ev.i_sw) {
                samples.push(i_sw);
                indices.push(k as u64);
            }
        }
        Self::from_samples(samples, indices, events.len() as u64, i_b_max)
    }

    pub fn from_samples(
        samples: Vec<f64>,
        indices: Vec<u64>,
        n_runs: u64,
        i_b_max: f64,
    ) -> Result<Self> {
        if samples.len() != indices.len() {
            return Err(JtdError::invalid("indices", "length differs from samples"));
        }
        if samples.len() as u64 > n_runs {
            return Err(JtdError::invalid("n_runs", "fewer runs than samples"));
        }
        let n_bins = ((i_b_max / SCD_BIN_WIDTH).round() as usize).max(1);
        let histogram = histogram(&samples, n_bins, (0.0, i_b_max))?;
        Ok(Self {
            n_unswitched: n_runs - samples.len() as u64,
            samples,
            indices,
            n_runs,
            histogram,
        })
    }

    pub fn n_switched(&self) -> u64 {
        self.samples.len() as u64
    }

    pub fn mean(&self) -> Option<f64> {
        if self.samples.is_empty() {
            None
        } else {
            Some(self.samples.iter().sum::<f64>() / self.samples.len() as f64)
        }
    }

    /// Histogram of the samples over an arbitrary window.
    pub fn rebin(&self, n_bins: usize, range: (f64, f64)) -> Result<Histogram> {
        histogram(&self.samples, n_bins, range)
    }
}

/// Runs `count` trajectories starting at index `first`, interleaving
/// [`LANES`] of them. Outcomes come back in index order.
fn run_chunk(
    config: &JunctionConfig,
    drive: &DriveSpec,
    master_seed: u64,
    max_steps: u64,
    first: u64,
    count: usize,
) -> Vec<Result<SwitchingEvent>> {
    let start = |k: u64| {
        Trajectory::new_unchecked(
            config,
            drive,
            NoiseStream::for_trajectory(master_seed, k),
            max_steps,
        )
    };
    let mut out: Vec<Option<Result<SwitchingEvent>>> = (0..count).map(|_| None).collect();
    let mut next = 0usize;
    let mut lanes: [Option<(usize, Trajectory)>; LANES] = Default::default();
    for lane in lanes.iter_mut() {
        if next < count {
            *lane = Some((next, start(first + next as u64)));
            next += 1;
        }
    }
    let mut active = lanes.iter().filter(|l| l.is_some()).count();
    while active > 0 {
        for lane in lanes.iter_mut() {
            let Some((slot, traj)) = lane else { continue };
            if let Some(outcome) = traj.advance() {
                out[*slot] = Some(outcome);
                if next < count {
                    *lane = Some((next, start(first + next as u64)));
                    next += 1;
                } else {
                    *lane = None;
                    active -= 1;
                }
            }
        }
    }
    out.into_iter()
        .map(|o| o.expect("every slot is filled"))
        .collect()
}

/// Per-trajectory events of an ensemble, in trajectory order.
pub fn run_events(spec: &EnsembleSpec) -> Result<Vec<SwitchingEvent>> {
    spec.validate()?;
    let max_steps = step_limit(&spec.config, &spec.drive)?;
    let n = spec.n_runs;
    let n_chunks = n.div_ceil(CHUNK as u64);
    let chunks: Vec<Vec<Result<SwitchingEvent>>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let first = c * CHUNK as u64;
            let count = (n - first).min(CHUNK as u64) as usize;
            run_chunk(
                &spec.config,
                &spec.drive,
                spec.master_seed,
                max_steps,
                first,
                count,
            )
        })
        .collect();
    let mut events = Vec::with_capacity(n as usize);
    for (k, outcome) in chunks.into_iter().flatten().enumerate() {
        match outcome {
            Ok(ev) => events.push(ev),
            Err(e) => {
                return Err(JtdError::Trajectory {
                    index: k as u64,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(events)
}

/// Runs the ensemble on the current rayon pool and collects its SCD.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<Scd> {
    let events = run_events(spec)?;
    Scd::from_events(&events, spec.config.i_b_max)
}
