//! Artifact formats: sample CSVs, ROC and sweep tables, JSON summaries.
//!
//! Floats in CSV files carry 17 significant digits, which round-trips every
//! `f64` exactly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::discriminator::{Comparison, RocResult};
use crate::ensemble::{EnsembleSpec, Scd};
use crate::error::{JtdError, Result};
use crate::protocol::SweepCurve;

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_scd_csv<W: Write>(scd: &Scd, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "i_sw"])?;
    for (k, x) in scd.indices.iter().zip(&scd.samples) {
        w.write_record([k.to_string(), fmt_f64(*x)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    index: u64,
    i_sw: f64,
}

/// Reads `(indices, samples)` back from [`write_scd_csv`] output.
pub fn read_scd_csv<R: Read>(input: R) -> Result<(Vec<u64>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["index", "i_sw"] {
        return Err(JtdError::Io(format!(
            "expected columns index,i_sw, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut indices = Vec::new();
    let mut samples = Vec::new();
    for row in r.deserialize() {
        let row: SampleRow = row?;
        indices.push(row.index);
        samples.push(row.i_sw);
    }
    Ok((indices, samples))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScdSummary {
    pub n_runs: u64,
    pub n_switched: u64,
    pub n_unswitched: u64,
    pub mean_i_sw: Option<f64>,
    pub seed: u64,
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub spec: EnsembleSpec,
}

impl ScdSummary {
    pub fn new(scd: &Scd, spec: &EnsembleSpec) -> Self {
        Self {
            n_runs: scd.n_runs,
            n_switched: scd.n_switched(),
            n_unswitched: scd.n_unswitched,
            mean_i_sw: scd.mean(),
            seed: spec.master_seed,
            edges: scd.histogram.edges.clone(),
            counts: scd.histogram.counts.clone(),
            spec: spec.clone(),
        }
    }
}

pub fn write_roc_csv<W: Write>(roc: &RocResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["fpr", "tpr"])?;
    for p in &roc.points {
        w.write_record([fmt_f64(p.fpr), fmt_f64(p.tpr)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocSummary {
    pub auc: f64,
    pub auc_star: f64,
    pub n0: usize,
    pub n1: usize,
    pub d_kc: Option<f64>,
}

impl From<&Comparison> for RocSummary {
    fn from(c: &Comparison) -> Self {
        Self {
            auc: c.auc,
            auc_star: c.auc_star,
            n0: c.n0,
            n1: c.n1,
            d_kc: c.d_kc,
        }
    }
}

/// One row per grid point; an undefined `d_kc` is left empty.
pub fn write_sweep_csv<W: Write>(curve: &SweepCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([curve.parameter.as_str(), "auc_raw", "auc_star", "d_kc"])?;
    for p in &curve.points {
        w.write_record([
            fmt_f64(p.value),
            fmt_f64(p.auc_raw),
            fmt_f64(p.auc_star),
            p.d_kc.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
