use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use jtd::ensemble::{run_ensemble, EnsembleSpec, PLOT_BINS, PLOT_RANGE};
use jtd::io::{to_json, write_roc_csv, write_scd_csv, write_sweep_csv, RocSummary, ScdSummary};
use jtd::langevin::{DriveSpec, Trajectory};
use jtd::protocol::{
    adiabaticity, bandwidth_scan, detect_with_cache, dynamic_range, min_power, nominal_bandwidth,
    phi0_from_flux, quality_factor, sweep_amplitude, sweep_kappa, sweep_phi0, ScdCache,
    SweepCurve,
};
use jtd::rng::NoiseStream;
use jtd::JtdError;

use crate::config::{Command, ConfigError, ExperimentConfig};
use crate::svg;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Numeric { module: &'static str, error: JtdError },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric { .. } => 2,
            _ => 1,
        }
    }

    /// One-line JSON description for stderr.
    pub fn to_line(&self) -> String {
        let v = match self {
            CliError::Config(e) => json!({"error": "config", "key": e.key, "message": e.message}),
            CliError::Numeric { module, error } => {
                let trajectory = match error {
                    JtdError::Trajectory { index, .. } => Some(*index),
                    _ => None,
                };
                json!({
                    "error": "numeric",
                    "module": module,
                    "trajectory": trajectory,
                    "message": error.to_string(),
                })
            }
            CliError::Io(m) => json!({"error": "io", "message": m}),
        };
        v.to_string()
    }

    fn from_core(module: &'static str, e: JtdError) -> Self {
        match e {
            JtdError::InvalidParameter { name, reason } => {
                CliError::Config(ConfigError::new(name, reason))
            }
            JtdError::Domain { what, .. } => CliError::Config(ConfigError::new(what, e.to_string())),
            JtdError::Io(m) => CliError::Io(m),
            error => CliError::Numeric { module, error },
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn core<T>(module: &'static str, r: jtd::Result<T>) -> Result<T> {
    r.map_err(|e| CliError::from_core(module, e))
}

struct Output<'a> {
    dir: &'a Path,
    manifest: Value,
    plot: bool,
}

impl Output<'_> {
    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        File::create(&path)
            .map(BufWriter::new)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    fn text(&self, name: &str, body: &str) -> Result<()> {
        let mut f = self.create(name)?;
        f.write_all(body.as_bytes())?;
        f.flush()?;
        Ok(())
    }

    /// Writes `body` with the manifest attached.
    fn summary<T: Serialize>(&self, name: &str, body: &T) -> Result<()> {
        let mut v = serde_json::to_value(body).map_err(|e| CliError::Io(e.to_string()))?;
        if let Value::Object(map) = &mut v {
            map.insert("manifest".into(), self.manifest.clone());
        }
        self.text(name, &core("io", to_json(&v))?)
    }

    fn csv(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> jtd::Result<()>) -> Result<()> {
        let mut w = self.create(name)?;
        core("io", f(&mut w))?;
        w.flush()?;
        Ok(())
    }
}

/// Runs one experiment and writes its artifacts into `config.output_dir`.
pub fn run(command: Command, config: &ExperimentConfig) -> Result<()> {
    if !(config.auc_threshold >= 0.5 && config.auc_threshold <= 1.0) {
        return Err(ConfigError::new("auc_threshold", "must lie in [0.5, 1]").into());
    }
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", config.output_dir.display())))?;
    let mut resolved = config.clone();
    resolved.command = Some(command);
    let manifest = json!({
        "program": "jtd",
        "version": env!("CARGO_PKG_VERSION"),
        "config": resolved,
    });
    let out = Output {
        dir: &config.output_dir,
        manifest: manifest.clone(),
        plot: config.plot,
    };
    out.text("manifest.json", &core("io", to_json(&manifest))?)?;
    match command {
        Command::Trajectory => trajectory(config, &out),
        Command::Scd => scd(config, &out),
        Command::Detect => detect(config, &out),
        Command::SweepKappa | Command::SweepPhi0 | Command::SweepAmplitude | Command::Bandwidth => {
            sweep(command, config, &out)
        }
        Command::Metrics => metrics(config, &out),
    }
}

fn regime(config: &ExperimentConfig) -> Result<Value> {
    let a = core("protocol", adiabaticity(config.v()?, config.junction.beta))?;
    Ok(serde_json::to_value(a).expect("plain struct"))
}

fn trajectory(config: &ExperimentConfig, out: &Output) -> Result<()> {
    if config.trajectory.record_every == 0 {
        return Err(ConfigError::new("trajectory.record_every", "must be >= 1").into());
    }
    let drive = DriveSpec::new(config.v()?, config.signal()?);
    let noise = NoiseStream::for_trajectory(config.seed, 0);
    let mut traj = core("langevin", Trajectory::new(&config.junction, &drive, noise))?;
    let every = config.trajectory.record_every;
    let mut rows = String::from("step,tau,i_b,phi,phi_dot\n");
    let mut trace = Vec::new();
    let mut record = |t: &Trajectory, rows: &mut String, step: u64| {
        let s = t.state();
        rows.push_str(&format!(
            "{step},{},{},{},{}\n",
            jtd::io::fmt_f64(t.tau()),
            jtd::io::fmt_f64(t.bias()),
            jtd::io::fmt_f64(s.phi),
            jtd::io::fmt_f64(s.phi_dot)
        ));
        trace.push((t.bias(), s.phi));
    };
    record(&traj, &mut rows, 0);
    let mut step = 0u64;
    let event = loop {
        let done = traj.advance();
        step += 1;
        if let Some(outcome) = done {
            if !step.is_multiple_of(every) {
                record(&traj, &mut rows, step);
            }
            break core("langevin", outcome)?;
        }
        if step.is_multiple_of(every) {
            record(&traj, &mut rows, step);
        }
    };
    out.text("trajectory.csv", &rows)?;
    out.summary(
        "trajectory_summary.json",
        &json!({ "event": event, "kappa": config.kappa()?, "adiabaticity": regime(config)? }),
    )?;
    if out.plot {
        let line = svg::Line {
            label: "phase",
            points: trace,
        };
        out.text(
            "trajectory.svg",
            &svg::lines("Phase during the ramp", "bias i_b", "phase (rad)", &[line], None, None),
        )?;
    }
    Ok(())
}

fn scd(config: &ExperimentConfig, out: &Output) -> Result<()> {
    let spec = EnsembleSpec {
        n_runs: config.runs,
        master_seed: config.seed,
        config: config.junction.clone(),
        drive: DriveSpec::new(config.v()?, config.signal()?),
    };
    let scd = core("ensemble", run_ensemble(&spec))?;
    out.csv("scd_samples.csv", |w| write_scd_csv(&scd, w))?;
    let mut summary = serde_json::to_value(ScdSummary::new(&scd, &spec)).expect("plain struct");
    summary["kappa"] = json!(config.kappa()?);
    summary["adiabaticity"] = regime(config)?;
    out.summary("scd_summary.json", &summary)?;
    if out.plot {
        let h = core("ensemble", scd.rebin(PLOT_BINS, PLOT_RANGE))?;
        let title = format!("SCD, kappa = {}, phi0 = {}", config.kappa()?, config.junction.phi0);
        out.text("scd_hist.svg", &svg::histograms(&title, &[("P", &h)]))?;
    }
    Ok(())
}

fn detect(config: &ExperimentConfig, out: &Output) -> Result<()> {
    let spec = config.detection()?;
    if spec.signal.is_none() {
        return Err(ConfigError::new("signal.kind", "detect needs a signal").into());
    }
    let (p0, p1) = spec.pair();
    let outcome = core(
        "protocol",
        detect_with_cache(&p0, &p1, config.auc_threshold, &ScdCache::new()),
    )?;
    out.csv("scd0_samples.csv", |w| write_scd_csv(&outcome.scd0, w))?;
    out.csv("scd1_samples.csv", |w| write_scd_csv(&outcome.scd1, w))?;
    out.csv("roc.csv", |w| write_roc_csv(&outcome.roc, w))?;
    let roc = RocSummary::from(&outcome.comparison);
    let side = |scd: &jtd::ensemble::Scd, s: &EnsembleSpec| {
        json!({
            "seed": s.master_seed,
            "n_runs": scd.n_runs,
            "n_unswitched": scd.n_unswitched,
            "mean_i_sw": scd.mean(),
        })
    };
    out.summary(
        "detect_summary.json",
        &json!({
            "auc": roc.auc,
            "auc_star": roc.auc_star,
            "n0": roc.n0,
            "n1": roc.n1,
            "d_kc": roc.d_kc,
            "auc_threshold": outcome.auc_threshold,
            "detectable": outcome.detectable,
            "kappa": spec.kappa,
            "adiabaticity": regime(config)?,
            "p0": side(&outcome.scd0, &p0),
            "p1": side(&outcome.scd1, &p1),
        }),
    )?;
    if out.plot {
        let h0 = core("ensemble", outcome.scd0.rebin(PLOT_BINS, PLOT_RANGE))?;
        let h1 = core("ensemble", outcome.scd1.rebin(PLOT_BINS, PLOT_RANGE))?;
        out.text(
            "scd_hist.svg",
            &svg::histograms(
                "SCD without (P0) and with (P1) signal",
                &[("P0 no signal", &h0), ("P1 signal", &h1)],
            ),
        )?;
        let line = svg::Line {
            label: "ROC",
            points: outcome.roc.points.iter().map(|p| (p.fpr, p.tpr)).collect(),
        };
        let diagonal = svg::Line {
            label: "chance",
            points: vec![(0.0, 0.0), (1.0, 1.0)],
        };
        let title = format!("ROC, AUC* = {:.4}", roc.auc_star);
        out.text(
            "roc.svg",
            &svg::lines(&title, "false positive rate", "true positive rate", &[line, diagonal], Some((0.0, 1.0)), None),
        )?;
    }
    Ok(())
}

fn sweep(command: Command, config: &ExperimentConfig, out: &Output) -> Result<()> {
    let base = config.detection()?;
    let cache = ScdCache::new();
    let threshold = config.auc_threshold;
    let mut extra = serde_json::Map::new();
    let curve: SweepCurve = match command {
        Command::SweepKappa => {
            let grid = config.grid(Some((0.5, 10.0, 20)))?;
            core("protocol", sweep_kappa(&base, &grid, threshold, &cache))?
        }
        Command::SweepPhi0 => {
            let grid = config.grid(Some((0.01, 0.3, 30)))?;
            core("protocol", sweep_phi0(&base, &grid, threshold, &cache))?
        }
        Command::SweepAmplitude => {
            let grid = config.grid(None)?;
            let s = core("protocol", sweep_amplitude(&base, &grid, threshold, &cache))?;
            extra.insert("min_detectable".into(), json!(s.min_detectable));
            extra.insert("crossing".into(), json!(s.crossing));
            if config.sweep.dynamic_range {
                match dynamic_range(&s.curve, threshold, config.sweep.linearity_tolerance) {
                    Ok(r) => {
                        extra.insert("dynamic_range".into(), json!(r));
                    }
                    Err(e @ JtdError::NeverDetectable { .. }) => {
                        extra.insert("dynamic_range".into(), Value::Null);
                        extra.insert("dynamic_range_error".into(), json!(e.to_string()));
                    }
                    Err(e) => return Err(CliError::from_core("protocol", e)),
                }
                extra.insert(
                    "linearity_tolerance".into(),
                    json!(config.sweep.linearity_tolerance),
                );
            }
            s.curve
        }
        Command::Bandwidth => {
            let half = 0.5 * nominal_bandwidth(config.junction.beta);
            let grid = config.grid(Some((1.0 - half, 1.0 + half, 11)))?;
            let b = core("protocol", bandwidth_scan(&base, &grid, threshold, &cache))?;
            extra.insert("band".into(), json!(b.band));
            extra.insert("in_band_variation".into(), json!(b.in_band_variation));
            extra.insert("all_in_band_detectable".into(), json!(b.all_in_band_detectable));
            b.curve
        }
        _ => unreachable!("not a sweep"),
    };
    out.csv("sweep.csv", |w| write_sweep_csv(&curve, w))?;
    extra.insert("parameter".into(), json!(curve.parameter));
    extra.insert("auc_threshold".into(), json!(threshold));
    extra.insert("argmax".into(), json!(curve.argmax()));
    extra.insert("points".into(), json!(curve.points));
    out.summary("sweep_summary.json", &Value::Object(extra))?;
    if out.plot {
        let line = svg::Line {
            label: "AUC*",
            points: curve.points.iter().map(|p| (p.value, p.auc_star)).collect(),
        };
        let title = format!("AUC* against {}", curve.parameter);
        out.text(
            "sweep.svg",
            &svg::lines(&title, &curve.parameter, "AUC*", &[line], Some((0.5, 1.0)), Some(threshold)),
        )?;
    }
    Ok(())
}

fn metrics(config: &ExperimentConfig, out: &Output) -> Result<()> {
    if config.metrics.is_none() && config.flux.is_none() {
        return Err(ConfigError::new("metrics", "needs a [metrics] or [flux] table").into());
    }
    let mut body = serde_json::Map::new();
    if let Some(m) = &config.metrics {
        let p = core("protocol", min_power(m.i_mw, m.i_c, m.r_mw, m.chi))?;
        let per_ic2 = core("protocol", min_power(m.i_mw, 1.0, m.r_mw, m.chi))?;
        body.insert("p_min_watts".into(), json!(p));
        body.insert("p_min_per_ic2".into(), json!(per_ic2));
    }
    if let Some(f) = &config.flux {
        let m = f.modulation();
        body.insert("phi0".into(), json!(core("protocol", phi0_from_flux(&m))?));
        body.insert("flux_coefficient_per_tesla".into(), json!(m.coefficient()));
    }
    let beta = config.junction.beta;
    body.insert("bandwidth".into(), json!(nominal_bandwidth(beta)));
    body.insert("quality_factor".into(), json!(quality_factor(beta)));
    if config.drive.kappa.is_some() || config.drive.v.is_some() {
        body.insert("adiabaticity".into(), regime(config)?);
    }
    out.summary("metrics.json", &Value::Object(body))
}
