//! Experiment specs, sweep expansion, parallel execution and CSV output.
//!
//! A spec names a base network, a scheduler list, at most one sweep axis
//! and a replication count. Expansion resolves every (sweep point,
//! scheduler, replication) into a concrete run; replication r of every
//! scheduler shares one derived seed, so schedulers face identical
//! phase-1 traffic and fading (common random numbers). Row order is fixed
//! by the spec, and all randomness is derived from the seed, so a rerun
//! of the same spec yields byte-identical CSV output.

use crate::analytics::{self, BoundInputs, BoundResult, NetworkAoiDist};
use crate::config::{ConfigError, ErasureP1, NetworkConfig, RtsResolution};
use crate::rng::{mix_seed, StreamEntity, StreamRng};
use crate::sched::SchedulerKind;
use crate::signaling::{BudgetError, SymbolBudget};
use crate::sim::{MetricsAccumulator, Simulation};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("experiment name {0:?} is unusable in file names")]
    BadName(String),
    #[error("experiment lists no schedulers")]
    NoSchedulers,
    #[error("replications must be at least 1")]
    NoReplications,
    #[error("sweep sets both {0} and {1}; only one axis may vary")]
    MultipleAxes(&'static str, &'static str),
    #[error("sweep axis {0} has an empty value list")]
    EmptyAxis(&'static str),
    #[error("heterogeneous erasure range [{0}, {1}] must satisfy 0 <= lo <= hi <= 1")]
    BadHetRange(f64, f64),
    #[error("optimizing the activation probability needs a scalar phase-1 erasure")]
    OptimizeNeedsScalarErasure,
    #[error("unknown preset {0:?}; known presets: f3 f4 f5 f6 f7 f8 f9 f10 hetnet")]
    UnknownPreset(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    Analytics(#[from] analytics::AnalyticsError),
    #[error("reading {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
}

/// At most one of these lists may be present; it becomes the sweep axis.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_relays: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_channels: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activation_prob: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erasure_p2: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_eds: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rts_resolution: Option<Vec<RtsResolution>>,
}

/// One resolved sweep point: the axis name and the value applied.
#[derive(Clone, Debug, PartialEq)]
enum SweepPoint {
    None,
    Relays(u32),
    Channels(u32),
    Activation(f64),
    ErasureP2(f64),
    Eds(u32),
    Rts(RtsResolution),
}

impl SweepPoint {
    fn axis(&self) -> &'static str {
        match self {
            SweepPoint::None => "none",
            SweepPoint::Relays(_) => "n_relays",
            SweepPoint::Channels(_) => "n_channels",
            SweepPoint::Activation(_) => "activation_prob",
            SweepPoint::ErasureP2(_) => "erasure_p2",
            SweepPoint::Eds(_) => "n_eds",
            SweepPoint::Rts(_) => "rts_resolution",
        }
    }

    fn label(&self) -> String {
        match self {
            SweepPoint::None => String::new(),
            SweepPoint::Relays(v) | SweepPoint::Channels(v) | SweepPoint::Eds(v) => v.to_string(),
            SweepPoint::Activation(v) | SweepPoint::ErasureP2(v) => fmt_float(*v),
            SweepPoint::Rts(v) => v.to_string(),
        }
    }

    fn apply(&self, cfg: &mut NetworkConfig) {
        match *self {
            SweepPoint::None => {}
            SweepPoint::Relays(v) => cfg.n_relays = v,
            SweepPoint::Channels(v) => cfg.n_channels = v,
            SweepPoint::Activation(v) => cfg.activation_prob = v,
            SweepPoint::ErasureP2(v) => cfg.erasure_p2 = v,
            SweepPoint::Eds(v) => cfg.n_eds = v,
            SweepPoint::Rts(v) => cfg.rts_resolution = v,
        }
    }
}

impl SweepSpec {
    fn points(&self) -> Result<Vec<SweepPoint>, ExperimentError> {
        let mut axes: Vec<(&'static str, Vec<SweepPoint>)> = Vec::new();
        if let Some(v) = &self.n_relays {
            axes.push(("n_relays", v.iter().map(|&x| SweepPoint::Relays(x)).collect()));
        }
        if let Some(v) = &self.n_channels {
            axes.push(("n_channels", v.iter().map(|&x| SweepPoint::Channels(x)).collect()));
        }
        if let Some(v) = &self.activation_prob {
            axes.push(("activation_prob", v.iter().map(|&x| SweepPoint::Activation(x)).collect()));
        }
        if let Some(v) = &self.erasure_p2 {
            axes.push(("erasure_p2", v.iter().map(|&x| SweepPoint::ErasureP2(x)).collect()));
        }
        if let Some(v) = &self.n_eds {
            axes.push(("n_eds", v.iter().map(|&x| SweepPoint::Eds(x)).collect()));
        }
        if let Some(v) = &self.rts_resolution {
            axes.push(("rts_resolution", v.iter().map(|&x| SweepPoint::Rts(x)).collect()));
        }
        match axes.len() {
            0 => Ok(vec![SweepPoint::None]),
            1 => {
                let (name, points) = axes.into_iter().next().unwrap();
                if points.is_empty() {
                    Err(ExperimentError::EmptyAxis(name))
                } else {
                    Ok(points)
                }
            }
            _ => Err(ExperimentError::MultipleAxes(axes[0].0, axes[1].0)),
        }
    }
}

fn default_replications() -> u32 {
    5
}

fn default_name() -> String {
    "adhoc".into()
}

fn default_schedulers() -> Vec<SchedulerKind> {
    crate::sched::ALL_SCHEDULERS.to_vec()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Output files are named after this.
    pub name: String,
    pub schedulers: Vec<SchedulerKind>,
    pub replications: u32,
    pub config: NetworkConfig,
    pub budget: SymbolBudget,
    pub sweep: SweepSpec,
    /// Replace the configured activation probability with the bound
    /// minimizer, recomputed at every sweep point.
    pub optimize_activation: bool,
    /// Also emit the empirical and analytic network-AoI CCDF per run.
    pub emit_ccdf: bool,
    /// Draw each device's phase-1 erasure uniformly from this range, once
    /// per replication; also emits per-device output and per-scheduler
    /// least-squares fits of AAoI against the erasure rate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heterogeneous_p1: Option<[f64; 2]>,
    /// Where `write_all` style callers should put the tables; callers may
    /// override it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            name: default_name(),
            schedulers: default_schedulers(),
            replications: default_replications(),
            config: NetworkConfig::default(),
            budget: SymbolBudget::default(),
            sweep: SweepSpec::default(),
            optimize_activation: false,
            emit_ccdf: false,
            heterogeneous_p1: None,
            out_dir: None,
        }
    }
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let spec: ExperimentSpec =
            toml::from_str(&text).map_err(|source| ExperimentError::Parse {
                path: path.to_path_buf(),
                source: Box::new(source),
            })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.name.is_empty()
            || self
                .name
                .chars()
                .any(|c| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
        {
            return Err(ExperimentError::BadName(self.name.clone()));
        }
        if self.schedulers.is_empty() {
            return Err(ExperimentError::NoSchedulers);
        }
        if self.replications == 0 {
            return Err(ExperimentError::NoReplications);
        }
        if let Some([lo, hi]) = self.heterogeneous_p1 {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(ExperimentError::BadHetRange(lo, hi));
            }
            if self.optimize_activation {
                return Err(ExperimentError::OptimizeNeedsScalarErasure);
            }
        }
        // Every sweep point must itself be a valid network.
        for point in self.sweep.points()? {
            let mut cfg = self.config.clone();
            point.apply(&mut cfg);
            cfg.validate()?;
            self.budget.validate_for(cfg.n_eds, cfg.n_relays)?;
        }
        Ok(())
    }

    /// All runs in emission order: sweep point, then scheduler, then
    /// replication.
    fn expand(&self) -> Result<Vec<RunPoint>, ExperimentError> {
        let mut runs = Vec::new();
        for point in self.sweep.points()? {
            let mut point_cfg = self.config.clone();
            point.apply(&mut point_cfg);
            if self.optimize_activation {
                let eps = match point_cfg.erasure_p1 {
                    ErasureP1::Uniform(e) => e,
                    ErasureP1::PerEd(_) => {
                        return Err(ExperimentError::OptimizeNeedsScalarErasure)
                    }
                };
                point_cfg.activation_prob = analytics::optimize_activation(
                    point_cfg.n_eds,
                    point_cfg.n_channels,
                    point_cfg.n_relays,
                    eps,
                )?;
            }
            for &scheduler in &self.schedulers {
                for replication in 0..self.replications {
                    let mut cfg = point_cfg.clone();
                    cfg.seed = mix_seed(self.config.seed, replication as u64);
                    if let Some([lo, hi]) = self.heterogeneous_p1 {
                        cfg.erasure_p1 = ErasureP1::PerEd(draw_heterogeneous(
                            cfg.seed, cfg.n_eds, lo, hi,
                        ));
                    }
                    runs.push(RunPoint {
                        scheduler,
                        axis: point.axis(),
                        sweep_value: point.label(),
                        replication,
                        config: cfg,
                    });
                }
            }
        }
        Ok(runs)
    }
}

/// Per-device phase-1 erasures for one replication, drawn from a stream
/// keyed off the replication seed so every scheduler sees the same
/// network.
fn draw_heterogeneous(seed: u64, n_eds: u32, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = StreamRng::new(seed, StreamEntity::Ap, 1, u64::MAX);
    (0..n_eds).map(|_| rng.uniform_f64(lo, hi)).collect()
}

/// One fully resolved simulation run.
#[derive(Clone, Debug)]
pub struct RunPoint {
    pub scheduler: SchedulerKind,
    pub axis: &'static str,
    pub sweep_value: String,
    pub replication: u32,
    pub config: NetworkConfig,
}

/// A finished run: its metrics plus the closed-form reference at the
/// run's parameters (mean phase-1 erasure for heterogeneous networks).
pub struct RunRow {
    pub point: RunPoint,
    pub metrics: MetricsAccumulator,
    pub bound: BoundResult,
}

pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub rows: Vec<RunRow>,
}

fn bound_for(cfg: &NetworkConfig) -> BoundResult {
    analytics::aoi_bound(&BoundInputs {
        n_eds: cfg.n_eds,
        activation_prob: cfg.activation_prob,
        n_channels: cfg.n_channels,
        n_relays: cfg.n_relays,
        erasure_p1: cfg.erasure_p1.mean(),
    })
}

/// Runs the whole experiment, parallelizing over runs. Row order is
/// independent of scheduling: results are collected by index.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentResult, ExperimentError> {
    spec.validate()?;
    let points = spec.expand()?;
    let total = points.len();
    let rows: Result<Vec<RunRow>, ExperimentError> = points
        .into_par_iter()
        .enumerate()
        .map(|(i, point)| {
            let started = std::time::Instant::now();
            let mut sim = Simulation::with_budget(&point.config, point.scheduler, &spec.budget)?;
            sim.run();
            log::info!(
                "[{}/{}] {} {}={} rep {} done in {:.1?}",
                i + 1,
                total,
                point.scheduler,
                point.axis,
                if point.sweep_value.is_empty() { "-" } else { &point.sweep_value },
                point.replication,
                started.elapsed()
            );
            Ok(RunRow {
                bound: bound_for(&point.config),
                metrics: sim.into_metrics(),
                point,
            })
        })
        .collect();
    Ok(ExperimentResult {
        spec: spec.clone(),
        rows: rows?,
    })
}

/// Exponent form with exactly the digits needed to parse back to the same
/// f64, so fixtures round-trip bit-for-bit and stay diffable.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

const MAIN_COLUMNS: &str = "scheduler,sweep_axis,sweep_value,replication,seed,n_eds,n_channels,\
n_relays,activation_prob,erasure_p1_mean,erasure_p2,buffer_size,rts_resolution,measured_slots,\
aaoi,aaoi_se,paoi,paoi_se,delivery_rate,aaoi_bound,paoi_bound,bound_delivery_rate,\
collisions_per_slot,erased_per_slot,overhead_symbols_per_slot,mam_fallback_rate";

impl ExperimentResult {
    fn header_comment(&self) -> String {
        let mut s = String::new();
        let spec_toml = toml::to_string(&self.spec).expect("spec serializes");
        for line in spec_toml.lines() {
            let _ = writeln!(s, "# {line}");
        }
        s
    }

    /// The main result table.
    pub fn to_csv_string(&self) -> String {
        let mut s = self.header_comment();
        let _ = writeln!(s, "{MAIN_COLUMNS}");
        for row in &self.rows {
            let cfg = &row.point.config;
            let m = &row.metrics;
            let slots = m.slots_recorded() as f64;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                row.point.scheduler,
                row.point.axis,
                row.point.sweep_value,
                row.point.replication,
                cfg.seed,
                cfg.n_eds,
                cfg.n_channels,
                cfg.n_relays,
                fmt_float(cfg.activation_prob),
                fmt_float(cfg.erasure_p1.mean()),
                fmt_float(cfg.erasure_p2),
                cfg.buffer_size,
                cfg.rts_resolution,
                m.slots_recorded(),
                fmt_float(m.network_aaoi()),
                fmt_float(m.aaoi_se()),
                fmt_float(m.network_paoi()),
                fmt_float(m.paoi_se()),
                fmt_float(m.delivery_rate()),
                fmt_float(row.bound.aaoi),
                fmt_float(row.bound.paoi),
                fmt_float(row.bound.delivery_rate),
                fmt_float(m.ap_collisions() as f64 / slots),
                fmt_float(m.erased_tx() as f64 / slots),
                fmt_float(m.overhead_symbols() as f64 / slots),
                fmt_float(m.mam_fallback_slots() as f64 / slots),
            );
        }
        s
    }

    /// Long-format CCDF table of the instantaneous network-average AoI,
    /// one row per observed lattice point per run.
    pub fn ccdf_csv_string(&self) -> Result<String, ExperimentError> {
        let mut s = self.header_comment();
        let _ = writeln!(
            s,
            "scheduler,sweep_axis,sweep_value,replication,age_sum,network_aoi,empirical_ccdf,analytic_ccdf"
        );
        for row in &self.rows {
            let n = row.point.config.n_eds;
            let dist = NetworkAoiDist::build(n, row.bound.delivery_rate)?;
            for &sum in row.metrics.age_sum_histogram().keys() {
                let delta = sum as f64 / n as f64;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    row.point.scheduler,
                    row.point.axis,
                    row.point.sweep_value,
                    row.point.replication,
                    sum,
                    fmt_float(delta),
                    fmt_float(row.metrics.empirical_sum_ccdf(sum)),
                    fmt_float(dist.ccdf(delta)),
                );
            }
        }
        Ok(s)
    }

    /// Per-device table for heterogeneous networks: each device's erasure
    /// rate against its measured AoI statistics.
    pub fn per_ed_csv_string(&self) -> String {
        let mut s = self.header_comment();
        let _ = writeln!(
            s,
            "scheduler,sweep_axis,sweep_value,replication,ed,erasure_p1,aaoi,paoi,delivery_rate"
        );
        for row in &self.rows {
            for ed in 0..row.metrics.n_eds() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    row.point.scheduler,
                    row.point.axis,
                    row.point.sweep_value,
                    row.point.replication,
                    ed,
                    fmt_float(row.point.config.erasure_p1.for_ed(ed)),
                    fmt_float(row.metrics.ed_aaoi(ed)),
                    fmt_float(row.metrics.ed_paoi(ed).unwrap_or(f64::NAN)),
                    fmt_float(row.metrics.ed_delivery_rate(ed)),
                );
            }
        }
        s
    }

    /// Least-squares fit of per-device AAoI against the device's phase-1
    /// erasure, pooled over replications, one line per scheduler.
    pub fn het_fits(&self) -> Vec<(SchedulerKind, f64, f64, usize)> {
        let mut fits = Vec::new();
        for &scheduler in &self.spec.schedulers {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for row in self.rows.iter().filter(|r| r.point.scheduler == scheduler) {
                for ed in 0..row.metrics.n_eds() {
                    xs.push(row.point.config.erasure_p1.for_ed(ed));
                    ys.push(row.metrics.ed_aaoi(ed));
                }
            }
            let n = xs.len();
            if n < 2 {
                fits.push((scheduler, f64::NAN, f64::NAN, n));
                continue;
            }
            let mx = xs.iter().sum::<f64>() / n as f64;
            let my = ys.iter().sum::<f64>() / n as f64;
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let slope = sxy / sxx;
            fits.push((scheduler, slope, my - slope * mx, n));
        }
        fits
    }

    pub fn fit_csv_string(&self) -> String {
        let mut s = self.header_comment();
        let _ = writeln!(s, "scheduler,slope,intercept,points");
        for (scheduler, slope, intercept, n) in self.het_fits() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                scheduler,
                fmt_float(slope),
                fmt_float(intercept),
                n
            );
        }
        s
    }

    /// Writes every table this experiment produces into `dir`, named
    /// after the spec; returns the written paths.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
        let write = |path: PathBuf, content: String| -> Result<PathBuf, ExperimentError> {
            std::fs::write(&path, content).map_err(|source| ExperimentError::Write {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        };
        std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut written = Vec::new();
        let base = dir.join(format!("{}.csv", self.spec.name));
        written.push(write(base, self.to_csv_string())?);
        if self.spec.emit_ccdf {
            let path = dir.join(format!("{}_ccdf.csv", self.spec.name));
            written.push(write(path, self.ccdf_csv_string()?)?);
        }
        if self.spec.heterogeneous_p1.is_some() {
            let path = dir.join(format!("{}_per_ed.csv", self.spec.name));
            written.push(write(path, self.per_ed_csv_string())?);
            let path = dir.join(format!("{}_fit.csv", self.spec.name));
            written.push(write(path, self.fit_csv_string())?);
        }
        Ok(written)
    }
}

pub const PRESET_NAMES: [&str; 9] = [
    "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10", "hetnet",
];

/// Desk-scale sweeps mirroring the reference evaluation scenarios:
/// channel count for the blind-forwarding comparison, relay count,
/// activation probability, channel count under optimized activation,
/// the network-AoI distribution, phase-2 erasure, device count, RTS
/// resolution, and the heterogeneous network.
pub fn figure_preset(name: &str) -> Result<ExperimentSpec, ExperimentError> {
    use SchedulerKind::*;
    let mut spec = ExperimentSpec {
        name: name.to_string(),
        replications: 3,
        ..ExperimentSpec::default()
    };
    spec.config.horizon_slots = 400_000;
    spec.config.warmup_slots = 1_000;
    match name {
        "f3" => {
            spec.schedulers = vec![Oracle, AlohaForward, Imas];
            spec.sweep.n_channels = Some(vec![1, 2, 3, 4, 5]);
            spec.config.horizon_slots = 200_000;
        }
        "f4" => {
            spec.schedulers = vec![Oracle, Mam, Imas, BImas, Abdr, BAbdr];
            spec.sweep.n_relays = Some(vec![2, 3, 4, 5]);
        }
        "f5" => {
            spec.schedulers = vec![Oracle, Mam, Imas, BImas, Abdr, BAbdr];
            spec.sweep.activation_prob = Some(vec![0.0517, 0.0717, 0.0917, 0.1117, 0.1317]);
        }
        "f6" => {
            spec.schedulers = vec![Oracle, Mam, Imas, BImas, Abdr, BAbdr];
            spec.sweep.n_channels = Some(vec![1, 2, 3, 4, 5]);
            spec.optimize_activation = true;
            spec.config.horizon_slots = 200_000;
            spec.replications = 2;
        }
        "f7" => {
            spec.schedulers = vec![Oracle, Imas, Abdr, BAbdr];
            spec.sweep.erasure_p2 = Some(vec![0.1, 0.5]);
            spec.emit_ccdf = true;
            spec.config.horizon_slots = 300_000;
            spec.replications = 2;
        }
        "f8" => {
            spec.schedulers = vec![Oracle, Imas, BImas, Abdr, BAbdr];
            spec.sweep.erasure_p2 =
                Some(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]);
            spec.config.horizon_slots = 300_000;
        }
        "f9" => {
            spec.schedulers = vec![Oracle, Imas, Abdr, BAbdr];
            spec.sweep.n_eds = Some(vec![30, 60, 120, 200, 300]);
            spec.optimize_activation = true;
            spec.config.horizon_slots = 300_000;
            spec.budget.t_id = 9;
        }
        "f10" => {
            spec.schedulers = vec![BAbdr];
            spec.sweep.rts_resolution = Some(
                [1u32, 2, 4, 8, 16, 32, 64, 128, 256]
                    .iter()
                    .map(|&r| RtsResolution::MiniSlots(r))
                    .chain([RtsResolution::Continuous])
                    .collect(),
            );
            spec.config.horizon_slots = 300_000;
        }
        "hetnet" => {
            spec.schedulers = vec![Mam, Imas, BImas, Abdr, BAbdr];
            spec.heterogeneous_p1 = Some([0.05, 0.5]);
            spec.replications = 50;
            spec.config.horizon_slots = 101_000;
        }
        other => return Err(ExperimentError::UnknownPreset(other.to_string())),
    }
    spec.validate()?;
    Ok(spec)
}
