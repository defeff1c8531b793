use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::link::{Link, TbOutcome};
use super::metrics::wilson_interval;
use crate::error::{Error, Result};

/// Trials are run in batches of this size; early stopping is only checked
/// at batch boundaries, so the stopping point never depends on threads.
pub const BATCH: u64 = 100;
/// Early stop once the BLER half-width falls below this fraction of it.
pub const EARLY_STOP_REL_HALF_WIDTH: f64 = 0.1;

/// One CSV row. Column order is the frozen schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub snr_db: f64,
    pub precoder: String,
    pub receiver: String,
    pub mapping: String,
    pub nu: f64,
    pub bler: f64,
    pub bler_ci_lo: f64,
    pub bler_ci_hi: f64,
    pub cb_error_rate: f64,
    pub throughput_bps: f64,
    /// Half-width of the 95% normal interval on the mean throughput.
    pub throughput_ci: f64,
    pub trials: u64,
    pub seed: u64,
}

impl PointResult {
    pub fn tb_errors(&self) -> u64 {
        (self.bler * self.trials as f64).round() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub points: Vec<PointResult>,
}

/// Monte-Carlo estimate at one SNR.
pub fn run_point(cfg: &SimConfig, snr_db: f64) -> Result<PointResult> {
    run_point_on(&Link::new(cfg)?, snr_db)
}

pub fn run_point_on(link: &Link, snr_db: f64) -> Result<PointResult> {
    let cfg = &link.cfg;
    let mut outcomes: Vec<TbOutcome> = Vec::with_capacity(cfg.trials as usize);
    let mut start = 0;
    while start < cfg.trials {
        let end = (start + BATCH).min(cfg.trials);
        let batch = (start..end)
            .into_par_iter()
            .map(|k| link.run_trial(k, snr_db))
            .collect::<Result<Vec<_>>>()?;
        outcomes.extend(batch);
        start = end;
        if cfg.early_stop {
            let n = outcomes.len() as u64;
            let errs = outcomes.iter().filter(|o| !o.tb_ok).count() as u64;
            let (lo, hi) = wilson_interval(errs, n);
            let p = errs as f64 / n as f64;
            if errs > 0 && (hi - lo) / 2.0 < EARLY_STOP_REL_HALF_WIDTH * p {
                break;
            }
        }
    }
    Ok(summarize(cfg, link, snr_db, &outcomes))
}

fn summarize(cfg: &SimConfig, link: &Link, snr_db: f64, outcomes: &[TbOutcome]) -> PointResult {
    let n = outcomes.len() as u64;
    let errs = outcomes.iter().filter(|o| !o.tb_ok).count() as u64;
    let cb_errs: usize = outcomes.iter().map(|o| o.cb_errors).sum();
    let (lo, hi) = wilson_interval(errs, n);
    // Sequential sums in trial order keep the result bit-identical.
    let mean = outcomes.iter().map(|o| o.throughput_bps).sum::<f64>() / n as f64;
    let var = if n > 1 {
        outcomes.iter().map(|o| (o.throughput_bps - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    PointResult {
        snr_db,
        precoder: link.precoder.to_string(),
        receiver: cfg.receiver.to_string(),
        mapping: link.mapping.scheme.to_string(),
        nu: cfg.nu,
        bler: errs as f64 / n as f64,
        bler_ci_lo: lo,
        bler_ci_hi: hi,
        cb_error_rate: cb_errs as f64 / (n as f64 * cfg.n_cb as f64),
        throughput_bps: mean,
        throughput_ci: 1.959_963_984_540_054 * (var / n as f64).sqrt(),
        trials: n,
        seed: cfg.seed,
    }
}

/// All SNR points in order; `on_point` sees each row as soon as it exists.
pub fn run_sweep_with(cfg: &SimConfig, mut on_point: impl FnMut(&PointResult) -> Result<()>) -> Result<SimResult> {
    let link = Link::new(cfg)?;
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for &snr in &cfg.snr_db {
        let p = run_point_on(&link, snr)?;
        on_point(&p)?;
        points.push(p);
    }
    Ok(SimResult { points })
}

pub fn run_sweep(cfg: &SimConfig) -> Result<SimResult> {
    run_sweep_with(cfg, |_| Ok(()))
}

/// Runs on a dedicated pool of `threads` workers.
pub fn run_sweep_threads(cfg: &SimConfig, threads: usize) -> Result<SimResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| run_sweep(cfg))
}

/// Streams rows into a CSV writer, flushing after each point.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(w: W) -> Self {
        Self {
            inner: csv::Writer::from_writer(w),
        }
    }

    pub fn push(&mut self, p: &PointResult) -> Result<()> {
        self.inner.serialize(p).map_err(|e| Error::Io(e.to_string()))?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn emit_csv(result: &SimResult, path: &Path) -> Result<()> {
    let mut sink = CsvSink::new(std::fs::File::create(path)?);
    for p in &result.points {
        sink.push(p)?;
    }
    Ok(())
}

pub fn csv_string(result: &SimResult) -> String {
    let mut buf = Vec::new();
    {
        let mut sink = CsvSink::new(&mut buf);
        for p in &result.points {
            sink.push(p).expect("in-memory write");
        }
    }
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn read_csv(path: &Path) -> Result<Vec<PointResult>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Io(e.to_string())))
        .collect()
}
