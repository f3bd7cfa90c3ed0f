//! Plot-ready CSV tables. Column sets are listed in `docs/formats.md`.

use std::path::Path;

use snawave_core::regularity::Exclusion;
use snawave_core::sna::OrbitMesh;
use snawave_core::RegularityEstimate;

use crate::error::{AppError, AppResult};
use crate::format::{csv_error, csv_writer, fmt_f64};
use crate::runs::{CalibrationRow, SnaRun, SweepRow, TransferSample};

struct Table {
    path: std::path::PathBuf,
    w: csv::Writer<std::io::BufWriter<std::fs::File>>,
}

impl Table {
    fn create(path: &Path, header: &[&str]) -> AppResult<Table> {
        let mut t = Table { path: path.to_path_buf(), w: csv_writer(path)? };
        t.row(header.iter().map(|s| s.to_string()))?;
        Ok(t)
    }

    fn row(&mut self, fields: impl IntoIterator<Item = String>) -> AppResult<()> {
        self.w.write_record(fields).map_err(|e| csv_error(&self.path, e))
    }

    fn finish(mut self) -> AppResult<()> {
        self.w.flush().map_err(|e| AppError::io(&self.path, e))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

fn exclusion(e: Option<Exclusion>) -> &'static str {
    match e {
        None => "",
        Some(Exclusion::Coarse) => "coarse",
        Some(Exclusion::Fine) => "fine",
        Some(Exclusion::ZeroSup) => "zero",
    }
}

pub const CALIBRATION_HEADER: [&str; 8] =
    ["A", "s_theoretical", "s_estimated", "abs_error", "pearson", "B", "p", "admissible"];

pub fn write_calibration(path: &Path, rows: &[CalibrationRow]) -> AppResult<()> {
    let mut t = Table::create(path, &CALIBRATION_HEADER)?;
    for r in rows {
        t.row([
            fmt_f64(r.a),
            fmt_f64(r.s_theoretical),
            fmt_f64(r.estimate.s),
            fmt_f64(r.abs_error()),
            fmt_f64(r.estimate.pearson),
            fmt_f64(r.b),
            r.estimate.vanishing_moments.to_string(),
            flag(r.estimate.admissible),
        ])?;
    }
    t.finish()
}

pub const LEVELS_HEADER: [&str; 6] = ["key", "j", "minus_j", "log2_sup", "excluded", "fit"];

/// Per-level series of several estimates, each tagged by `key` (A or σ).
pub fn write_levels<'a>(path: &Path, items: impl IntoIterator<Item = (f64, &'a RegularityEstimate)>) -> AppResult<()> {
    let mut t = Table::create(path, &LEVELS_HEADER)?;
    for (key, est) in items {
        for e in est.series.entries() {
            let x = -(e.level as f64);
            t.row([
                fmt_f64(key),
                e.level.to_string(),
                fmt_f64(x),
                fmt_f64(e.log2_sup),
                exclusion(e.excluded).to_string(),
                fmt_f64(est.tau * x + est.log2_c),
            ])?;
        }
    }
    t.finish()
}

pub const ESTIMATE_HEADER: [&str; 17] = [
    "sigma",
    "epsilon",
    "tau",
    "s",
    "log2C",
    "pearson",
    "p",
    "levels_used",
    "admissible",
    "linear_evidence",
    "reliable",
    "kappa",
    "kappa_warning",
    "J",
    "N0",
    "displaced",
    "status",
];

pub fn write_estimate(path: &Path, run: &SnaRun, transient: usize) -> AppResult<()> {
    let mut t = Table::create(path, &ESTIMATE_HEADER)?;
    let est = run.estimate.as_ref().ok();
    t.row([
        fmt_f64(run.params.sigma()),
        fmt_f64(run.params.epsilon()),
        opt(est.map(|e| e.tau)),
        opt(est.map(|e| e.s)),
        opt(est.map(|e| e.log2_c)),
        opt(est.map(|e| e.pearson)),
        est.map(|e| e.vanishing_moments.to_string()).unwrap_or_default(),
        est.map(|e| e.levels_used.to_string()).unwrap_or_default(),
        est.map(|e| flag(e.admissible)).unwrap_or_default(),
        est.map(|e| flag(e.linear_evidence)).unwrap_or_default(),
        est.map(|e| flag(e.reliable)).unwrap_or_default(),
        fmt_f64(run.kappa),
        flag(run.kappa_warning()),
        run.orbit.depth().to_string(),
        transient.to_string(),
        run.orbit.stats().displaced.to_string(),
        match &run.estimate {
            Ok(_) => "ok".to_string(),
            Err(e) => e.to_string(),
        },
    ])?;
    t.finish()
}

pub fn write_scatter(path: &Path, orbit: &OrbitMesh) -> AppResult<()> {
    let mut t = Table::create(path, &["theta", "x"])?;
    for (theta, x) in orbit.scatter() {
        t.row([fmt_f64(theta), fmt_f64(x)])?;
    }
    t.finish()
}

pub const SWEEP_HEADER: [&str; 12] =
    ["sigma", "epsilon", "tau", "s", "log2C", "pearson", "p", "admissible", "levels_used", "kappa", "status", "wall_time_seconds"];

/// The timing column is only written on request so that reruns are byte-identical.
pub fn write_sweep(path: &Path, rows: &[SweepRow], record_timing: bool) -> AppResult<()> {
    let header = if record_timing { &SWEEP_HEADER[..] } else { &SWEEP_HEADER[..11] };
    let mut t = Table::create(path, header)?;
    for r in rows {
        let est = r.estimate.as_ref().ok();
        let mut fields = vec![
            fmt_f64(r.sigma),
            fmt_f64(r.epsilon),
            opt(est.map(|e| e.tau)),
            opt(est.map(|e| e.s)),
            opt(est.map(|e| e.log2_c)),
            opt(est.map(|e| e.pearson)),
            est.map(|e| e.vanishing_moments.to_string()).unwrap_or_default(),
            est.map(|e| flag(e.admissible)).unwrap_or_default(),
            est.map(|e| e.levels_used.to_string()).unwrap_or_default(),
            fmt_f64(r.kappa),
            match &r.estimate {
                Ok(_) => "ok".to_string(),
                Err(e) => e.clone(),
            },
        ];
        if record_timing {
            fields.push(fmt_f64(r.wall_time_seconds));
        }
        t.row(fields)?;
    }
    t.finish()
}

pub const NORM_HEADER: [&str; 6] = ["sigma", "epsilon", "log2C", "norm_tau", "log2_norm", "s"];

pub fn write_norms(path: &Path, rows: &[SweepRow], norm_tau: f64) -> AppResult<()> {
    let mut t = Table::create(path, &NORM_HEADER)?;
    for r in rows {
        let est = r.estimate.as_ref().ok();
        t.row([
            fmt_f64(r.sigma),
            fmt_f64(r.epsilon),
            opt(est.map(|e| e.log2_c)),
            fmt_f64(norm_tau),
            opt(r.log2_norm),
            opt(est.map(|e| e.s)),
        ])?;
    }
    t.finish()
}

pub const ORDERS_HEADER: [&str; 7] = ["sigma", "epsilon", "p", "tau", "s", "pearson", "best"];

pub fn write_orders(path: &Path, rows: &[SweepRow]) -> AppResult<()> {
    let mut t = Table::create(path, &ORDERS_HEADER)?;
    for r in rows {
        let best = r.best_order().map(|o| o.p);
        for o in &r.orders {
            t.row([
                fmt_f64(r.sigma),
                fmt_f64(r.epsilon),
                o.p.to_string(),
                fmt_f64(o.tau),
                fmt_f64(o.s),
                fmt_f64(o.pearson),
                flag(best == Some(o.p)),
            ])?;
        }
    }
    t.finish()
}

pub fn write_transfer(path: &Path, samples: &[TransferSample]) -> AppResult<()> {
    let mut t = Table::create(path, &["k", "theta", "phi"])?;
    for s in samples {
        t.row([s.k.to_string(), fmt_f64(s.theta), fmt_f64(s.phi)])?;
    }
    t.finish()
}
