//! The computations behind the subcommands, independent of argument parsing
//! and file output.

use std::time::Instant;

use rayon::prelude::*;
use snawave_core::regularity::default_skip_coarse;
use snawave_core::sna::{
    epsilon_of_sigma, generate_orbit_mesh, lyapunov_vertical, transfer_eval, Angle, OrbitMesh, SkewProductParams,
    DEFAULT_LYAPUNOV_POINTS, DEFAULT_SEED, DEFAULT_TRANSIENT,
};
use snawave_core::weierstrass::{theoretical_regularity, weierstrass_mesh, SamplingDomain, WeierstrassParams};
use snawave_core::{
    daubechies_filter, estimate_from_decomposition, estimate_regularity, fwt_forward, init_coeffs, DyadicMesh,
    Error as CoreError, EstimatorConfig, RegularityEstimate, WaveletDecomposition,
};

use crate::error::{AppError, AppResult};

pub const CALIBRATION_A_RANGE: (f64, f64) = (0.56745, 0.86475);
pub const CALIBRATION_POINTS: usize = 16;
/// Exponent at which the sweep tracks the wavelet norm constant (`Reg = 1`).
pub const DEFAULT_NORM_TAU: f64 = 1.5;
pub const SCAN_ORDERS: [usize; 9] = [4, 6, 8, 10, 12, 14, 16, 18, 20];

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| if i == n - 1 { stop } else { start + (stop - start) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

pub fn default_calibration_grid() -> Vec<f64> {
    linspace(CALIBRATION_A_RANGE.0, CALIBRATION_A_RANGE.1, CALIBRATION_POINTS)
}

/// `σ = 1 + k/256`, `k = 1..=256`.
pub fn default_sigma_grid() -> Vec<f64> {
    (1..=256).map(|k| 1.0 + k as f64 / 256.0).collect()
}

/// Runs `f` over `items` on `workers` threads (0: one per core), keeping input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync + Send) -> AppResult<Vec<R>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| AppError::Usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationSettings {
    pub b: f64,
    pub depth: u32,
    pub estimator: EstimatorConfig,
    pub domain: SamplingDomain,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings {
            b: 2.0,
            depth: 22,
            estimator: EstimatorConfig {
                skip_fine: snawave_core::weierstrass::CALIBRATION_SKIP_FINE,
                ..EstimatorConfig::with_p(10)
            },
            domain: SamplingDomain::Period,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationRow {
    pub a: f64,
    pub b: f64,
    pub s_theoretical: f64,
    pub estimate: RegularityEstimate,
}

impl CalibrationRow {
    pub fn abs_error(&self) -> f64 {
        (self.estimate.s - self.s_theoretical).abs()
    }
}

pub fn calibrate_point(a: f64, settings: &CalibrationSettings) -> AppResult<CalibrationRow> {
    let params = WeierstrassParams::new(a, settings.b)?;
    let mesh = weierstrass_mesh(&params, settings.depth, settings.domain)?;
    let estimate = estimate_regularity(&mesh, &settings.estimator)?;
    Ok(CalibrationRow { a, b: settings.b, s_theoretical: theoretical_regularity(&params), estimate })
}

/// Validates the whole grid before any work is done.
pub fn calibrate(grid: &[f64], settings: &CalibrationSettings, workers: usize) -> AppResult<Vec<CalibrationRow>> {
    if grid.is_empty() {
        return Err(AppError::Usage("empty A grid".into()));
    }
    for &a in grid {
        WeierstrassParams::new(a, settings.b)
            .map_err(|e| AppError::Usage(format!("A = {a}, B = {}: {e}", settings.b)))?;
    }
    par_map(grid, workers, |&a| calibrate_point(a, settings))?.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnaSettings {
    pub transient: usize,
    pub depth: u32,
    pub estimator: EstimatorConfig,
    pub seed: u64,
    pub x0: Option<f64>,
    pub lyapunov_points: usize,
}

impl Default for SnaSettings {
    fn default() -> Self {
        SnaSettings {
            transient: DEFAULT_TRANSIENT,
            depth: 20,
            estimator: EstimatorConfig::with_p(16),
            seed: DEFAULT_SEED,
            x0: None,
            lyapunov_points: DEFAULT_LYAPUNOV_POINTS,
        }
    }
}

impl SnaSettings {
    pub fn params(&self, sigma: f64, epsilon: f64) -> AppResult<SkewProductParams> {
        let p = SkewProductParams::new(sigma, epsilon)?.with_seed(self.seed);
        Ok(match self.x0 {
            Some(x0) => p.with_x0(x0)?,
            None => p,
        })
    }
}

/// One attractor: the orbit mesh and what the estimator made of it.
#[derive(Debug)]
pub struct SnaRun {
    pub params: SkewProductParams,
    pub kappa: f64,
    pub orbit: OrbitMesh,
    pub estimate: Result<RegularityEstimate, CoreError>,
}

impl SnaRun {
    /// The exponent of `x = 0` is not positive: the attractor is that circle.
    pub fn kappa_warning(&self) -> bool {
        self.kappa <= 0.0
    }

    pub fn mesh(&self) -> AppResult<DyadicMesh> {
        Ok(DyadicMesh::new(self.orbit.values().to_vec())?)
    }

    /// Decomposition with the filter the estimator settled on.
    pub fn decomposition(&self) -> AppResult<Option<(usize, WaveletDecomposition)>> {
        let Ok(est) = &self.estimate else { return Ok(None) };
        let filter = daubechies_filter(est.vanishing_moments)?;
        let dec = fwt_forward(&init_coeffs(&self.mesh()?), &filter)?;
        Ok(Some((est.vanishing_moments, dec)))
    }
}

pub fn run_sna(sigma: f64, epsilon: f64, settings: &SnaSettings) -> AppResult<SnaRun> {
    let params = settings.params(sigma, epsilon)?;
    let kappa = lyapunov_vertical(&params, settings.lyapunov_points)?;
    let orbit = generate_orbit_mesh(&params, settings.transient, settings.depth)?;
    let mesh = DyadicMesh::new(orbit.values().to_vec())?;
    let estimate = estimate_regularity(&mesh, &settings.estimator);
    Ok(SnaRun { params, kappa, orbit, estimate })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderFit {
    pub p: usize,
    pub tau: f64,
    pub s: f64,
    pub pearson: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub sigma: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub estimate: Result<RegularityEstimate, String>,
    /// `log2 C` at the fixed exponent of [`SweepSettings::norm_tau`].
    pub log2_norm: Option<f64>,
    pub orders: Vec<OrderFit>,
    pub wall_time_seconds: f64,
}

impl SweepRow {
    pub fn s(&self) -> Option<f64> {
        self.estimate.as_ref().ok().map(|e| e.s)
    }

    pub fn best_order(&self) -> Option<&OrderFit> {
        self.orders.iter().filter(|o| o.pearson.is_finite()).max_by(|a, b| a.pearson.total_cmp(&b.pearson))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSettings {
    pub sna: SnaSettings,
    pub scan_orders: bool,
    pub norm_tau: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings { sna: SnaSettings::default(), scan_orders: false, norm_tau: DEFAULT_NORM_TAU }
    }
}

/// `(σ, ε(σ))` in increasing `σ`.
pub fn sigma_points(grid: &[f64]) -> AppResult<Vec<(f64, f64)>> {
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    sorted
        .into_iter()
        .map(|s| epsilon_of_sigma(s).map(|e| (s, e)).map_err(|_| AppError::Usage(format!("sigma = {s} is outside [1, 2]"))))
        .collect()
}

/// `(σ, ε)` at fixed `σ` in decreasing `ε`.
pub fn epsilon_points(sigma: f64, grid: &[f64]) -> AppResult<Vec<(f64, f64)>> {
    let mut sorted = grid.to_vec();
    if sorted.iter().any(|&e| e < 0.0) {
        return Err(AppError::Usage("epsilon values must be non-negative".into()));
    }
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.dedup();
    Ok(sorted.into_iter().map(|e| (sigma, e)).collect())
}

fn scan_orders(mesh: &DyadicMesh, base: &EstimatorConfig) -> Vec<OrderFit> {
    let coeffs = init_coeffs(mesh);
    SCAN_ORDERS
        .iter()
        .map(|&p| {
            let config = EstimatorConfig {
                skip_coarse: Some(base.skip_coarse.unwrap_or_else(|| default_skip_coarse(p, mesh.depth() as usize))),
                ..*base
            };
            let fit = daubechies_filter(p)
                .and_then(|f| fwt_forward(&coeffs, &f))
                .and_then(|dec| estimate_from_decomposition(&dec, p, &config));
            match fit {
                Ok(e) => OrderFit { p, tau: e.tau, s: e.s, pearson: e.pearson },
                Err(_) => OrderFit { p, tau: f64::NAN, s: f64::NAN, pearson: f64::NAN },
            }
        })
        .collect()
}

pub fn sweep_point(sigma: f64, epsilon: f64, settings: &SweepSettings) -> SweepRow {
    let start = Instant::now();
    let mut row = SweepRow {
        sigma,
        epsilon,
        kappa: f64::NAN,
        estimate: Err(String::new()),
        log2_norm: None,
        orders: Vec::new(),
        wall_time_seconds: 0.0,
    };
    match run_sna(sigma, epsilon, &settings.sna) {
        Ok(run) => {
            row.kappa = run.kappa;
            row.log2_norm = run.estimate.as_ref().ok().and_then(|e| e.series.log2_norm_at(settings.norm_tau));
            if settings.scan_orders {
                if let Ok(mesh) = run.mesh() {
                    row.orders = scan_orders(&mesh, &settings.sna.estimator);
                }
            }
            row.estimate = run.estimate.map_err(|e| e.to_string());
        }
        Err(e) => row.estimate = Err(e.to_string()),
    }
    row.wall_time_seconds = start.elapsed().as_secs_f64();
    row
}

/// One row per point, in input order; failures are kept in their row.
pub fn sweep(points: &[(f64, f64)], settings: &SweepSettings, workers: usize) -> AppResult<Vec<SweepRow>> {
    if points.is_empty() {
        return Err(AppError::Usage("empty sweep grid".into()));
    }
    par_map(points, workers, |&(s, e)| sweep_point(s, e, settings))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferSample {
    pub k: usize,
    pub theta: f64,
    pub phi: f64,
}

/// `φ_k` for `k = 0..=k_max` on `points` equally spaced angles.
pub fn transfer_table(params: &SkewProductParams, c: f64, k_max: usize, points: usize) -> AppResult<Vec<TransferSample>> {
    if points == 0 {
        return Err(AppError::Usage("transfer grid needs at least one point".into()));
    }
    let mut out = Vec::with_capacity((k_max + 1) * points);
    for k in 0..=k_max {
        for i in 0..points {
            let theta = i as f64 / points as f64;
            let phi = transfer_eval(params, k, Angle::from_turns(theta), c)?;
            out.push(TransferSample { k, theta, phi });
        }
    }
    Ok(out)
}
