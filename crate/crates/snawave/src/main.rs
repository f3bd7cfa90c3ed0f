use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use snawave::config::{parse_count, parse_grid, Config};
use snawave::error::{AppError, AppResult};
use snawave::format::{write_decomposition, write_mesh, Format, StoredDecomposition};
use snawave::runs::{
    calibrate, default_calibration_grid, default_sigma_grid, epsilon_points, run_sna, sigma_points, sweep,
    transfer_table, CalibrationSettings, SnaSettings, SweepSettings, DEFAULT_NORM_TAU,
};
use snawave::tables;
use snawave_core::sna::{epsilon_of_sigma, SkewProductParams, DEFAULT_SEED, DEFAULT_TRANSIENT};
use snawave_core::weierstrass::{weierstrass_mesh, SamplingDomain, WeierstrassParams, CALIBRATION_SKIP_FINE};
use snawave_core::{EstimatorConfig, Error as CoreError};

// a parsed grid is one argument value, not a repeated flag
type Grid = Vec<f64>;

const OUT_ENV: &str = "SNAWAVE_OUT";

#[derive(Parser)]
#[command(name = "snawave", version, about = "Wavelet regularity of Weierstraß functions and pinched skew-product attractors")]
struct Cli {
    /// Flat `key = value` file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [env: SNAWAVE_OUT] [default: snawave-out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for grids (0: one per core)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Add wall-clock columns (outputs are then no longer reproducible byte for byte)
    #[arg(long, global = true)]
    record_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimator calibration on the Weierstraß family
    Weierstrass(WeierstrassArgs),
    /// Regularity of one attractor
    Sna(SnaArgs),
    /// Regularity along a σ grid with ε = ε(σ), or along an ε grid at fixed σ
    Sweep(SweepArgs),
    /// Iterates of the transfer operator on a uniform angle grid
    Transfer(TransferArgs),
}

#[derive(Args)]
struct EstimatorArgs {
    /// Vanishing moments of the first filter tried
    #[arg(long = "p")]
    p: Option<usize>,
    /// Coarse levels left out of the fit [default: levels with 2^j < 2p - 1]
    #[arg(long)]
    skip_coarse: Option<usize>,
    /// Finest levels left out of the fit
    #[arg(long)]
    skip_fine: Option<usize>,
}

#[derive(Args)]
struct OrbitArgs {
    /// Mesh depth: 2^J points
    #[arg(long = "J")]
    depth: Option<u32>,
    /// Transient iterations
    #[arg(long = "N0", value_parser = parse_count)]
    transient: Option<usize>,
    /// Seed for the initial angle
    #[arg(long)]
    seed: Option<u64>,
    /// Initial fibre value [default: 2σ + 1]
    #[arg(long)]
    x0: Option<f64>,
}

#[derive(Args)]
struct WeierstrassArgs {
    /// Values of A: start:stop:count or a list [default: 0.56745:0.86475:16]
    #[arg(long, value_parser = parse_grid)]
    grid: Option<Grid>,
    /// Frequency ratio B [default: 2]
    #[arg(long = "B")]
    b: Option<f64>,
    /// Mesh depth: 2^J points [default: 22]
    #[arg(long = "J")]
    depth: Option<u32>,
    #[command(flatten)]
    estimator: EstimatorArgs,
    #[arg(long, value_enum)]
    domain: Option<Domain>,
    /// Also write every sampled mesh
    #[arg(long)]
    meshes: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    /// x = 2π n 2^-J, one period
    Period,
    /// x = n 2^-J
    Unit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// σ = 1.5, ε = 0
    Pinched,
    /// σ = 1.699219, ε = 0.039688
    Nopinch,
    /// σ = 1.425781, ε = 0
    Sipinch,
    /// σ = 1.513672, ε = 0.000187
    NearA,
    /// σ = 1.507812, ε = 0.000061
    NearB,
}

impl Preset {
    fn sigma(self) -> f64 {
        match self {
            Preset::Pinched => 1.5,
            Preset::Nopinch => 1.699219,
            Preset::Sipinch => 1.425781,
            Preset::NearA => 1.513672,
            Preset::NearB => 1.507812,
        }
    }
}

#[derive(Args)]
struct SnaArgs {
    /// Parameter σ of the fibre map; required unless --preset is given
    #[arg(long)]
    sigma: Option<f64>,
    /// [default: (σ - 1.5)^2 for σ in (1.5, 2], else 0]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Named parameter point
    #[arg(long, value_enum, conflicts_with = "sigma")]
    preset: Option<Preset>,
    #[command(flatten)]
    orbit: OrbitArgs,
    #[command(flatten)]
    estimator: EstimatorArgs,
    /// Write the (θ, x) attractor samples
    #[arg(long)]
    scatter: bool,
    /// Write the sorted mesh
    #[arg(long)]
    mesh: bool,
    /// Write the wavelet decomposition
    #[arg(long)]
    decomposition: bool,
    /// Prefix of the output files
    #[arg(long, default_value = "sna")]
    name: String,
}

#[derive(Args)]
struct SweepArgs {
    /// σ values: start:stop:count or a list [default: 1+1/256 .. 2, 256 points]
    #[arg(long, value_parser = parse_grid)]
    grid: Option<Grid>,
    /// Sweep ε at the fixed --sigma instead
    #[arg(long, value_parser = parse_grid)]
    epsilon_grid: Option<Grid>,
    /// Fixed σ for --epsilon-grid
    #[arg(long)]
    sigma: Option<f64>,
    #[command(flatten)]
    orbit: OrbitArgs,
    #[command(flatten)]
    estimator: EstimatorArgs,
    /// Fit with p = 4, 6, ..., 20 at every point and report the best Pearson
    #[arg(long)]
    scan_orders: bool,
    /// Exponent for the log2 norm column [default: 1.5]
    #[arg(long)]
    norm_tau: Option<f64>,
    #[arg(long, default_value = "sweep")]
    name: String,
}

#[derive(Args)]
struct TransferArgs {
    /// [default: 1.5]
    #[arg(long)]
    sigma: Option<f64>,
    /// [default: (σ - 1.5)^2 for σ in (1.5, 2], else 0]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Starting constant, above 2σ [default: 5]
    #[arg(long)]
    c: Option<f64>,
    /// Highest iterate [default: 3]
    #[arg(long)]
    k: Option<usize>,
    /// Angles in the grid [default: 4096]
    #[arg(long, value_parser = parse_count)]
    points: Option<usize>,
    #[arg(long, default_value = "transfer")]
    name: String,
}

struct Common {
    out: PathBuf,
    format: Format,
    workers: usize,
    record_timing: bool,
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        _ => Err(format!("not a boolean: {s:?}")),
    }
}

fn pick_flag(cfg: &Config, flag: bool, key: &str) -> AppResult<bool> {
    Ok(flag || cfg.pick_with(None, key, parse_bool)?.unwrap_or(false))
}

fn estimator(cfg: &Config, args: &EstimatorArgs, p: usize, skip_fine: usize) -> AppResult<EstimatorConfig> {
    let p = cfg.pick(args.p, "p")?.unwrap_or(p);
    if !(1..=snawave_core::MAX_VANISHING_MOMENTS).contains(&p) {
        return Err(AppError::Usage(format!("p = {p} is outside 1..=20")));
    }
    Ok(EstimatorConfig {
        skip_coarse: cfg.pick(args.skip_coarse, "skip-coarse")?,
        skip_fine: cfg.pick(args.skip_fine, "skip-fine")?.unwrap_or(skip_fine),
        ..EstimatorConfig::with_p(p)
    })
}

fn depth(cfg: &Config, flag: Option<u32>, default: u32) -> AppResult<u32> {
    let j = cfg.pick(flag, "J")?.unwrap_or(default);
    if !(4..=30).contains(&j) {
        return Err(AppError::Usage(format!("J = {j} is outside 4..=30")));
    }
    Ok(j)
}

fn sna_settings(cfg: &Config, orbit: &OrbitArgs, est: &EstimatorArgs) -> AppResult<SnaSettings> {
    let transient = cfg.pick_with(orbit.transient, "N0", parse_count)?.unwrap_or(DEFAULT_TRANSIENT);
    if transient == 0 {
        return Err(AppError::Usage("N0 must be at least 1".into()));
    }
    Ok(SnaSettings {
        transient,
        depth: depth(cfg, orbit.depth, 20)?,
        estimator: estimator(cfg, est, 16, 0)?,
        seed: cfg.pick(orbit.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        x0: cfg.pick(orbit.x0, "x0")?,
        ..SnaSettings::default()
    })
}

fn default_epsilon(sigma: f64) -> f64 {
    epsilon_of_sigma(sigma).unwrap_or(0.0)
}

fn file(common: &Common, name: &str) -> PathBuf {
    common.out.join(name)
}

fn cmd_weierstrass(args: &WeierstrassArgs, cfg: &Config, common: &Common) -> AppResult<()> {
    let grid = cfg.pick_with(args.grid.clone(), "grid", parse_grid)?.unwrap_or_else(default_calibration_grid);
    let domain = match cfg.pick_with(args.domain, "domain", |s| Domain::from_str(s, true))? {
        Some(Domain::Unit) => SamplingDomain::UnitInterval,
        _ => SamplingDomain::Period,
    };
    let settings = CalibrationSettings {
        b: cfg.pick(args.b, "B")?.unwrap_or(2.0),
        depth: depth(cfg, args.depth, 22)?,
        estimator: estimator(cfg, &args.estimator, 10, CALIBRATION_SKIP_FINE)?,
        domain,
    };
    let meshes = pick_flag(cfg, args.meshes, "meshes")?;
    cfg.finish()?;
    let rows = calibrate(&grid, &settings, common.workers)?;
    tables::write_calibration(&file(common, "weierstrass.csv"), &rows)?;
    tables::write_levels(&file(common, "weierstrass_levels.csv"), rows.iter().map(|r| (r.a, &r.estimate)))?;
    if meshes {
        for r in &rows {
            let params = WeierstrassParams::new(r.a, r.b)?;
            let mesh = weierstrass_mesh(&params, settings.depth, settings.domain)?;
            let name = format!("weierstrass_mesh_A{}.{}", r.a, common.format.extension());
            write_mesh(&file(common, &name), &mesh, common.format)?;
        }
    }
    for r in &rows {
        println!(
            "A = {:<10} s* = {:.6}  s = {:.6}  |err| = {:.6}  pearson = {:.6}  p = {}",
            r.a,
            r.s_theoretical,
            r.estimate.s,
            r.abs_error(),
            r.estimate.pearson,
            r.estimate.vanishing_moments
        );
    }
    Ok(())
}

fn cmd_sna(args: &SnaArgs, cfg: &Config, common: &Common) -> AppResult<()> {
    let preset = cfg.pick_with(args.preset, "preset", |s| Preset::from_str(s, true))?;
    let sigma = match (cfg.pick(args.sigma, "sigma")?, preset) {
        (Some(s), _) => s,
        (None, Some(p)) => p.sigma(),
        (None, None) => return Err(AppError::Usage("--sigma or --preset is required".into())),
    };
    let epsilon = cfg.pick(args.epsilon, "epsilon")?.unwrap_or_else(|| default_epsilon(sigma));
    let settings = sna_settings(cfg, &args.orbit, &args.estimator)?;
    let scatter = pick_flag(cfg, args.scatter, "scatter")?;
    let mesh = pick_flag(cfg, args.mesh, "mesh")?;
    let decomposition = pick_flag(cfg, args.decomposition, "decomposition")?;
    cfg.finish()?;

    let run = run_sna(sigma, epsilon, &settings)?;
    if run.kappa_warning() {
        eprintln!("warning: vertical Lyapunov exponent {:.6} <= 0, the attractor is the circle x = 0", run.kappa);
    }
    let name = &args.name;
    tables::write_estimate(&file(common, &format!("{name}_estimate.csv")), &run, settings.transient)?;
    if let Ok(est) = &run.estimate {
        tables::write_levels(&file(common, &format!("{name}_levels.csv")), [(sigma, est)])?;
    }
    if scatter {
        tables::write_scatter(&file(common, &format!("{name}_scatter.csv")), &run.orbit)?;
    }
    if mesh {
        let path = file(common, &format!("{name}_mesh.{}", common.format.extension()));
        write_mesh(&path, &run.mesh()?, common.format)?;
    }
    if decomposition {
        if let Some((p, dec)) = run.decomposition()? {
            let path = file(common, &format!("{name}_decomposition.{}", common.format.extension()));
            let stored = StoredDecomposition { vanishing_moments: p as u32, decomposition: dec };
            write_decomposition(&path, &stored, common.format)?;
        }
    }
    match &run.estimate {
        Ok(e) => {
            println!(
                "sigma = {sigma}  epsilon = {epsilon}  kappa = {:.6}  s = {:.6}  tau = {:.6}  log2C = {:.6}  pearson = {:.6}  p = {}{}",
                run.kappa,
                e.s,
                e.tau,
                e.log2_c,
                e.pearson,
                e.vanishing_moments,
                if e.admissible { "" } else { "  (not admissible)" }
            );
            if !e.linear_evidence {
                eprintln!("warning: pearson {:.4} below 0.99, weak evidence of linear decay", e.pearson);
            }
            Ok(())
        }
        Err(e) => Err(AppError::Numeric(e.clone())),
    }
}

fn cmd_sweep(args: &SweepArgs, cfg: &Config, common: &Common) -> AppResult<()> {
    let eps_grid = cfg.pick_with(args.epsilon_grid.clone(), "epsilon-grid", parse_grid)?;
    let sigma = cfg.pick(args.sigma, "sigma")?;
    let grid = cfg.pick_with(args.grid.clone(), "grid", parse_grid)?;
    let points = match (eps_grid, sigma, grid) {
        (Some(eps), Some(s), None) => epsilon_points(s, &eps)?,
        (Some(_), None, _) => return Err(AppError::Usage("--epsilon-grid needs --sigma".into())),
        (Some(_), Some(_), Some(_)) => return Err(AppError::Usage("--grid and --epsilon-grid exclude each other".into())),
        (None, Some(_), _) => return Err(AppError::Usage("--sigma is only used with --epsilon-grid".into())),
        (None, None, grid) => sigma_points(&grid.unwrap_or_else(default_sigma_grid))?,
    };
    let settings = SweepSettings {
        sna: sna_settings(cfg, &args.orbit, &args.estimator)?,
        scan_orders: pick_flag(cfg, args.scan_orders, "scan-orders")?,
        norm_tau: cfg.pick(args.norm_tau, "norm-tau")?.unwrap_or(DEFAULT_NORM_TAU),
    };
    cfg.finish()?;

    let rows = sweep(&points, &settings, common.workers)?;
    let name = &args.name;
    tables::write_sweep(&file(common, &format!("{name}.csv")), &rows, common.record_timing)?;
    tables::write_norms(&file(common, &format!("{name}_norm.csv")), &rows, settings.norm_tau)?;
    if settings.scan_orders {
        tables::write_orders(&file(common, &format!("{name}_orders.csv")), &rows)?;
    }
    let failed = rows.iter().filter(|r| r.estimate.is_err()).count();
    println!("{} points, {} failed", rows.len(), failed);
    Ok(())
}

fn cmd_transfer(args: &TransferArgs, cfg: &Config, common: &Common) -> AppResult<()> {
    let sigma = cfg.pick(args.sigma, "sigma")?.unwrap_or(1.5);
    let epsilon = cfg.pick(args.epsilon, "epsilon")?.unwrap_or_else(|| default_epsilon(sigma));
    let c = cfg.pick(args.c, "c")?.unwrap_or(5.0);
    let k = cfg.pick(args.k, "k")?.unwrap_or(3);
    let points = cfg.pick_with(args.points, "points", parse_count)?.unwrap_or(4096);
    cfg.finish()?;
    let params = SkewProductParams::new(sigma, epsilon)?;
    let samples = transfer_table(&params, c, k, points)?;
    tables::write_transfer(&file(common, &format!("{}.csv", args.name)), &samples)?;
    Ok(())
}

fn ensure_dir(path: &Path) -> AppResult<()> {
    std::fs::create_dir_all(path).map_err(|e| AppError::io(path, e))
}

fn run(cli: Cli) -> AppResult<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out = cfg
        .pick(cli.out.clone(), "out")?
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("snawave-out"));
    let common = Common {
        out,
        format: cfg.pick_with(cli.format, "format", |s| Format::from_str(s, true))?.unwrap_or_default(),
        workers: cfg.pick(cli.workers, "workers")?.unwrap_or(0),
        record_timing: pick_flag(&cfg, cli.record_timing, "record-timing")?,
    };
    ensure_dir(&common.out)?;
    match &cli.command {
        Command::Weierstrass(a) => cmd_weierstrass(a, &cfg, &common),
        Command::Sna(a) => cmd_sna(a, &cfg, &common),
        Command::Sweep(a) => cmd_sweep(a, &cfg, &common),
        Command::Transfer(a) => cmd_transfer(a, &cfg, &common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, AppError::Numeric(CoreError::DegenerateInput)) {
                eprintln!("note: the mesh carries no detail at any usable level");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
