//! Command-line front end for the band-gap entanglement dynamics crate.
//!
//! Exit codes: 0 on success, 2 for invalid arguments or configuration,
//! 3 for numerical failures (reported with context).

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbg_dynamics::amplitude::{
    alpha_from_physical, steady_amplitude, PhysicalParams, ReservoirParams,
};
use pbg_dynamics::entanglement::{
    esd_beta_threshold, esd_time, BellFamily, EsdOptions, InitialBellState,
};
use pbg_dynamics::sweep::{
    csv_string, grid, run_figure, run_oracle_compare, run_sweep, FigureOverrides, OracleSettings,
    SweepSpec,
};
use pbg_dynamics::Error as CoreError;

#[derive(Parser)]
#[command(name = "pbg", version, about = "Entanglement dynamics near a photonic band edge")]
struct Cli {
    /// Flat key=value configuration file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GridArgs {
    /// beta^2 grid as start:stop:step (dimensionless, in [0,1]).
    #[arg(long, value_name = "S:E:STEP")]
    beta2_grid: Option<String>,

    /// alpha^2 t grid as start:stop:step.
    #[arg(long, value_name = "S:E:STEP")]
    t_grid: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also run the discretized-reservoir oracle over the same grid.
    #[arg(long)]
    oracle: bool,

    /// Number of reservoir modes for the oracle.
    #[arg(long)]
    n_modes: Option<usize>,

    /// Band extent above the edge for the oracle, in units of alpha^2.
    #[arg(long)]
    cutoff_w: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce one of the preset figures (1-7) as CSV plus a plot script.
    Figure {
        /// Figure number, 1 through 7.
        id: u8,
        #[command(flatten)]
        grids: GridArgs,
    },
    /// Evaluate a concurrence sweep over (beta^2, alpha^2 t).
    Sweep {
        /// Initial-state family: phi (beta|ge>+gamma|eg>) or psi (beta|gg>+gamma|ee>).
        #[arg(long)]
        family: Option<String>,
        /// Detuning in units of alpha^2 (negative = inside the gap).
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[command(flatten)]
        grids: GridArgs,
    },
    /// Largest beta^2 with finite-time disentanglement of the psi family.
    EsdThreshold {
        /// Detuning in units of alpha^2.
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Scan horizon for the time-domain cross-check.
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Integrate the discretized reservoir and compare against the analytic amplitude.
    OracleCompare {
        /// Detuning in units of alpha^2.
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Number of reservoir modes.
        #[arg(long)]
        n_modes: Option<usize>,
        /// Band extent above the edge, in units of alpha^2.
        #[arg(long)]
        cutoff_w: Option<f64>,
        /// End of the comparison window (alpha^2 t).
        #[arg(long)]
        t_end: Option<f64>,
        /// Re-run with doubled n_modes and report both deviations.
        #[arg(long)]
        refine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert physical reservoir inputs to the dimensionless parameters.
    AlphaFromPhysical {
        /// Atomic transition frequency (s^-1).
        #[arg(long)]
        omega0: f64,
        /// Band-edge frequency (s^-1).
        #[arg(long)]
        omega_c: f64,
        /// Dispersion curvature A (m^2 s^-1).
        #[arg(long)]
        curvature: f64,
        /// Atomic dipole moment.
        #[arg(long)]
        dipole: f64,
        /// Vacuum dielectric constant.
        #[arg(long, default_value_t = 8.8541878128e-12)]
        epsilon0: f64,
        /// Band-edge wavevector (carried along, no effect on the dynamics).
        #[arg(long, default_value_t = 0.0)]
        k0: f64,
    },
}

enum CliError {
    /// Bad arguments or configuration: exit 2.
    Usage(String),
    /// Numerical failure while computing: exit 3.
    Numeric(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParam(_) | CoreError::ResourceCap(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Flat key=value configuration, lowest-precedence source of defaults.
#[derive(Default)]
struct Config(HashMap<String, String>);

impl Config {
    fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected key=value, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        const KNOWN: &[&str] = &[
            "family", "delta", "beta2-grid", "t-grid", "out", "jobs", "oracle", "n-modes",
            "cutoff-w", "horizon", "t-end",
        ];
        for k in map.keys() {
            if !KNOWN.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("unknown config key `{k}`")));
            }
        }
        Ok(Self(map))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    fn get_str(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(|s| s.as_str())
    }
}

fn parse_grid_range(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "{what}: expected start:stop:step, got `{s}`"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: `{p}` is not a number")))
        })
        .collect::<Result<_, _>>()?;
    Ok(grid(nums[0], nums[1], nums[2])?)
}

fn parse_family(s: &str) -> Result<BellFamily, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "phi" => Ok(BellFamily::PhiOdd),
        "psi" => Ok(BellFamily::PsiEven),
        other => Err(CliError::Usage(format!(
            "family must be `phi` or `psi`, got `{other}`"
        ))),
    }
}

struct ResolvedGrids {
    beta_sq: Option<Vec<f64>>,
    t: Option<Vec<f64>>,
    out: PathBuf,
    oracle: Option<OracleSettings>,
}

fn resolve_grids(args: &GridArgs, cfg: &Config) -> Result<ResolvedGrids, CliError> {
    let beta_sq = match args.beta2_grid.as_deref().or(cfg.get_str("beta2-grid")) {
        Some(s) => Some(parse_grid_range(s, "--beta2-grid")?),
        None => None,
    };
    let t = match args.t_grid.as_deref().or(cfg.get_str("t-grid")) {
        Some(s) => Some(parse_grid_range(s, "--t-grid")?),
        None => None,
    };
    let out = args
        .out
        .clone()
        .or_else(|| cfg.get_str("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("output"));
    let oracle_enabled = args.oracle || cfg.get::<bool>("oracle")?.unwrap_or(false);
    let oracle = if oracle_enabled {
        let mut settings = OracleSettings::default();
        if let Some(n) = args.n_modes.or(cfg.get("n-modes")?) {
            settings.n_modes = n;
        }
        if let Some(w) = args.cutoff_w.or(cfg.get("cutoff-w")?) {
            settings.cutoff_w = w;
        }
        Some(settings)
    } else {
        None
    };
    Ok(ResolvedGrids { beta_sq, t, out, oracle })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_ref())?;
    let jobs = match cli.jobs.or(cfg.get("jobs")?) {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => Some(n),
        None => None,
    };
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))?;
    }

    match cli.command {
        Command::Figure { id, grids } => {
            let r = resolve_grids(&grids, &cfg)?;
            let overrides = FigureOverrides {
                beta_sq_grid: r.beta_sq,
                t_grid: r.t,
                oracle: r.oracle,
            };
            let files = run_figure(id, &overrides, &r.out)?;
            println!("wrote {}", files.csv.display());
            println!("wrote {}", files.script.display());
        }
        Command::Sweep { family, delta, grids } => {
            let family = family
                .as_deref()
                .or(cfg.get_str("family"))
                .ok_or_else(|| CliError::Usage("--family is required (phi|psi)".into()))?;
            let family = parse_family(family)?;
            let delta = delta
                .or(cfg.get("delta")?)
                .ok_or_else(|| CliError::Usage("--delta is required (units of alpha^2)".into()))?;
            let r = resolve_grids(&grids, &cfg)?;
            let spec = SweepSpec {
                family,
                delta_over_alpha_sq: delta,
                beta_sq_grid: r.beta_sq.unwrap_or(grid(0.0, 1.0, 0.02)?),
                t_grid: r.t.unwrap_or(grid(0.0, 15.0, 0.05)?),
                oracle: r.oracle,
            };
            let records = run_sweep(&spec)?;
            std::fs::create_dir_all(&r.out).map_err(CoreError::from)?;
            let path = r.out.join("sweep.csv");
            std::fs::write(&path, csv_string(&records)).map_err(CoreError::from)?;
            println!("wrote {} ({} records)", path.display(), records.len());
        }
        Command::EsdThreshold { delta, horizon } => {
            let delta = delta
                .or(cfg.get("delta")?)
                .ok_or_else(|| CliError::Usage("--delta is required (units of alpha^2)".into()))?;
            let params = ReservoirParams::dimensionless(delta)?;
            let threshold = esd_beta_threshold(&params)?;
            let c_inf = steady_amplitude(&params)?;
            println!("delta/alpha^2    = {delta}");
            println!("steady |c|       = {c_inf:.6}");
            println!("beta^2 threshold = {threshold:.4}");
            let opts = EsdOptions {
                horizon: horizon.or(cfg.get("horizon")?).unwrap_or(50.0),
                ..EsdOptions::default()
            };
            for (side, b2) in [("below", threshold - 0.05), ("above", threshold + 0.05)] {
                if !(0.0..=1.0).contains(&b2) {
                    continue;
                }
                let st = InitialBellState::new(BellFamily::PsiEven, b2.sqrt(), 0.0)?;
                match esd_time(&st, &params, &opts) {
                    Ok(Some(t)) => println!("  {side} (beta^2={b2:.3}): death at alpha^2 t = {t:.3}"),
                    Ok(None) => println!("  {side} (beta^2={b2:.3}): no finite-time death"),
                    Err(e) => println!("  {side} (beta^2={b2:.3}): {e}"),
                }
            }
        }
        Command::OracleCompare { delta, n_modes, cutoff_w, t_end, refine, out } => {
            let delta = delta
                .or(cfg.get("delta")?)
                .ok_or_else(|| CliError::Usage("--delta is required (units of alpha^2)".into()))?;
            let params = ReservoirParams::dimensionless(delta)?;
            let mut settings = OracleSettings::default();
            if let Some(n) = n_modes.or(cfg.get("n-modes")?) {
                settings.n_modes = n;
            }
            if let Some(w) = cutoff_w.or(cfg.get("cutoff-w")?) {
                settings.cutoff_w = w;
            }
            let t_end = t_end.or(cfg.get("t-end")?).unwrap_or(10.0);
            let out = out
                .or_else(|| cfg.get_str("out").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("output"));
            let summary = run_oracle_compare(&params, &settings, t_end, &out)?;
            println!("kernel max rel err = {:.4e}", summary.kernel.max_rel_err);
            println!(
                "max |c| deviation  = {:.4e} on alpha^2 t in [{}, {}]",
                summary.max_deviation, summary.window.0, summary.window.1
            );
            println!("wrote {}", summary.csv.display());
            println!("wrote {}", summary.report.display());
            if refine {
                let refined = OracleSettings { n_modes: settings.n_modes * 2, ..settings };
                let out2 = out.join("refined");
                let s2 = run_oracle_compare(&params, &refined, t_end, &out2)?;
                println!(
                    "refined (n_modes={}): mean deviation {:.4e} -> {:.4e}",
                    refined.n_modes, summary.mean_deviation, s2.mean_deviation
                );
            }
        }
        Command::AlphaFromPhysical { omega0, omega_c, curvature, dipole, epsilon0, k0 } => {
            let p = PhysicalParams {
                omega0,
                omega_c,
                a_curv: curvature,
                dipole,
                epsilon0,
                k0,
            };
            let r = alpha_from_physical(&p)?;
            println!("alpha           = {:e}", r.alpha_sq.sqrt());
            println!("alpha^2         = {:e}", r.alpha_sq);
            println!("delta           = {:e}", r.delta);
            println!("delta/alpha^2   = {:e}", r.delta_ratio());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
