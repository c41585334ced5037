use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stormrisk::Error;

mod artifact;
mod commands;
mod config;
mod manifest;

use config::Resolver;
use manifest::Manifest;

/// Flood-event extremes: declustering, point-process fits, return levels and
/// short-term risk.
#[derive(Parser, Debug)]
#[command(name = "stormrisk", version)]
struct Cli {
    /// `key = value` settings file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Random seed [default: $STORMRISK_SEED, else 1]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract independent events from a daily series.
    Decluster(DeclusterArgs),
    /// Fit a stationary, covariate, random-effects or regional model.
    Fit(FitArgs),
    /// Return levels from a fit.
    ReturnLevels(ReturnLevelArgs),
    /// Short-term risk curve from a fit.
    Risk(RiskArgs),
    /// Simulate datasets from a known model.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
pub struct DeclusterArgs {
    /// Daily series with columns date,value
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Threshold as a quantile of the series [default: 0.97]
    #[arg(long, conflicts_with = "threshold")]
    pub threshold_quantile: Option<f64>,
    /// Threshold on the data scale
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Days below threshold that end a cluster [default: 7]
    #[arg(long)]
    pub run_length: Option<usize>,
    /// water-year or calendar [default: water-year]
    #[arg(long)]
    pub block_rule: Option<String>,
    /// Site name [default: input file stem]
    #[arg(long)]
    pub site: Option<String>,
    /// Parametric bootstrap resamples for the inter-arrival band [default: 1000]
    #[arg(long)]
    pub pp_resamples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// stationary, covariate, random-effects or regional
    #[arg(long)]
    pub model: Option<String>,
    /// Event tables (repeat for regional fits)
    #[arg(long)]
    pub events: Vec<PathBuf>,
    /// Site table with threshold and years
    #[arg(long)]
    pub sites: Option<PathBuf>,
    /// Site to fit when the table lists several
    #[arg(long)]
    pub site: Option<String>,
    /// Block covariates, (block,s) or (date,s)
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Block rule for dated covariates [default: water-year]
    #[arg(long)]
    pub block_rule: Option<String>,
    /// Coefficients estimated in covariate fits [default: mu0,mu1,sigma0,xi0]
    #[arg(long)]
    pub free: Option<String>,
    /// Parameters carrying random effects [default: mu,sigma,xi]
    #[arg(long)]
    pub effects: Option<String>,
    /// MCMC iterations [default: 200000]
    #[arg(long)]
    pub iterations: Option<usize>,
    /// MCMC burn-in [default: 50000]
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Keep every n-th post-burn-in draw [default: 10]
    #[arg(long)]
    pub thin: Option<usize>,
    /// Adaptation target per component [default: 0.44]
    #[arg(long)]
    pub target_acceptance: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ReturnLevelArgs {
    /// Fit artifact written by `fit`
    #[arg(long)]
    pub fit: Option<PathBuf>,
    /// Return periods in blocks [default: 2,5,10,20,50,100,200,500,1000]
    #[arg(long = "T")]
    pub periods: Option<String>,
    /// marginal or block [default: marginal]
    #[arg(long)]
    pub mode: Option<String>,
    /// Block maxima (block,maximum) for an iid GEV comparison column
    #[arg(long)]
    pub compare_iid_gev: Option<PathBuf>,
    /// Site name or index for regional fits [default: first site]
    #[arg(long)]
    pub site: Option<String>,
}

#[derive(Args, Debug)]
pub struct RiskArgs {
    /// Fit artifact written by `fit`
    #[arg(long)]
    pub fit: Option<PathBuf>,
    /// Time of the conditioning event within the block, in (0, 1)
    #[arg(long)]
    pub t: Option<f64>,
    /// Return period of the conditioning event
    #[arg(long = "T")]
    pub period: Option<f64>,
    /// T* values, `a,b,c` or `lo:hi:n` (log-spaced) [default: 1.5:1000:50]
    #[arg(long = "Tstar-grid")]
    pub t_star_grid: Option<String>,
    /// Resampled models for pointwise 95% bands; 0 disables [default: 500]
    #[arg(long)]
    pub bands: Option<usize>,
    /// Site name or index for regional fits [default: first site]
    #[arg(long)]
    pub site: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// stationary, covariate, random-effects or regional [default: covariate]
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu0: Option<f64>,
    /// Location slope [default: 2.5]
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<f64>,
    /// Scale at zero covariate [default: 1.5]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Log-scale slope [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub sigma1: Option<f64>,
    /// Shape intercept [default: 0.2]
    #[arg(long, allow_hyphen_values = true)]
    pub xi0: Option<f64>,
    /// Shape slope [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub xi1: Option<f64>,
    /// Parameters carrying random effects [default: mu,sigma,xi]
    #[arg(long)]
    pub effects: Option<String>,
    /// Effect correlations in pair order (1,0),(2,0),(2,1) [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Number of sites in regional designs [default: 3]
    #[arg(long)]
    pub sites: Option<usize>,
    /// Per-site location offsets in regional designs [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub site_offsets: Option<String>,
    /// Blocks per replicate [default: 30]
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Label of the first block [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub first_block: Option<i64>,
    /// Fixed threshold
    #[arg(long, allow_hyphen_values = true, conflicts_with = "rate")]
    pub threshold: Option<f64>,
    /// Threshold set to this many expected exceedances per central block [default: 0.5]
    #[arg(long)]
    pub rate: Option<f64>,
    /// Number of replicates [default: 1]
    #[arg(long)]
    pub replicates: Option<usize>,
}

/// Exit status for a library error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::Io(_)
        | Error::PriorMismatch(_)
        | Error::UnsupportedConditioningValue(_) => 2,
        Error::DegenerateSample | Error::TooFewEvents { .. } | Error::BracketFailure(_) => 3,
        Error::NonConvergence { .. } => 4,
    }
}

/// State shared by a subcommand run.
pub struct Ctx {
    pub r: Resolver,
    pub manifest: Manifest,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Ctx {
    /// Path of a named output, recorded in the manifest.
    pub fn output(&mut self, name: &str) -> stormrisk::Result<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| Error::Io(format!("{}: {e}", self.out_dir.display())))?;
        self.manifest.outputs.push(name.to_string());
        Ok(self.out_dir.join(name))
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.manifest.warnings.push(msg);
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decluster(_) => "decluster",
        Command::Fit(_) => "fit",
        Command::ReturnLevels(_) => "return-levels",
        Command::Risk(_) => "risk",
        Command::Simulate(_) => "simulate",
    }
}

fn setup(cli: &Cli) -> stormrisk::Result<Ctx> {
    let mut r = Resolver::new(cli.config.as_deref())?;
    let out_dir = r
        .path("out-dir", cli.out_dir.clone())?
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = r.seed(cli.seed)?;
    if let Some(n) = r.opt("threads", cli.threads)? {
        if n == 0 {
            return Err(Error::InvalidInput("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    Ok(Ctx {
        r,
        manifest: Manifest::new(command_name(&cli.command)),
        out_dir,
        seed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = match setup(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let result = match &cli.command {
        Command::Decluster(a) => commands::decluster::run(a, &mut ctx),
        Command::Fit(a) => commands::fit::run(a, &mut ctx),
        Command::ReturnLevels(a) => commands::levels::run(a, &mut ctx),
        Command::Risk(a) => commands::risk::run(a, &mut ctx),
        Command::Simulate(a) => commands::simulate::run(a, &mut ctx),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ctx.manifest.error = Some(e.to_string());
            exit_code(&e)
        }
    };
    for k in ctx.r.unused() {
        ctx.warn(format!("config key `{k}` was not used"));
    }
    ctx.manifest.config = ctx.r.resolved().clone();
    ctx.manifest.exit_code = code as i32;
    if let Err(e) = ctx.manifest.write(&ctx.out_dir) {
        eprintln!("error: cannot write manifest: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
