//! Experiment runner behind the `lanestitch` binary.
//!
//! ```text
//! lanestitch generate --out scenarios.json [--config cfg.toml] [--seed N]
//! lanestitch run      --scenarios scenarios.json --out results/ [--methods us,pp] [--lambda0 X] [--alpha Y]
//! lanestitch sweep    --scenarios scenarios.json --out sweep/ [--lambda0 0.55,10] [--alpha 0.5,-]
//! lanestitch render   ID --scenarios scenarios.json --out scene.svg [--methods us,pp]
//! ```
//!
//! Exit codes: 0 on success, 2 for usage and configuration errors, 1 for
//! failures while running.

pub mod config;
pub mod methods;
pub mod render;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::scenarios::{self, ScenarioIoError, ScenarioRecord};
use crate::stitcher::StitchParams;
use config::{Config, SweepCell};
use methods::{parse_methods, prepare, run_methods, score_suite, Method, MethodSettings};

#[derive(Debug, Parser)]
#[command(
    name = "lanestitch",
    version,
    about = "Stitch learned trajectories with lane goals and benchmark them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic scenario set.
    Generate(GenerateArgs),
    /// Run methods on scenarios and write metrics.
    Run(RunArgs),
    /// Run the stitcher over a grid of (lambda0, alpha) cells.
    Sweep(SweepArgs),
    /// Render one scenario to SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scenario file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenarios: PathBuf,
    /// Directory receiving metrics.csv and detail.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated methods (ballistic, pp, raw, ls1, ls3, ls5, us).
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenarios: PathBuf,
    /// Directory receiving sweep.csv and one CSV per cell.
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated λ₀ values; the grid is their product with --alpha.
    #[arg(long)]
    pub lambda0: Option<String>,
    /// Comma-separated α values; `-` keeps λ constant.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Scenario id.
    pub id: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenarios: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated methods to draw; empty draws the scene only.
    #[arg(long, default_value = "us,pp")]
    pub methods: String,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn load_config(path: Option<&Path>) -> Result<Config, CliError> {
    let cfg = Config::load_or_default(path).map_err(usage)?;
    cfg.stitch.validate().map_err(usage)?;
    cfg.tracker.validate().map_err(usage)?;
    Ok(cfg)
}

fn load_scenarios(path: &Path) -> Result<Vec<ScenarioRecord>, CliError> {
    scenarios::load(path).map_err(|e| match e {
        ScenarioIoError::Io { .. } => usage(e),
        e => runtime(e),
    })
}

fn method_list(list: &str) -> Result<Vec<Method>, CliError> {
    parse_methods(list).map_err(usage)
}

fn with_overrides(
    base: &StitchParams,
    lambda0: Option<f64>,
    alpha: Option<f64>,
) -> Result<StitchParams, CliError> {
    let params = StitchParams {
        lambda0: lambda0.unwrap_or(base.lambda0),
        alpha: alpha.unwrap_or(base.alpha),
        ..*base
    };
    params.validate().map_err(usage)?;
    Ok(params)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let mut cfg = load_config(args.config.as_deref())?.generator;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let records = scenarios::generate(&cfg).map_err(usage)?;
    scenarios::save(&records, &args.out).map_err(runtime)?;
    eprintln!(
        "wrote {} scenarios to {}",
        records.len(),
        args.out.display()
    );
    Ok(())
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let methods = match &args.methods {
        Some(list) => method_list(list)?,
        None => method_list(&cfg.run.methods.join(","))?,
    };
    let settings = MethodSettings {
        stitch: with_overrides(&cfg.stitch, args.lambda0, args.alpha)?,
        tracker: cfg.tracker,
    };
    let records = load_scenarios(&args.scenarios)?;
    let result = score_suite(
        &records,
        &methods,
        &settings,
        args.parallel || cfg.run.parallel,
    )
    .map_err(runtime)?;
    create_dir(&args.out)?;
    write_file(
        &args.out.join("metrics.csv"),
        result.table.with_pooled().to_csv_string().as_bytes(),
    )?;
    let mut detail = Vec::new();
    result.write_detail_csv(&mut detail).map_err(runtime)?;
    write_file(&args.out.join("detail.csv"), &detail)?;
    if !result.skipped.is_empty() {
        eprintln!(
            "skipped {} scenarios without a goal in range",
            result.skipped.len()
        );
    }
    Ok(())
}

fn parse_list<T>(
    list: &str,
    what: &str,
    item: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).ok_or_else(|| usage(format!("bad {what} value `{s}`"))))
        .collect()
}

/// Sweep cells from the flags (their product), or from the config.
pub fn sweep_cells(
    lambda0: Option<&str>,
    alpha: Option<&str>,
    cfg: &Config,
) -> Result<Vec<SweepCell>, CliError> {
    if lambda0.is_none() && alpha.is_none() {
        return Ok(cfg.sweep.cells.clone());
    }
    let lambdas = match lambda0 {
        Some(l) => parse_list(l, "lambda0", |s| s.parse::<f64>().ok())?,
        None => vec![cfg.stitch.lambda0],
    };
    let alphas = match alpha {
        Some(a) => parse_list(a, "alpha", |s| match s {
            "-" => Some(None),
            s => s.parse::<f64>().ok().map(Some),
        })?,
        None => vec![Some(cfg.stitch.alpha)],
    };
    Ok(lambdas
        .iter()
        .flat_map(|&lambda0| {
            alphas
                .iter()
                .map(move |&alpha| SweepCell { lambda0, alpha })
        })
        .collect())
}

#[derive(Serialize)]
struct SweepRow<'a> {
    lambda0: String,
    alpha: String,
    method: &'a str,
    horizon_s: u32,
    maneuver: &'a str,
    mean_cte_m: f64,
    count: usize,
}

fn cell_file_name(cell: &SweepCell) -> String {
    match cell.alpha {
        Some(a) => format!("cell_l{}_a{}.csv", cell.lambda0, a),
        None => format!("cell_l{}_a-.csv", cell.lambda0),
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let cells = sweep_cells(args.lambda0.as_deref(), args.alpha.as_deref(), &cfg)?;
    if cells.is_empty() {
        return Err(usage("the sweep grid is empty"));
    }
    let params: Vec<StitchParams> = cells
        .iter()
        .map(|c| {
            let p = c.apply(&cfg.stitch);
            p.validate().map_err(usage).map(|_| p)
        })
        .collect::<Result<_, _>>()?;
    let records = load_scenarios(&args.scenarios)?;
    create_dir(&args.out)?;
    let mut summary = csv::Writer::from_writer(Vec::new());
    for (cell, stitch) in cells.iter().zip(params) {
        let settings = MethodSettings {
            stitch,
            tracker: cfg.tracker,
        };
        let result = score_suite(
            &records,
            &[Method::Us],
            &settings,
            args.parallel || cfg.run.parallel,
        )
        .map_err(runtime)?;
        let table = result.table.with_pooled();
        write_file(
            &args.out.join(cell_file_name(cell)),
            table.to_csv_string().as_bytes(),
        )?;
        for row in table.rows() {
            summary
                .serialize(SweepRow {
                    lambda0: cell.lambda0.to_string(),
                    alpha: cell
                        .alpha
                        .map_or_else(|| "-".to_string(), |a| a.to_string()),
                    method: &row.method,
                    horizon_s: row.horizon_s,
                    maneuver: &row.maneuver,
                    mean_cte_m: row.mean_cte_m,
                    count: row.count,
                })
                .map_err(runtime)?;
        }
    }
    let bytes = summary.into_inner().map_err(runtime)?;
    write_file(&args.out.join("sweep.csv"), &bytes)
}

pub fn cmd_render(args: &RenderArgs) -> Result<(), CliError> {
    let cfg = load_config(args.config.as_deref())?;
    let methods = method_list(&args.methods)?;
    let settings = MethodSettings {
        stitch: with_overrides(&cfg.stitch, args.lambda0, args.alpha)?,
        tracker: cfg.tracker,
    };
    let records = load_scenarios(&args.scenarios)?;
    let record = records
        .iter()
        .find(|r| r.id == args.id)
        .ok_or_else(|| usage(format!("no scenario with id `{}`", args.id)))?;
    let prepared = prepare(record)
        .map_err(runtime)?
        .ok_or_else(|| runtime(format!("scenario {} has no goal in range", record.id)))?;
    let outputs = run_methods(&methods, &prepared, &settings).map_err(runtime)?;
    write_file(
        &args.out,
        render::render_scene(&prepared, &outputs).as_bytes(),
    )
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Render(a) => cmd_render(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            e.exit_code()
        }
    }
}
