//! Command-line front end: `stokes2d <command> --config <path> [--out <dir>] [--threads N]`.

pub mod config;

use crate::error::Error;
use crate::report::{config_hash, write_file, Report};
use crate::suites::run_suite;
use clap::Parser;
use config::{parse_config, Command, ExperimentConfig};
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stokes2d", version, about = "Boundary-integral solver and verification toolkit for the 2D Stokes resolvent")]
pub struct Args {
    pub command: Command,
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (default: the config's `output`, else `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: STOKES2D_THREADS, else all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Outcome of a completed command.
pub struct RunOutcome {
    pub report: Report,
    pub out_dir: PathBuf,
}

pub fn load_config(path: &Path) -> crate::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = parse_config(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs `command` on a validated configuration and writes the CSV tables,
/// `resolved_config.json` and `report.json` into `out_dir`.
pub fn run(command: Command, cfg: &ExperimentConfig, out_dir: &Path) -> crate::Result<RunOutcome> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(Error::Config(format!("config is for command \"{}\" but \"{}\" was requested", c.name(), command.name())));
        }
    }
    let mut resolved = cfg.clone();
    resolved.command = Some(command);
    let hash = config_hash(&resolved)?;
    let suite = run_suite(command, &resolved)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", out_dir.display()))))?;
    let mut outputs = Vec::new();
    for (name, table) in &suite.tables {
        table.write(&out_dir.join(name))?;
        outputs.push(name.clone());
    }
    let echo = serde_json::to_string_pretty(&resolved).map_err(|e| Error::Config(e.to_string()))?;
    write_file(&out_dir.join("resolved_config.json"), &(echo + "\n"))?;
    let report = Report { command: command.name().to_string(), config_hash: hash, criteria: suite.criteria, outputs };
    write_file(&out_dir.join("report.json"), &report.to_json()?)?;
    for (stage, d) in &suite.timings {
        eprintln!("{stage}: {:.2} s", d.as_secs_f64());
    }
    Ok(RunOutcome { report, out_dir: out_dir.to_path_buf() })
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// User-facing message; incompatible data cite the condition they violate.
pub fn describe(err: &Error) -> String {
    match err {
        Error::Incompatible { defect, tol } => format!(
            "incompatible boundary data: the Dirichlet problem requires the compatibility condition ∫_∂Ω g·n ds = 0, \
             but the relative defect is {defect:.3e} (tolerance {tol:.1e})"
        ),
        e => e.to_string(),
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("STOKES2D_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| format!("STOKES2D_THREADS must be a positive integer, got \"{v}\"")),
        Err(_) => Ok(None),
    }
}

pub fn main() -> i32 {
    let args = Args::parse();
    match thread_count(args.threads) {
        Ok(Some(0)) | Err(_) => {
            eprintln!("error: {}", thread_count(args.threads).err().unwrap_or_else(|| "thread count must be positive".into()));
            return EXIT_CONFIG;
        }
        Ok(Some(n)) => {
            // fails only if a pool already exists, in which case it is reused
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Ok(None) => {}
    }
    let cfg = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            return exit_code(&e);
        }
    };
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from(cfg.output.clone().unwrap_or_else(|| "out".into())));
    match run(args.command, &cfg, &out_dir) {
        Ok(o) => {
            for c in &o.report.criteria {
                println!("{}", c.line());
            }
            println!("config hash {}; outputs in {}", o.report.config_hash, o.out_dir.display());
            if o.report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            exit_code(&e)
        }
    }
}
