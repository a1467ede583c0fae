//! Command-line front end: `dbar <subcommand>`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::drivers;
use crate::error::Error;
use crate::io::KeyValueCsv;
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "dbar", version, about = "Scattering transforms for the planar D-bar system and DS-II")]
pub struct Cli {
    /// JSON config; defaults apply to every missing field
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for the parallel maps
    #[arg(long, global = true, env = "DBAR_WORKERS")]
    pub workers: Option<usize>,
    /// Parent directory of the run directories
    #[arg(long, global = true, default_value = "runs")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Potential -> scattering data
    Forward,
    /// Scattering data -> potential
    Inverse {
        /// Directory of a forward run whose S dumps are inverted
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Forward then inverse, with the roundtrip defect
    Roundtrip,
    /// DS-II evolution and continuity ratios
    Evolve,
    /// Exponent identities, HLS ratios, discrete multilinear bounds
    Estimates,
    /// Run the acceptance criteria and print a pass/fail table
    Verify {
        /// Only these criterion ids
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Inverse { .. } => "inverse",
            Command::Roundtrip => "roundtrip",
            Command::Evolve => "evolve",
            Command::Estimates => "estimates",
            Command::Verify { .. } => "verify",
        }
    }
}

pub const EXIT_GATE_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::GridMismatch(_) => EXIT_CONFIG,
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        Error::Io(_) | Error::Format(_) => EXIT_IO,
    }
}

fn print_csv(csv: &KeyValueCsv, skip_per_point: bool) {
    for (k, v) in csv.rows() {
        // per-point solve records stay in the CSV file only
        let per_point = k.split('.').nth(1).is_some_and(|s| s.parse::<usize>().is_ok());
        if !(skip_per_point && per_point) {
            println!("{k} = {v}");
        }
    }
}

fn run_dir(out: &Path, cfg: &Config, command: &str) -> crate::Result<PathBuf> {
    let dir = out.join(format!("run-{}", cfg.hash())).join(command);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.parent().expect("run dir has a parent").join("config.json"), cfg.to_json())?;
    Ok(dir)
}

/// Executes a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> crate::Result<i32> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("cannot read {}: {io}", p.display())),
            other => other,
        })?,
        None => Config::default(),
    };
    let dir = run_dir(&cli.out_dir, &cfg, cli.command.name())?;
    let w = cli.workers;
    let code = match &cli.command {
        Command::Forward => {
            print_csv(&drivers::run_forward(&cfg, w, &dir)?.1, true);
            0
        }
        Command::Inverse { from } => {
            print_csv(&drivers::run_inverse(&cfg, w, from.as_deref(), &dir)?.1, true);
            0
        }
        Command::Roundtrip => {
            print_csv(&drivers::run_roundtrip(&cfg, w, &dir)?, true);
            0
        }
        Command::Evolve => {
            print_csv(&drivers::run_evolve(&cfg, w, &dir)?, false);
            0
        }
        Command::Estimates => {
            let csv = drivers::run_estimates(&cfg, &dir)?;
            print_csv(&csv, false);
            0
        }
        Command::Verify { only } => {
            let ctx = verify::Context::new(w, &dir);
            let ids: Vec<usize> = if only.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { only.clone() };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=verify::CRITERIA.len()).contains(&i)) {
                return Err(Error::Config(format!("no acceptance criterion {bad}")));
            }
            let mut csv = KeyValueCsv::new();
            let mut all = true;
            for id in ids {
                let c = verify::run(id, &ctx);
                println!("{}", c.line());
                csv.push(format!("C{}.{}", c.id, c.name), if c.passed { "pass" } else { "fail" });
                csv.push(format!("C{}.detail", c.id), c.detail.replace(',', ";"));
                all &= c.passed;
            }
            csv.save(dir.join("verify.csv"))?;
            if all {
                0
            } else {
                EXIT_GATE_FAILED
            }
        }
    };
    println!("outputs: {}", dir.display());
    Ok(code)
}
