use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use caqed::compare::{compare, DEFAULT_TOLERANCE};
use caqed::config::{Engine, RunConfig};
use caqed::runner::{bound_states_report, circuit_report, run, RunOptions};
use caqed::{error_json, presets, worker_count, WORKERS_ENV};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact and lattice dynamics of small and giant emitters in cavity-array
/// waveguides.
#[derive(Parser)]
#[command(name = "caqed", version, after_help = "Set CAQED_WORKERS to fix the number of worker threads.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Lattice,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Lattice => Engine::Lattice,
        }
    }
}

#[derive(Args)]
struct Source {
    /// JSON config file.
    config: Option<PathBuf>,
    /// Use a built-in preset instead of a config file.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
}

impl Source {
    fn load(&self) -> Result<RunConfig> {
        match (&self.config, &self.preset) {
            (Some(path), None) => RunConfig::load(path),
            (None, Some(name)) => match presets::find(name) {
                Some(p) => Ok((p.build)()),
                None => bail!("unknown preset '{name}' (see `caqed presets --list`)"),
            },
            _ => bail!("give a config file or --preset <name>"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario of a config and write CSV, binary and manifest files.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// Output directory.
        #[arg(short, long, default_value = "caqed-out")]
        out: PathBuf,
        /// Override the engine of every scenario.
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        /// Absolute quadrature error allowed per time point (default 1e-9).
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Print bound-state energies and residues as JSON.
    BoundStates {
        #[command(flatten)]
        source: Source,
        /// `exact` poles or `lattice` diagonalization.
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
    },
    /// Map circuit elements to model parameters (and back) as JSON.
    Circuit {
        #[command(flatten)]
        source: Source,
    },
    /// Compare two output directories or CSV files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Largest allowed absolute deviation of populations, occupations and entropies (default 1e-3).
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Inspect the built-in presets.
    Presets {
        /// List names and descriptions.
        #[arg(long)]
        list: bool,
        /// Print the config of one preset.
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    print_text(&serde_json::to_string_pretty(v)?)
}

/// Write a line to stdout; a closed pipe (e.g. `| head`) is not an error.
fn print_text(text: &str) -> Result<()> {
    match writeln!(std::io::stdout(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn positive(t: Option<f64>, what: &str) -> Result<Option<f64>> {
    match t {
        Some(v) if !(v.is_finite() && v > 0.0) => bail!("{what} must be a positive number"),
        other => Ok(other),
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    let workers = worker_count()?;
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;
    match cli.command {
        Command::Simulate { source, out, engine, tolerance } => {
            let cfg = source.load()?;
            let opts = RunOptions { out_dir: out, engine: engine.map(Into::into), abs_tol: positive(tolerance, "--tolerance")? };
            let manifest = run(&cfg, &opts)?;
            let files: usize = manifest.scenarios.iter().map(|s| s.files.len()).sum();
            eprintln!(
                "wrote {files} files for {} scenario(s) to {} using {workers} worker(s) ({WORKERS_ENV})",
                manifest.scenarios.len(),
                opts.out_dir.display()
            );
        }
        Command::BoundStates { source, engine } => print_json(&bound_states_report(&source.load()?, engine.map(Into::into))?)?,
        Command::Circuit { source } => {
            let cfg = source.load()?;
            let reports = cfg
                .scenarios
                .iter()
                .filter(|s| s.circuit.is_some())
                .map(|s| Ok(serde_json::json!({"name": s.name, "report": circuit_report(s)?})))
                .collect::<Result<Vec<_>>>()?;
            if reports.is_empty() {
                bail!("no scenario has a circuit section");
            }
            print_json(&serde_json::json!({ "scenarios": reports }))?;
        }
        Command::Compare { a, b, tolerance } => {
            let report = compare(&a, &b, positive(tolerance, "--tolerance")?.unwrap_or(DEFAULT_TOLERANCE))?;
            print_json(&report)?;
            if !report.pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Presets { list, show } => {
            if let Some(name) = show {
                let Some(p) = presets::find(&name) else { bail!("unknown preset '{name}'") };
                print_text(&(p.build)().to_json())?;
            } else if list {
                for p in presets::PRESETS {
                    print_text(&format!("{:<8} {}", p.name, p.summary))?;
                }
            } else {
                bail!("use --list or --show <name>");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(caqed::classify(&e).1 as u8)
        }
    }
}
