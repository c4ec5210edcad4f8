use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fpp::config::{Settings, CONFIG_ENV};
use fpp::report::{render, run_replay, run_solve};
use fpp::study::{parse_replay, parse_study};
use fpp::validate;

#[derive(Parser)]
#[command(
    name = "fpp",
    version,
    about = "Fuzzy preference programming for criteria hierarchies"
)]
struct Cli {
    /// TOML file with default settings.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every group of a study and rank the leaf criteria.
    Solve {
        study: PathBuf,
        /// Width at which bisection on lambda stops.
        #[arg(long)]
        lambda_tol: Option<f64>,
        /// Half-width used to widen crisp judgments.
        #[arg(long)]
        spread: Option<f64>,
        /// Smallest lower bound a widened crisp judgment may have.
        #[arg(long)]
        floor: Option<f64>,
        /// Cross-check groups of up to three items with a grid search.
        #[arg(long)]
        oracle_check: bool,
        /// Solve independent groups concurrently.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Check a study file and print matrix diagnostics.
    Validate { study: PathBuf },
    /// Compose and rank published local weights without solving.
    Replay {
        weights: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Rescale each sibling group to sum to 1 before composing.
    #[arg(long)]
    renormalize: bool,
    /// table, machine or csv
    #[arg(long)]
    format: Option<String>,
}

impl Output {
    fn settings(&self) -> Settings {
        Settings {
            renormalize: self.renormalize.then_some(true),
            format: self.format.clone(),
            ..Settings::default()
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, ExitCode> {
    std::fs::read(path).map_err(|e| {
        eprintln!("error: reading {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    let base = match &cli.config {
        Some(p) => Settings::from_file(p).map_err(fail)?,
        None => Settings::default(),
    };
    match cli.command {
        Command::Solve {
            study,
            lambda_tol,
            spread,
            floor,
            oracle_check,
            parallel,
            output,
        } => {
            let flags = Settings {
                lambda_tolerance: lambda_tol,
                spread,
                floor,
                parallel: parallel.then_some(true),
                ..output.settings()
            };
            let settings = base.merge(flags);
            let study = parse_study(&read(&study)?).map_err(fail)?;
            let options = settings
                .run_options(study.policy(), oracle_check)
                .map_err(fail)?;
            let format = settings.format().map_err(fail)?;
            let report = run_solve(&study, &options).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            })?;
            print!("{}", render(&report, format));
        }
        Command::Validate { study } => {
            let study = parse_study(&read(&study)?).map_err(fail)?;
            let prepared = study.prepare(&study.policy()).map_err(fail)?;
            println!(
                "ok: {} criteria, {} matrices",
                study.hierarchy.criteria_count(),
                prepared.matrices.len()
            );
            for group in study.hierarchy.groups() {
                if let Some(m) = prepared.matrices.get(&group.id) {
                    println!("\n[{}]", group.id);
                    print!("{}", validate(m));
                }
            }
            for c in &prepared.clipped {
                println!(
                    "note: ({}, {}) = {} in {} clipped to the floor",
                    c.i, c.j, c.crisp, c.group
                );
            }
        }
        Command::Replay { weights, output } => {
            let settings = base.merge(output.settings());
            let file = parse_replay(&read(&weights)?).map_err(fail)?;
            let format = settings.format().map_err(fail)?;
            let report = run_replay(&file, settings.renormalize.unwrap_or(false)).map_err(fail)?;
            print!("{}", render(&report, format));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
