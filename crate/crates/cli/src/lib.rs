//! Command-line front end for `edgelab-core`.
//!
//! Exit codes: 0 on success, 1 for a non-PPT `classify` verdict or an
//! incomplete `table`, 2 on invalid input or any other error.

pub mod commands;
pub mod family;
pub mod json;
pub mod matrix_file;
pub mod sweep;
pub mod table;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use edgelab_core::classify::Tolerances;
use edgelab_core::SearchConfig;

use commands::{Input, Outcome};
use family::{Family, FamilyArgs};
use sweep::{SweepSpec, SweepSpecFile};

#[derive(Parser, Debug)]
#[command(name = "edgelab", version, about = "Construct, classify and edge-check bi-qutrit PPT states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a family member as a JSON matrix file.
    Construct {
        family: Family,
        #[command(flatten)]
        params: FamilyArgs,
        /// Output path; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Report PSD/PPT status, type and rank-bound admissibility.
    Classify {
        /// Matrix file; alternatively use --family.
        input: Option<PathBuf>,
        #[arg(long)]
        family: Option<Family>,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long, default_value_t = Tolerances::default().rel_tol)]
        rel_tol: f64,
        #[arg(long, default_value_t = Tolerances::default().abs_tol)]
        abs_tol: f64,
    },
    /// Search for product vectors in the ranges of a state and its partial transpose.
    EdgeCheck {
        input: Option<PathBuf>,
        #[arg(long)]
        family: Option<Family>,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long, default_value_t = SearchConfig::default().starts)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the analytic certificate (edge family only).
        #[arg(long)]
        analytic: bool,
    },
    /// Classify every point of a parameter grid and write CSV.
    Sweep {
        #[arg(long, required_unless_present = "spec")]
        family: Option<Family>,
        /// `name=lo:hi:steps` or `name=value`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        grid: Vec<String>,
        /// JSON sweep specification instead of flags.
        #[arg(long, conflicts_with_all = ["family", "grid"])]
        spec: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add the product-vector search objective to each row.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = SearchConfig::default().starts)]
        starts: usize,
    },
    /// Build the type table at the reference parameters.
    Table,
    /// Check the separable decomposition at θ = 0.
    Decompose {
        #[arg(long)]
        b: f64,
    },
}

fn input<'a>(path: &'a Option<PathBuf>, family: Option<Family>, params: &FamilyArgs) -> Result<Input<'a>> {
    match (path, family) {
        (Some(p), None) => Ok(Input::File(p)),
        (None, Some(f)) => Ok(Input::Family(f, params.params()?)),
        (Some(_), Some(_)) => bail!("give either a matrix file or --family, not both"),
        (None, None) => bail!("give a matrix file or --family"),
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

/// Runs a parsed command; errors map to exit code 2 in the binary.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Construct { family, params, out } => {
            let text = commands::construct(*family, &params.params()?)?;
            Ok(Outcome::ok(write_out(out, &(text + "\n"))?))
        }
        Command::Classify {
            input: path,
            family,
            params,
            rel_tol,
            abs_tol,
        } => {
            let tol = Tolerances {
                rel_tol: *rel_tol,
                abs_tol: *abs_tol,
            };
            commands::classify_cmd(&input(path, *family, params)?, tol)
        }
        Command::EdgeCheck {
            input: path,
            family,
            params,
            starts,
            seed,
            analytic,
        } => {
            if *starts == 0 {
                bail!("--starts must be positive");
            }
            let cfg = SearchConfig {
                starts: *starts,
                seed: *seed,
                ..SearchConfig::default()
            };
            commands::edge_check(&input(path, *family, params)?, &cfg, *analytic)
        }
        Command::Sweep {
            family,
            grid,
            spec,
            out,
            seed,
            search,
            starts,
        } => {
            let (spec, out) = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    let file: SweepSpecFile = serde_json::from_str(&text)
                        .with_context(|| format!("malformed sweep spec {}", path.display()))?;
                    let out = out.clone().or_else(|| file.out.clone());
                    (SweepSpec::from_file(&file)?, out)
                }
                None => {
                    let family = family.context("--family is required")?;
                    (SweepSpec::new(family, grid, *seed, *search, *starts)?, out.clone())
                }
            };
            let rows = sweep::run(&spec)?;
            let csv = sweep::to_csv(spec.family, &rows)?;
            Ok(Outcome::ok(write_out(&out, &csv)?))
        }
        Command::Table => {
            let report = table::build_table()?;
            Ok(Outcome {
                output: table::render(&report),
                code: if report.complete() { 0 } else { 1 },
            })
        }
        Command::Decompose { b } => commands::decompose(*b),
    }
}

/// Applies `EDGELAB_THREADS` to the global rayon pool.
pub fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("EDGELAB_THREADS") {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("EDGELAB_THREADS must be a positive integer, got `{value}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}
