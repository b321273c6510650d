//! Command-line front-end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 numeric or
//! contract error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use margweight_core::asymptotics::{
    chi2_reduction_bound, gamma_adjusted, sigma_marginal, CovarianceMatrix,
};
use margweight_core::estimators::{adjust_to_known_marginal, ipf_fit, AdjustedTable, IpfFit, IpfOptions};
use margweight_core::simulation::{asymptotic_reduction, run_case_study, ExperimentConfig};
use margweight_core::{Axis, JointDistribution};
use serde::Serialize;
use thiserror::Error;

use crate::format::{self, FormatError};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "margweight", version, about = "Known-marginal adjustment of contingency-table estimates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    pub format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical joint table and both marginals of a count table.
    Estimate {
        #[arg(long)]
        counts: PathBuf,
    },
    /// Rescale the columns of a count table to a known column marginal.
    Adjust {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        marginal: PathBuf,
    },
    /// Sigma, Gamma, their difference, the chi-square bound and per-row reductions.
    Asymptotics {
        /// Count or probability table.
        #[arg(long)]
        table: PathBuf,
    },
    /// Run a Monte Carlo grid from a JSON configuration.
    Simulate(SimulateArgs),
    /// Plain versus adjusted row marginals of an observed table.
    CaseStudy {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        marginal: PathBuf,
    },
    /// Iterative proportional fitting of a table to row and column targets.
    Ipf(IpfArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the configuration's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the configuration's replication count.
    #[arg(long)]
    pub replications: Option<u32>,
}

#[derive(Debug, Args)]
pub struct IpfArgs {
    /// Initial count or probability table.
    #[arg(long)]
    pub table: PathBuf,
    /// Row target.
    #[arg(long)]
    pub row_marginal: PathBuf,
    /// Column target.
    #[arg(long)]
    pub marginal: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("invalid configuration: {0}")]
    Config(#[from] serde_json::Error),
    #[error("{0}")]
    Core(#[from] margweight_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Format(FormatError::Contract(_)) | CliError::Core(_) => 3,
            CliError::Format(_) | CliError::Config(_) | CliError::Write { .. } => 2,
        }
    }
}

#[derive(Serialize)]
struct EstimateOutput<'a> {
    total: u64,
    joint: &'a JointDistribution,
    row_marginal: &'a [f64],
    col_marginal: &'a [f64],
}

#[derive(Serialize)]
struct AdjustOutput<'a> {
    adjusted: &'a AdjustedTable,
    adjusted_row_marginal: &'a [f64],
}

#[derive(Serialize)]
struct AsymptoticsOutput<'a> {
    sigma: &'a CovarianceMatrix,
    gamma: &'a CovarianceMatrix,
    sigma_minus_gamma: &'a CovarianceMatrix,
    chi2_bound: Option<f64>,
    /// `None` for rows with zero variance.
    asymptotic_reduction: &'a [Option<f64>],
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn matrix_csv(m: &CovarianceMatrix) -> String {
    format::write_matrix(m.dim(), m.dim(), m.entries())
}

fn optional_list(values: &[Option<f64>]) -> String {
    let parts: Vec<String> = values
        .iter()
        .map(|v| v.map(format::num).unwrap_or_default())
        .collect();
    format!("{}\n", parts.join(","))
}

fn column_marginal(path: &Path) -> Result<margweight_core::MarginalDistribution, CliError> {
    Ok(format::parse_marginal(path, Axis::Column)?.marginal)
}

/// Runs one command and returns the bytes to emit.
pub fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Estimate { counts } => {
            let counts = format::parse_count_table(counts)?;
            let joint = counts.empirical_joint()?;
            let rows = joint.row_marginal();
            let cols = joint.column_marginal();
            match fmt {
                OutputFormat::Json => json(&EstimateOutput {
                    total: counts.total(),
                    joint: &joint,
                    row_marginal: rows.probs(),
                    col_marginal: cols.probs(),
                }),
                OutputFormat::Csv => Ok([
                    format::section("joint", &format::write_matrix(joint.rows(), joint.cols(), joint.cells())),
                    format::section("row_marginal", &format::write_marginal(rows.probs())),
                    format::section("col_marginal", &format::write_marginal(cols.probs())),
                ]
                .concat()),
            }
        }
        Command::Adjust { counts, marginal } => {
            let counts = format::parse_count_table(counts)?;
            let known = column_marginal(marginal)?;
            let adjusted = adjust_to_known_marginal(&counts.empirical_joint()?, &known)?;
            let row = adjusted.adjusted_row_marginal();
            if adjusted.has_zero_columns() {
                eprintln!(
                    "warning: columns {:?} are empty in the sample; adjusted rows sum below 1",
                    adjusted.zero_columns()
                );
            }
            match fmt {
                OutputFormat::Json => json(&AdjustOutput { adjusted: &adjusted, adjusted_row_marginal: &row }),
                OutputFormat::Csv => {
                    let zero: Vec<String> = adjusted.zero_columns().iter().map(|j| j.to_string()).collect();
                    Ok([
                        format::section(
                            "adjusted",
                            &format::write_matrix(adjusted.rows(), adjusted.cols(), adjusted.cells()),
                        ),
                        format::section("adjusted_row_marginal", &format::write_marginal(&row)),
                        format::section("known_col_marginal", &format::write_marginal(known.probs())),
                        format::section("zero_columns", &format!("{}\n", zero.join(","))),
                    ]
                    .concat())
                }
            }
        }
        Command::Asymptotics { table } => {
            let p = format::parse_joint_table(table)?;
            let sigma = sigma_marginal(&p);
            let gamma = gamma_adjusted(&p)?;
            let diff = sigma.difference(&gamma)?;
            let chi2 = chi2_reduction_bound(&p).ok();
            let reductions: Vec<Option<f64>> =
                (0..p.rows()).map(|i| asymptotic_reduction(&p, i).ok()).collect();
            match fmt {
                OutputFormat::Json => json(&AsymptoticsOutput {
                    sigma: &sigma,
                    gamma: &gamma,
                    sigma_minus_gamma: &diff,
                    chi2_bound: chi2,
                    asymptotic_reduction: &reductions,
                }),
                OutputFormat::Csv => Ok([
                    format::section("sigma", &matrix_csv(&sigma)),
                    format::section("gamma", &matrix_csv(&gamma)),
                    format::section("sigma_minus_gamma", &matrix_csv(&diff)),
                    format::section("chi2_bound", &optional_list(&[chi2])),
                    format::section("asymptotic_reduction", &optional_list(&reductions)),
                ]
                .concat()),
            }
        }
        Command::Simulate(args) => {
            let text = format::read_file(&args.config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            if let Some(r) = args.replications {
                cfg.replications = r;
            }
            let grid = parallel::run_experiment(&cfg)?;
            if grid.failed_cells() > 0 {
                eprintln!("warning: {} grid cells failed; see the error column", grid.failed_cells());
            }
            match fmt {
                OutputFormat::Json => json(&grid),
                OutputFormat::Csv => Ok(format::write_grid_csv(&grid.cells)),
            }
        }
        Command::CaseStudy { counts, marginal } => {
            let counts = format::parse_count_table(counts)?;
            let known = column_marginal(marginal)?;
            let result = run_case_study(&counts, &known)?;
            if !result.zero_columns.is_empty() {
                eprintln!("warning: columns {:?} are empty in the sample", result.zero_columns);
            }
            match fmt {
                OutputFormat::Json => json(&result),
                OutputFormat::Csv => Ok(format::write_case_study_csv(&result)),
            }
        }
        Command::Ipf(args) => {
            if args.tol.is_nan() || args.tol <= 0.0 {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
            let init = format::parse_joint_table(&args.table)?;
            let rows = format::parse_marginal(&args.row_marginal, Axis::Row)?.marginal;
            let cols = column_marginal(&args.marginal)?;
            let fit: IpfFit =
                ipf_fit(&init, &rows, &cols, IpfOptions { tol: args.tol, max_iter: args.max_iter })?;
            if !fit.converged {
                eprintln!("warning: IPF did not converge in {} iterations", fit.iterations);
            }
            match fmt {
                OutputFormat::Json => json(&fit),
                OutputFormat::Csv => Ok([
                    format::section(
                        "fitted",
                        &format::write_matrix(fit.table.rows(), fit.table.cols(), fit.table.cells()),
                    ),
                    format::section("iterations", &format!("{}\n", fit.iterations)),
                    format::section("converged", &format!("{}\n", fit.converged)),
                    format::section("max_deviation", &format!("{}\n", format::num(fit.max_deviation))),
                ]
                .concat()),
            }
        }
    }
}

/// Parses `args`, runs the command, writes the output, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = dispatch(&cli).and_then(|out| match &cli.out {
        Some(path) => std::fs::write(path, out)
            .map_err(|source| CliError::Write { path: path.display().to_string(), source }),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
