//! `snn`: ingest corpora, sample coauthorship complexes, train imputation
//! models and aggregate their metrics.

mod commands;
mod manifest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use simplicial_nn::imputation::DEFAULT_RATES;

#[derive(Parser, Debug)]
#[command(
    name = "snn",
    version,
    about = "Simplicial neural network imputation experiments"
)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and filter a paper corpus into the tab-separated corpus format.
    Ingest(IngestArgs),
    /// Sample papers by random walk and write the coauthorship complex with its cochains.
    Sample(SampleArgs),
    /// Damage cochains, train the network, impute and score against the baselines.
    Train(TrainArgs),
    /// Aggregate metrics files into mean ± std per method and rate.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    S2orc,
    Tsv,
}

#[derive(Args, Debug, Serialize)]
pub struct IngestArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value = "s2orc")]
    pub format: Format,
    #[arg(long, default_value_t = 5)]
    pub min_citations: u64,
    #[arg(long, default_value_t = 10)]
    pub max_authors: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    /// Corpus file, usually the `corpus.tsv` written by `ingest`.
    #[arg(
        long,
        required_unless_present = "synthetic",
        conflicts_with = "synthetic"
    )]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,
    /// Use a generated 30-paper corpus with this generator seed instead of a file.
    #[arg(long)]
    pub synthetic: Option<u64>,
    #[arg(long, default_value_t = 80)]
    pub walk_length: usize,
    /// Project every paper instead of sampling a walk.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct TrainArgs {
    /// Directory written by `sample`.
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub dimension: usize,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_RATES.to_vec())]
    pub rates: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    /// Channel widths, input first.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 30, 30, 1])]
    pub layers: Vec<usize>,
    /// Polynomial degree of every layer.
    #[arg(long, default_value_t = 5)]
    pub degree: usize,
    #[arg(long, default_value_t = 0.01)]
    pub leaky_slope: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Width of the absolute-error histogram bins.
    #[arg(long, default_value_t = 1.0)]
    pub bin_width: f64,
    /// Score only the three baselines.
    #[arg(long, conflicts_with = "transfer")]
    pub baselines_only: bool,
    /// Evaluate the trained models on this second complex directory.
    #[arg(long, value_name = "EVAL_COMPLEX")]
    pub transfer: Option<PathBuf>,
    /// Divide the Laplacian by its largest eigenvalue (off by default).
    #[arg(long)]
    pub rescale_laplacian: bool,
    /// Standardize inputs and targets with the known values' mean and std (off by default).
    #[arg(long)]
    pub standardize: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct ReportArgs {
    /// One or more `metrics.csv` files.
    #[arg(required = true)]
    pub metrics: Vec<PathBuf>,
    /// Directory for `summary.txt` and `plot.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Marks an error as a usage problem (exit code 1).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const USAGE: u8 = 1;
const DATA: u8 = 2;
const NUMERICAL: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    use simplicial_nn::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return USAGE;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::InvalidParameter(_) => USAGE,
                E::NonFiniteGradient(_) | E::Diverged { .. } => NUMERICAL,
                _ => DATA,
            };
        }
    }
    DATA
}

/// Makes every path argument absolute so the echoed config is self-contained.
fn resolve_paths(command: &mut Command) -> std::io::Result<()> {
    let abs = |p: &mut PathBuf| -> std::io::Result<()> {
        *p = std::path::absolute(&*p)?;
        Ok(())
    };
    match command {
        Command::Ingest(a) => {
            abs(&mut a.corpus)?;
            abs(&mut a.out)
        }
        Command::Sample(a) => {
            if let Some(c) = &mut a.corpus {
                abs(c)?;
            }
            abs(&mut a.out)
        }
        Command::Train(a) => {
            abs(&mut a.complex)?;
            if let Some(t) = &mut a.transfer {
                abs(t)?;
            }
            abs(&mut a.out)
        }
        Command::Report(a) => {
            a.metrics.iter_mut().try_for_each(abs)?;
            if let Some(o) = &mut a.out {
                abs(o)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let mut cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(e) = resolve_paths(&mut cli.command) {
        eprintln!("error: {e}");
        return ExitCode::from(DATA);
    }
    let result = match &cli.command {
        Command::Ingest(a) => commands::ingest(a, &argv),
        Command::Sample(a) => commands::sample(a, &argv),
        Command::Train(a) => commands::train(a, &argv),
        Command::Report(a) => report::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
