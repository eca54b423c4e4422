//! `logfreq`: experiment driver for the log-frequency frame library.
//!
//! Exit codes: 0 success, 1 failed check or numerical error, 2 usage error.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

use config::{ConfigFile, TermSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Frame(#[from] logfreq::frame_core::FrameError),
    #[error(transparent)]
    Match(#[from] logfreq::matcher::MatchError),
    #[error(transparent)]
    Sampling(#[from] logfreq::sampling::SamplingError),
    #[error(transparent)]
    Carleson(#[from] logfreq::carleson::CarlesonError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "logfreq", version, about = "Log-frequency frame experiments")]
struct Cli {
    /// TOML file with one table per command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frame bound estimates over a sweep of interval lengths (CSV).
    FrameBounds(FrameBoundsArgs),
    /// Minimal-norm Dirichlet match of Re f on an interval (JSON).
    Match(MatchArgs),
    /// Extremal witness checks over a sweep of T (CSV).
    Extremal(ExtremalArgs),
    /// Frequency set construction and its checks (JSON).
    Sampling(SamplingArgs),
    /// Exact Carleson constant of a measure (CSV of atoms).
    Carleson(CarlesonArgs),
    /// Seeded fuzz campaign for the Hilbert-type inequality (JSON).
    MvFuzz(MvFuzzArgs),
    /// Frame operator identity on the raised-cosine bump (JSON).
    VerifyIdentity(IdentityArgs),
}

/// Comma-separated floats; the empty string is the empty list.
#[derive(Debug, Clone)]
struct FloatList(Vec<f64>);

fn parse_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<f64>().map_err(|e| format!("'{x}': {e}")))
        .collect::<Result<_, _>>()
        .map(FloatList)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    match parse_list(s)?.0.as_slice() {
        [a, b] => Ok([*a, *b]),
        _ => Err(format!("expected two comma-separated numbers, got '{s}'")),
    }
}

#[derive(Debug, Args)]
struct FrameBoundsArgs {
    /// Comma-separated interval lengths.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    lengths: Option<FloatList>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Also write the estimated spectra as CSV.
    #[arg(long)]
    spectrum_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatchArgs {
    /// `re,im,shift_re,shift_im,power` for `c (s + a)^{-k}`; repeatable, summed.
    #[arg(long = "term", allow_hyphen_values = true)]
    terms: Vec<TermSpec>,
    /// Shorthand for `--term 1,0,0,0,1`, i.e. f(s) = 1/s.
    #[arg(long)]
    reciprocal: bool,
    /// Interval endpoints `a,b`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    interval: Option<[f64; 2]>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    tail_cut: Option<f64>,
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    #[arg(long, value_parser = parse_list)]
    lengths: Option<FloatList>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Debug, Args)]
struct CarlesonArgs {
    /// CSV with columns sigma, t, mass.
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    shift: Option<f64>,
    #[arg(long)]
    oracle_samples: Option<usize>,
}

#[derive(Debug, Args)]
struct MvFuzzArgs {
    #[arg(long)]
    instances: Option<u64>,
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Debug, Args)]
struct IdentityArgs {
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    interval: Option<[f64; 2]>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if let Some(n) = cli.threads.or(file.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let seed = cli.seed.or(file.seed);
    let out = cli.out.as_deref();
    match cli.command {
        Command::FrameBounds(args) => {
            let mut cfg = file.frame_bounds;
            set(&mut cfg.lengths, args.lengths.map(|l| l.0));
            set(&mut cfg.truncation, args.truncation);
            set(&mut cfg.grid, args.grid);
            set(&mut cfg.alpha, args.alpha);
            cfg.spectrum_out = args.spectrum_out.or(cfg.spectrum_out);
            commands::frame_bounds(&cfg, out)
        }
        Command::Match(args) => {
            let mut cfg = file.matching;
            let mut terms = args.terms;
            if args.reciprocal {
                terms.insert(
                    0,
                    TermSpec {
                        coeff: [1.0, 0.0],
                        shift: [0.0, 0.0],
                        power: 1,
                    },
                );
            }
            if !terms.is_empty() {
                cfg.terms = terms;
            }
            set(&mut cfg.interval, args.interval);
            set(&mut cfg.truncation, args.truncation);
            set(&mut cfg.grid, args.grid);
            set(&mut cfg.cutoff, args.cutoff);
            set(&mut cfg.tail_cut, args.tail_cut);
            commands::matching(&cfg, out)
        }
        Command::Extremal(args) => {
            let mut cfg = file.extremal;
            set(&mut cfg.lengths, args.lengths.map(|l| l.0));
            set(&mut cfg.epsilon, args.epsilon);
            commands::extremal(&cfg, out)
        }
        Command::Sampling(args) => {
            let mut cfg = file.sampling;
            set(&mut cfg.length, args.length);
            set(&mut cfg.eta, args.eta);
            cfg.k_max = args.k_max.or(cfg.k_max);
            commands::sampling(&cfg, out)
        }
        Command::Carleson(args) => {
            let mut cfg = file.carleson;
            cfg.measure = args.measure.or(cfg.measure);
            set(&mut cfg.length, args.length);
            set(&mut cfg.epsilon, args.epsilon);
            cfg.shift = args.shift.or(cfg.shift);
            set(&mut cfg.oracle_samples, args.oracle_samples);
            commands::carleson(&cfg, seed, out)
        }
        Command::MvFuzz(args) => {
            let mut cfg = file.mv_fuzz;
            set(&mut cfg.instances, args.instances);
            set(&mut cfg.max_len, args.max_len);
            commands::mv(&cfg, seed, out)
        }
        Command::VerifyIdentity(args) => {
            let mut cfg = file.verify_identity;
            set(&mut cfg.interval, args.interval);
            set(&mut cfg.truncation, args.truncation);
            set(&mut cfg.grid, args.grid);
            set(&mut cfg.threshold, args.threshold);
            commands::verify_identity(&cfg, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("logfreq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
