//! `ics`: generate, analyze and synthesize iterated circumcenter sequences.
//!
//! Exit codes: 0 success, 1 malformed arguments or unreadable input,
//! 2 parameters outside `U_d` or another constraint violation,
//! 3 degenerate geometry, 4 no periodic solution on the scanned chord.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ics",
    version,
    about = "Iterated circumcenter sequences in R^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a special ICS from parameters or a seed file and write it out.
    Generate(GenerateArgs),
    /// Report position checks, characteristic sequence, scale factor,
    /// shift vector and period of a points file.
    Analyze(AnalyzeArgs),
    /// Find parameters of periodic ICSs (scale factor 1).
    Periodic(PeriodicArgs),
    /// Compare the closed-form maximum of the product G with a numeric ascent.
    Maxprod(MaxprodArgs),
    /// Print the characteristic (Lyness) orbit of a parameter vector.
    Lyness(LynessArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Dimension d >= 2.
    #[arg(long)]
    dim: usize,
    /// Comma-separated a_1,...,a_{d-1}.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        conflicts_with = "seed_file",
        required_unless_present = "seed_file"
    )]
    params: Option<Vec<f64>>,
    /// Points file (JSON or CSV) holding d + 1 points in good position.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// Number of circumcenter steps after the seed.
    #[arg(long, default_value_t = 0)]
    steps: usize,
    /// Length of the first segment for parameter seeds.
    #[arg(long, default_value_t = 1.0)]
    b1: f64,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FileFormat::Json)]
    format: FileFormat,
    /// Write a header row in CSV output.
    #[arg(long)]
    header: bool,
    /// Relative tolerance for position checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Points file (JSON, or CSV by extension).
    #[arg(long = "in")]
    input: PathBuf,
    /// Relative tolerance for period detection.
    #[arg(long, default_value_t = ics_core::engine::DEFAULT_PERIOD_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct PeriodicArgs {
    #[arg(long)]
    dim: usize,
    /// Pin coordinate i (1-based) to value v; repeatable.
    #[arg(long = "fix", value_parser = parse_fix)]
    fix: Vec<(usize, f64)>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct MaxprodArgs {
    #[arg(long)]
    dim: usize,
    /// Number of random interior starting points.
    #[arg(long, default_value_t = 5)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args, Debug)]
struct LynessArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    terms: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

fn parse_fix(s: &str) -> Result<(usize, f64), String> {
    let (i, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected i=v, got '{s}'"))?;
    let i = i
        .trim()
        .parse()
        .map_err(|e| format!("bad index '{i}': {e}"))?;
    let v = v
        .trim()
        .parse()
        .map_err(|e| format!("bad value '{v}': {e}"))?;
    Ok((i, v))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ICS_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Periodic(args) => commands::periodic(args),
        Command::Maxprod(args) => commands::maxprod(args),
        Command::Lyness(args) => commands::lyness(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
