//! `poisson3`: batch front-end for classifying singular points of Poisson
//! structures on R³ and predicting their bifurcations.
//!
//! Every command reads one JSON document, writes a JSON report to stdout
//! and a one-line summary to stderr. Exit codes: 0 success, 1 domain
//! failure (including a failed check or verdict), 2 usage error.

mod commands;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use commands::{BifurcateArgs, Outcome};
use error::CliError;
use input::InputDocument;

#[derive(Parser)]
#[command(name = "poisson3", version, about = "Singularities and bifurcations of Poisson structures on R^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi residual of the bracket jet.
    Check { input: PathBuf },
    /// Curl (modular vector field) of the bivector.
    Curl { input: PathBuf },
    /// Exact normal-form reduction.
    NormalForm {
        input: PathBuf,
        /// Working degree D (defaults to the input truncation).
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Singularity class of the germ at the origin for eps = 0.
    Classify {
        input: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Predicted bifurcation scenario, checked numerically over an eps grid.
    Bifurcate {
        input: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        /// Grid `A:B:N` of N evenly spaced eps values.
        #[arg(long, default_value = "-0.1:0.1:21", value_parser = commands::parse_eps, allow_hyphen_values = true)]
        eps: (f64, f64, usize),
        /// Half-width of the search cube.
        #[arg(long = "box", default_value_t = 1.0)]
        half_width: f64,
        /// Residual tolerance of accepted singular points.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Newton seeds per axis.
        #[arg(long, default_value_t = 21)]
        seeds: usize,
        /// Skip the numerical verification.
        #[arg(long)]
        predict_only: bool,
        /// Also write the point cloud as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Convert between a bivector and its Pfaffian 1-form.
    #[command(group(ArgGroup::new("direction").required(true).args(["to", "from"])))]
    Pfaffian {
        input: PathBuf,
        /// Bivector document to 1-form document.
        #[arg(long)]
        to: bool,
        /// 1-form document to bivector document.
        #[arg(long)]
        from: bool,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("POISSON3_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("POISSON3_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    configure_threads()?;
    match cmd {
        Command::Check { input } => commands::check(&InputDocument::load(&input)?),
        Command::Curl { input } => commands::curl(&InputDocument::load(&input)?),
        Command::NormalForm { input, degree } => commands::normal_form(&InputDocument::load(&input)?, degree),
        Command::Classify { input, degree } => commands::classify_cmd(&InputDocument::load(&input)?, degree),
        Command::Bifurcate { input, degree, eps, half_width, tol, seeds, predict_only, csv } => {
            if !(half_width > 0.0 && tol > 0.0 && seeds > 0) {
                return Err(CliError::Usage("--box, --tol and --seeds must be positive".into()));
            }
            let args = BifurcateArgs { degree, eps, half_width, tol, seeds, predict_only, csv };
            commands::bifurcate(&InputDocument::load(&input)?, &args)
        }
        Command::Pfaffian { input, to, .. } => {
            let doc = InputDocument::load(&input)?;
            if to {
                commands::pfaffian_to(&doc)
            } else {
                commands::pfaffian_from(&doc)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.report).expect("reports serialize");
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            eprintln!("{}", out.summary);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
