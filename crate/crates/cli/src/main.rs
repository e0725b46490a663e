//! `page-spectrum`: spectra of the Laplacian and the Lichnerowicz operator on
//! the Page metric, with cross-check suites and the large-overtone fit.
//!
//! Exit codes: 0 success, 1 numerical failure or failed suite, 2 invalid input.
//! Errors are also reported on stderr as a single JSON record.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use page_spectrum::validation::Suite;
use page_spectrum::SpectrumError;

use config::{parse_window, ComputeFlags, FileConfig, Format, ProblemKind, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Invalid(_) => "invalid_input",
            CliError::Numerical(_) => "numerical_failure",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            _ => 1,
        }
    }

    fn report(&self) -> ExitCode {
        let record = serde_json::json!({
            "error": { "kind": self.kind(), "message": self.message() },
            "exit_code": self.exit_code(),
        });
        eprintln!("{record}");
        ExitCode::from(self.exit_code())
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::InvalidInput(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "page-spectrum", version, about = "Eigenvalue spectra on the Page metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Perturbation,
    Shooting,
    NuZero,
    Integrals,
    Series,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Converged eigenvalues of one problem, written as CSV or JSON.
    Compute {
        #[arg(long, value_enum)]
        problem: Option<ProblemKind>,
        /// Fiber charge; the sign is irrelevant.
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
        /// Sphere index, k >= 0.
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
        /// Number of overtones, counted from N = 0.
        #[arg(long)]
        overtones: Option<usize>,
        /// One value builds the ladder {r, r+25, r+50}; several are used as given.
        #[arg(long, value_delimiter = ',')]
        resolution: Option<Vec<usize>>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include eigenfunctions normalized to u(1) = 1.
        #[arg(long)]
        eigenfunctions: bool,
        /// Key-value (TOML) file with any of the settings above.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Cosmological constant Λ.
        #[arg(long)]
        lambda_cc: Option<f64>,
        /// Largest accepted change between successive resolutions.
        #[arg(long)]
        convergence_tol: Option<f64>,
        /// Largest accepted |Im λ| / (1 + |Re λ|).
        #[arg(long)]
        realness_tol: Option<f64>,
    },
    /// Cross-check suites with measured residuals.
    Validate {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        suite: Vec<SuiteArg>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Fit λ_N ≈ a·N(N+2|n|+1) + b over an overtone window.
    Fit {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0")]
        n: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0")]
        k: Vec<i64>,
        #[arg(long, value_parser = parse_window, default_value = "200:500")]
        window: (usize, usize),
        #[arg(long, default_value_t = 800)]
        resolution: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn suites(args: &[SuiteArg]) -> Vec<Suite> {
    let mut out: Vec<Suite> = Vec::new();
    for a in args {
        let add: &[Suite] = match a {
            SuiteArg::Perturbation => &[Suite::Perturbation],
            SuiteArg::Shooting => &[Suite::Shooting],
            SuiteArg::NuZero => &[Suite::NuZero],
            SuiteArg::Integrals => &[Suite::Integrals],
            SuiteArg::Series => &[Suite::Series],
            SuiteArg::All => &Suite::ALL,
        };
        for s in add {
            if !out.contains(s) {
                out.push(*s);
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Compute {
            problem,
            n,
            k,
            overtones,
            resolution,
            format,
            out,
            eigenfunctions,
            config,
            lambda_cc,
            convergence_tol,
            realness_tol,
        } => {
            let file = config.as_deref().map(FileConfig::load).transpose()?;
            let flags = ComputeFlags {
                problem,
                n,
                k,
                overtones,
                resolution,
                format,
                out,
                lambda_cc,
                eigenfunctions,
                convergence_tol,
                realness_tol,
            };
            commands::compute(&RunConfig::resolve(flags, file)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { suite, format } => {
            let passed = commands::validate(&suites(&suite), format)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Fit { n, k, window, resolution, format } => {
            commands::fit(&n, &k, window, resolution, format)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return CliError::Invalid(e.to_string().trim_end().to_string()).report(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => e.report(),
    }
}
