mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;
use thetazeta::Error;

#[derive(Parser, Debug)]
#[command(name = "thetazeta", version, about = "Prime-count integral θ(z), zeta identities and Taylor-radius scans")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Working precision in decimal digits (15..=32; above 16 selects double-double)
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Prime checkpoint cache file
    #[arg(long, global = true, env = "THETAZETA_CACHE", default_value = ".thetazeta/primes.cache")]
    pub cache: PathBuf,
    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Run every loop on the calling thread
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build or extend the prime cache and print π(limit)
    Primes(commands::PrimesArgs),
    /// Residuals of the prime-sum identities
    Identities(commands::IdentitiesArgs),
    /// Radius-of-convergence scan of θ along a = 1 + ε + ib
    Scan(commands::ScanArgs),
    /// Refine the listed zeta-zero ordinates on the critical line
    Zeros(commands::ZerosArgs),
    /// Closed form against quadrature for the model kernel, plus radius calibration
    Counterexample(commands::CounterexampleArgs),
    /// Evaluate θ or one of its derivatives
    Theta(commands::ThetaArgs),
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Tolerance(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Tolerance(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Core(e) => match e {
                Error::Io(_) | Error::Resource(_) | Error::Format(_) | Error::Version(_) => 3,
                Error::NoiseFloor { .. } | Error::InsufficientData(_) => 1,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Tolerance(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("thetazeta: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
