//! Command-line front end of the `coeffgap` executable.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, input or I/O error.
//! Machine-readable output goes to `--out` (`-` for stdout); notes and
//! summaries go to stderr.

mod commands;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::families::FamilyAngle;
use crate::functionals::GapDirection;
use crate::optimize::{PolarGrid, DEFAULT_LOCAL_STEPS, DEFAULT_P_GRID, DEFAULT_REFINEMENTS};
use crate::series::DEFAULT_ORDER;
use commands::{Class, Family, OptimizeSettings};
use report::{to_json, Params, VerificationReport};
use verify::Target;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), message: e.to_string() }
    }
}

/// Destination of a command's main output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

impl Output {
    fn parse(s: &str) -> Self {
        if s == "-" {
            Output::Stdout
        } else {
            Output::File(PathBuf::from(s))
        }
    }

    fn write(&self, content: &str) -> Result<(), CliError> {
        match self {
            Output::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(content.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::io(Path::new("<stdout>"), e))
            }
            Output::File(path) => fs::write(path, content).map_err(|e| CliError::io(path, e)),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "coeffgap", version, about = "Successive coefficients of convex functions: checks, scans and optimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    /// |a_{n+1}| - |a_n|
    Up,
    /// |a_n| - |a_{n+1}|
    Down,
    /// |a_{n+1} - a_n|
    Diff,
}

impl From<KindArg> for GapDirection {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Up => GapDirection::Up,
            KindArg::Down => GapDirection::Down,
            KindArg::Diff => GapDirection::Diff,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// convex L_phi, a_n = sin(n phi) / (n sin phi)
    #[value(name = "L")]
    L,
    /// starlike K_phi, a_n = sin(n phi) / sin phi
    #[value(name = "K")]
    K,
    /// function generated by the Herglotz measure in --kernel
    #[value(name = "kernel-file")]
    KernelFile,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Convex,
    Starlike,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long, value_enum)]
        target: Target,
        /// Sample count for the randomized checks.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Tabulate Psi_n on (0, pi) as CSV, with a JSON sidecar locating the maximum.
    ScanPsi {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long, default_value = "-")]
        out: String,
        /// Sidecar path; defaults to the CSV path with a .json extension.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Maximize a coefficient gap over convex functions.
    Optimize {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        /// Fix a_2 = p/2 (n <= 3 only).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_P_GRID)]
        p_grid: usize,
        #[arg(long, default_value_t = PolarGrid::default().radial)]
        radial: usize,
        #[arg(long, default_value_t = PolarGrid::default().angular)]
        angular: usize,
        #[arg(long, default_value_t = DEFAULT_REFINEMENTS)]
        refinements: usize,
        /// Atoms per Herglotz measure (default: n).
        #[arg(long)]
        atoms: Option<usize>,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_LOCAL_STEPS)]
        local_steps: usize,
        /// Grid of the Psi_n scan that complements the search for --kind down.
        #[arg(long, default_value_t = 10_000)]
        scan_grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Write the coefficients a_1..a_order of a family member as CSV.
    Coeffs {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Angle as a multiple of pi.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "arccos")]
        phi_over_pi: Option<f64>,
        /// Angle given by its cosine.
        #[arg(long, allow_hyphen_values = true)]
        arccos: Option<f64>,
        /// Herglotz measure JSON: {"atoms":[{"gamma":..,"phi_over_pi":..}]}.
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Class generated from --kernel.
        #[arg(long, value_enum, default_value = "convex")]
        class: ClassArg,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Toeplitz determinants D_1..D_k of a coefficient prefix and the feasibility verdict.
    Toeplitz {
        /// JSON list of p_1..p_k (numbers, [re, im] pairs or {"re","im"} objects).
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

/// Runs the executable on the process arguments and returns the exit code.
pub fn run() -> i32 {
    run_with(std::env::args_os())
}

pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("coeffgap: error: {e}");
            EXIT_USAGE
        }
    }
}

fn finish(report: &VerificationReport, out: &Output) -> Result<i32, CliError> {
    out.write(&to_json(report))?;
    eprint!("{}", report.summary());
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Verify { target, samples, seed, out } => {
            let checks = verify::run(target, samples, seed);
            let params = Params::new().text("target", target.name()).int("samples", samples as u64).int("seed", seed);
            finish(&VerificationReport::new("verify", params, checks), &Output::parse(&out))
        }
        Command::ScanPsi { n, points, out, sidecar } => {
            commands::scan_psi(n, points, &Output::parse(&out), sidecar.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Optimize {
            kind,
            n,
            p,
            p_grid,
            radial,
            angular,
            refinements,
            atoms,
            restarts,
            local_steps,
            scan_grid,
            seed,
            out,
        } => {
            let settings = OptimizeSettings {
                direction: kind.into(),
                n,
                p,
                p_grid,
                grid: PolarGrid { radial, angular },
                refinements,
                atoms,
                restarts,
                local_steps,
                scan_grid,
                seed,
            };
            let report = commands::optimize(&settings, &Output::parse(&out))?;
            if report.lower_bound_only {
                eprintln!("note: LOWER BOUND ONLY: {} is a lower bound for the supremum", report.value);
            }
            Ok(EXIT_OK)
        }
        Command::Coeffs { family, phi_over_pi, arccos, kernel, class, order, out } => {
            let angle = match (phi_over_pi, arccos) {
                (Some(t), _) => Some(FamilyAngle::from_over_pi(t).map_err(|e| CliError::Usage(e.to_string()))?),
                (None, Some(c)) => Some(FamilyAngle::from_arccos(c).map_err(|e| CliError::Usage(e.to_string()))?),
                (None, None) => None,
            };
            let family = match family {
                FamilyArg::L => Family::L,
                FamilyArg::K => Family::K,
                FamilyArg::KernelFile => Family::KernelFile,
            };
            let class = match class {
                ClassArg::Convex => Class::Convex,
                ClassArg::Starlike => Class::Starlike,
            };
            commands::coeffs(family, angle, kernel.as_deref(), class, order, &Output::parse(&out))?;
            Ok(EXIT_OK)
        }
        Command::Toeplitz { input, tol, out } => {
            let report = commands::toeplitz(&input, tol)?;
            finish(&report, &Output::parse(&out))
        }
    }
}
