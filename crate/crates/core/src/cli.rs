//! Command-line front end.
//!
//! Exit status 0 on success, 1 for unreadable or invalid input and bad
//! arguments, 2 when a differentiability verdict required by the pipeline
//! fails.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{
    analyze, approximate, check_differentiable_scaled, fd_scale, parse_schedule, probe_points, smooth_once,
    write_convergence_csv, DEFAULT_DIFF_TOL,
};
use crate::arith;
use crate::conv::{self, GridFunction};
use crate::error::Error;
use crate::fuzzy::FuzzyNumber;
use crate::io::{read_fuzzy, sample, to_json, write_fuzzy, FileError, FuzzyFile};

/// Environment variable overriding the differentiability tolerance.
pub const TOL_ENV: &str = "FUZZ_TOL";

#[derive(Debug, Parser)]
#[command(name = "fuzzsmooth", version, about = "Fuzzy-number arithmetic, convolution and smoothing")]
pub struct Cli {
    /// Tolerance on one-sided slope gaps; overrides FUZZ_TOL.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a file describes a valid fuzzy number.
    Validate { file: PathBuf },
    /// Print the alpha-cut as "lo hi".
    Cut {
        file: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    Add(Binary),
    Sub(Binary),
    Mul(Binary),
    /// Sup-min convolution.
    Nabla(Binary),
    /// Convolve with a smoother built for the input; writes the result and
    /// `<out>.analysis.csv`.
    Smooth {
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// List kinks and jumps as CSV.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance and differentiability for a schedule of radii.
    Converge {
        file: PathBuf,
        /// Comma-separated radii or `geometric:<p0>,<n>`.
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership on a uniform grid as CSV.
    Sample {
        file: PathBuf,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest deviation of the grid convolution from the exact one.
    Oracle {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        step: f64,
        /// Also write the grid convolution as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
pub struct Binary {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numeric(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Tolerance from `--tol`, then `FUZZ_TOL`, then the default.
fn resolve_tol(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match (flag, std::env::var(TOL_ENV)) {
        (Some(t), _) => t,
        (None, Ok(v)) => v.trim().parse().map_err(|_| Failure::Input(format!("{TOL_ENV}={v:?} is not a number")))?,
        (None, Err(_)) => DEFAULT_DIFF_TOL,
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Failure::Input(format!("tolerance must be positive, got {tol}")))
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => out.write_all(text).map_err(|e| Failure::Input(e.to_string())),
    }
}

fn grid_csv(g: &GridFunction) -> Vec<u8> {
    let mut buf = Vec::new();
    g.write_csv(&mut buf).expect("writing to memory");
    buf
}

fn number_json(u: &FuzzyNumber) -> Vec<u8> {
    to_json(&FuzzyFile { number: u.data().clone(), smoother_spec: None }).into_bytes()
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let tol = resolve_tol(cli.tol)?;
    match cli.command {
        Command::Validate { file } => {
            read_fuzzy(&file)?;
            writeln!(out, "ok").ok();
        }
        Command::Cut { file, alpha } => {
            let (u, _) = read_fuzzy(&file)?;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Failure::Input(format!("alpha {alpha} outside [0, 1]")));
            }
            let c = u.alpha_cut(alpha);
            writeln!(out, "{} {}", c.lo, c.hi).ok();
        }
        Command::Add(b) => binary(b, arith::add, out)?,
        Command::Sub(b) => binary(b, arith::sub, out)?,
        Command::Mul(b) => binary(b, arith::mul, out)?,
        Command::Nabla(b) => binary(b, conv::nabla, out)?,
        Command::Smooth { file, p, out: path } => {
            let (u, _) = read_fuzzy(&file)?;
            let report = analyze(&u);
            let s = smooth_once(&u, p, &report)?;
            write_fuzzy(&path, &s.result, Some(&s.spec))?;
            let csv_path = PathBuf::from(format!("{}.analysis.csv", path.display()));
            let mut csv = Vec::new();
            analyze(&s.result).write_csv(&mut csv).expect("writing to memory");
            fs::write(&csv_path, csv).map_err(|e| io_failure(&csv_path, e))?;
            let probes = probe_points(&s.smoother, &report, &s.result);
            let verdicts = check_differentiable_scaled(&s.result, &probes, tol, fd_scale(p))?;
            if let Some(v) = verdicts.iter().find(|v| !v.pass) {
                return Err(Failure::Numeric(format!("result not differentiable at x = {} (gap {})", v.x, v.gap)));
            }
        }
        Command::Analyze { file, out: path } => {
            let (u, _) = read_fuzzy(&file)?;
            let mut csv = Vec::new();
            analyze(&u).write_csv(&mut csv).expect("writing to memory");
            emit(out, path.as_deref(), &csv)?;
        }
        Command::Converge { file, schedule, out: path } => {
            let (u, _) = read_fuzzy(&file)?;
            let schedule = parse_schedule(&schedule)?;
            let rows = approximate(&u, &schedule, tol)?;
            let mut csv = Vec::new();
            write_convergence_csv(&rows, &mut csv).expect("writing to memory");
            emit(out, path.as_deref(), &csv)?;
            if let Some(r) = rows.iter().find(|r| !r.diff_ok) {
                return Err(Failure::Numeric(format!("differentiability probe failed at p = {}", r.p)));
            }
        }
        Command::Sample { file, step, out: path } => {
            let (u, _) = read_fuzzy(&file)?;
            if !(step.is_finite() && step > 0.0) {
                return Err(Failure::Input(format!("step must be positive, got {step}")));
            }
            emit(out, path.as_deref(), &grid_csv(&sample(&u, step)))?;
        }
        Command::Oracle { a, b, step, out: path } => {
            let (u, _) = read_fuzzy(&a)?;
            let (v, _) = read_fuzzy(&b)?;
            if let Some(p) = path {
                let g = conv::sup_min_grid(&u, &v, step)?;
                fs::write(&p, grid_csv(&g)).map_err(|e| io_failure(&p, e))?;
            }
            let gap = conv::oracle_gap(&u, &v, step)?;
            writeln!(out, "{gap:.16e}").ok();
        }
    }
    Ok(())
}

fn binary(b: Binary, op: fn(&FuzzyNumber, &FuzzyNumber) -> FuzzyNumber, out: &mut dyn Write) -> Result<(), Failure> {
    let (u, _) = read_fuzzy(&b.a)?;
    let (v, _) = read_fuzzy(&b.b)?;
    emit(out, b.out.as_deref(), &number_json(&op(&u, &v)))
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                out.write_all(text.as_bytes()).ok();
            } else {
                err.write_all(text.as_bytes()).ok();
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            writeln!(err, "error: {msg}").ok();
            1
        }
        Err(Failure::Numeric(msg)) => {
            writeln!(err, "numeric failure: {msg}").ok();
            2
        }
    }
}
