//! Command-line front end.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::elim::{EliminationOracle, LinearForm, MacaulayOracle};
use crate::error::Error;
use crate::grid::find_separating_block;
use crate::numerics::ComplexBox;
use crate::poly::{parse_system, parse_univariate, MultiPoly, PolynomialSystem, UniPoly};
use crate::roots::isolate;
use crate::slf::{build_slf_family, build_slf_family_with_block, select_strong_slf};
use crate::solver::solve;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "projsolve", version, about = "Certified solving of integer polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output quality in bits: boxes have half-width below 2^-precision.
    #[arg(long, global = true, default_value_t = 53, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Re-certify every reported box and fail on any violation.
    #[arg(long, global = true)]
    pub check: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isolate the complex roots of a univariate polynomial.
    Roots { input: Option<PathBuf> },
    /// Hidden-variable elimination along a linear form.
    Eliminate {
        input: Option<PathBuf>,
        /// Integer coefficients c1,...,cn; one of them must be 1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        form: Vec<BigInt>,
    },
    /// Separating block for the root grid of two univariate polynomials.
    GridSep {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        block: u64,
    },
    /// Strong separating linear form of a system.
    Slf {
        input: Option<PathBuf>,
        /// Root block length; defaults to 2nd + 1.
        #[arg(long)]
        block: Option<u64>,
    },
    /// Isolate all solutions of a square system.
    Solve { input: Option<PathBuf> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Roots { .. } => "roots",
            Command::Eliminate { .. } => "eliminate",
            Command::GridSep { .. } => "grid-sep",
            Command::Slf { .. } => "slf",
            Command::Solve { .. } => "solve",
        }
    }

    fn input(&self) -> Option<&Path> {
        match self {
            Command::Roots { input }
            | Command::Eliminate { input, .. }
            | Command::GridSep { input, .. }
            | Command::Slf { input, .. }
            | Command::Solve { input } => input.as_deref(),
        }
    }
}

/// Options shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: &'static str,
    pub precision_bits: u32,
    pub seed: u64,
    pub format: Format,
    pub check: bool,
    pub timing: bool,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> RunConfig {
        RunConfig {
            command: cli.command.name(),
            precision_bits: cli.precision,
            seed: cli.seed,
            format: cli.format,
            check: cli.check,
            timing: cli.timing,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_POSITIVE_DIMENSIONAL: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match &e {
            Error::Parse { .. } | Error::NonSquare { .. } | Error::VariableMismatch { .. } => EXIT_PARSE,
            Error::NotZeroDimensional(_) | Error::ZeroPolynomial | Error::SolutionsAtInfinity => {
                EXIT_POSITIVE_DIMENSIONAL
            }
            Error::Certification(_)
            | Error::NoPreimage { .. }
            | Error::AmbiguousPreimage { .. }
            | Error::NoConvergence { .. }
            | Error::Unrefinable { .. } => EXIT_CERTIFICATION,
            _ => EXIT_IO,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    };
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(io),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io)?;
            Ok(s)
        }
    }
}

/// Reads a system file (stdin for `None` or `-`).
pub fn parse_system_file(path: Option<&Path>) -> Result<PolynomialSystem, CliError> {
    Ok(parse_system(&read_input(path)?)?)
}

/// Parses two univariate polynomials, one per line.
fn parse_pair(src: &str) -> Result<(UniPoly, UniPoly), Error> {
    let lines: Vec<&str> = src
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    if lines.len() != 2 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected two polynomials, found {}", lines.len()),
        });
    }
    Ok((parse_univariate(lines[0])?, parse_univariate(lines[1])?))
}

fn check_failed(what: &str) -> CliError {
    CliError {
        code: EXIT_CERTIFICATION,
        message: format!("check failed: {what}"),
    }
}

/// A command result before serialization.
pub struct Outcome {
    pub result: serde_json::Value,
    pub oracle_calls: u64,
    pub text: String,
}

fn fmt_box(b: &ComplexBox) -> String {
    format!(
        "[{:.17e}, {:.17e}] + i[{:.17e}, {:.17e}]",
        b.re.lo().to_f64(),
        b.re.hi().to_f64(),
        b.im.lo().to_f64(),
        b.im.hi().to_f64()
    )
}

fn coeff_list(c: &[BigInt]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Runs `command` on already-read input text.
pub fn execute(command: &Command, config: &RunConfig, src: &str) -> Result<Outcome, CliError> {
    let q = config.precision_bits;
    let mut text = String::new();
    match command {
        Command::Roots { .. } => {
            let f = parse_univariate(src)?;
            let rs = isolate(&f, q)?;
            if config.check {
                let g = MultiPoly::from_uni(1, 0, &f);
                for (i, r) in rs.roots().iter().enumerate() {
                    if !g.eval_interval(std::slice::from_ref(&r.region)).contains_zero() {
                        return Err(check_failed(&format!("root {i}")));
                    }
                }
            }
            for r in rs.roots() {
                let _ = writeln!(text, "{}  (multiplicity {})", fmt_box(&r.region), r.multiplicity);
            }
            let mut result = rs.to_json();
            result["polynomial"] = f.to_json();
            Ok(Outcome { result, oracle_calls: 0, text })
        }
        Command::Eliminate { form, .. } => {
            let system = parse_system(src)?;
            let form = LinearForm::new(form.clone())?;
            let mut oracle = MacaulayOracle::new(config.seed);
            let r = oracle.eliminate(&system, &form)?;
            let _ = writeln!(text, "coefficients: {}", coeff_list(r.polynomial.coeffs()));
            let _ = writeln!(text, "strong: {}", r.strong.as_str());
            Ok(Outcome {
                result: r.to_json(),
                oracle_calls: oracle.calls(),
                text,
            })
        }
        Command::GridSep { block, .. } => {
            let (f, g) = parse_pair(src)?;
            let (x, y) = (isolate(&f, 4)?, isolate(&g, 4)?);
            let sep = find_separating_block(&x, &y, *block)?;
            let b = sep.block();
            let _ = writeln!(text, "block: {}..={}", b.start, b.end - 1);
            Ok(Outcome {
                result: serde_json::json!({
                    "s_star": sep.s_star,
                    "block": [b.start, b.end - 1],
                    "block_length": sep.block_length,
                    "search_range_max": sep.search_range_max,
                    "level_counts": sep.level_counts,
                }),
                oracle_calls: 0,
                text,
            })
        }
        Command::Slf { block, .. } => {
            let system = parse_system(src)?;
            let mut oracle = MacaulayOracle::new(config.seed);
            let family = match block {
                Some(c) => build_slf_family_with_block(&system, &mut oracle, *c)?,
                None => build_slf_family(&system, &mut oracle)?,
            };
            let family_json = family.to_json();
            let tree = select_strong_slf(family, &system, &mut oracle, config.seed)?;
            let _ = writeln!(text, "form: {}", coeff_list(tree.root_form().coeffs()));
            let _ = writeln!(text, "oracle calls: {}", tree.oracle_calls);
            let mut result = tree.to_json();
            result["family"] = family_json;
            Ok(Outcome {
                result,
                oracle_calls: tree.oracle_calls,
                text,
            })
        }
        Command::Solve { .. } => {
            let system = parse_system(src)?;
            let report = solve(&system, q, config.seed)?;
            if config.check {
                for (i, s) in report.solutions.iter().enumerate() {
                    if !s.certify(&system) {
                        return Err(check_failed(&format!("solution {i}")));
                    }
                }
            }
            for (k, s) in report.solutions.iter().enumerate() {
                let _ = writeln!(text, "solution {k}:");
                for (i, c) in s.coordinates.iter().enumerate() {
                    let _ = writeln!(text, "  x{} = {}", i + 1, fmt_box(c));
                }
            }
            let _ = writeln!(text, "{} solutions, {} at infinity", report.solutions.len(), report.at_infinity);
            Ok(Outcome {
                result: report.to_json(),
                oracle_calls: report.oracle_calls,
                text,
            })
        }
    }
}

/// Serializes an outcome with the run metadata.
pub fn emit_report(outcome: &Outcome, config: &RunConfig, elapsed_ms: Option<f64>) -> String {
    match config.format {
        Format::Json => {
            let mut v = serde_json::json!({
                "command": config.command,
                "seed": config.seed,
                "precision": config.precision_bits,
                "oracle_calls": outcome.oracle_calls,
                "result": outcome.result,
            });
            if let Some(ms) = elapsed_ms {
                v["timing_ms"] = serde_json::json!(ms);
            }
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = outcome.text.clone();
            if let Some(ms) = elapsed_ms {
                let _ = writeln!(s, "time: {ms:.3} ms");
            }
            s
        }
    }
}

/// Parses arguments, runs, and returns the report text.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let config = RunConfig::from(cli);
    let src = read_input(cli.command.input())?;
    let start = Instant::now();
    let outcome = execute(&cli.command, &config, &src)?;
    let elapsed = config.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok(emit_report(&outcome, &config, elapsed))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
