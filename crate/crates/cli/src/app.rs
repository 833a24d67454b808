//! Command definitions and dispatch.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use tilecoh_core::lattice::{IntMatrix, DEFAULT_MAX_PRIME};
use tilecoh_core::substitution::DEFAULT_HORIZON;
use tilecoh_core::{
    compute_cohomology, invariance_suite, parse_batch, parse_substitution, Error, Options,
    Substitution, SuiteOptions,
};

use crate::dot::{complex_dot, map_dot};
use crate::report::{FailedReport, Report};
use crate::text::{render, suite_table, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_PRIMITIVE: i32 = 3;
pub const EXIT_PERIODIC: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "tilecoh",
    version,
    about = "First cohomology of 1-D substitution tiling spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Screen {
    /// Longest word length inspected by the periodicity screen.
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: usize,
    /// Largest prime used for mod-p invariants.
    #[arg(long, default_value_t = DEFAULT_MAX_PRIME)]
    pub max_prime: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the first cohomology of one substitution.
    Analyze {
        file: PathBuf,
        /// Emit the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Write K.dot and g.dot into this directory.
        #[arg(long, value_name = "DIR")]
        dot: Option<PathBuf>,
        /// JSON file with an explicit basis matrix P (rows of integers).
        #[arg(long, value_name = "FILE")]
        basis: Option<PathBuf>,
        /// Include stage timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        screen: Screen,
    },
    /// Compare invariants of φ, a power of φ and the collared substitution.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        power: usize,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        collar: Switch,
        #[command(flatten)]
        screen: Screen,
    },
    /// Analyze every blank-line separated block of a file; prints a JSON array.
    Batch {
        file: PathBuf,
        #[command(flatten)]
        screen: Screen,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::InvalidSubstitution(_) | Error::InvalidBasis(_) => EXIT_PARSE,
        Error::NotPrimitive { .. } => EXIT_NOT_PRIMITIVE,
        Error::Periodic { .. } => EXIT_PERIODIC,
        _ => EXIT_INTERNAL,
    }
}

/// Color is used only on a terminal, and never with `TILECOH_COLOR=0`.
pub fn style_for_stdout() -> Style {
    let disabled = std::env::var("TILECOH_COLOR").is_ok_and(|v| v == "0");
    Style {
        color: !disabled && io::stdout().is_terminal(),
    }
}

/// Reads a basis from JSON rows; entries may be integers or decimal strings.
pub fn parse_basis(text: &str) -> Result<IntMatrix, Error> {
    let invalid = |msg: String| Error::InvalidBasis(msg);
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| invalid(format!("not valid JSON: {e}")))?;
    let rows = value
        .as_array()
        .ok_or_else(|| invalid("expected an array of rows".into()))?;
    let mut parsed: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| invalid(format!("row {} is not an array", i + 1)))?;
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            let n = match cell {
                serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => {
                    BigInt::from_str(&n.to_string()).ok()
                }
                serde_json::Value::String(s) => BigInt::from_str(s.trim()).ok(),
                _ => None,
            };
            out.push(
                n.ok_or_else(|| invalid(format!("row {}: `{cell}` is not an integer", i + 1)))?,
            );
        }
        parsed.push(out);
    }
    let width = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != width) {
        return Err(invalid("rows have different lengths".into()));
    }
    Ok(IntMatrix::from_rows(parsed))
}

fn read(path: &Path, err: &mut dyn Write) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        writeln!(err, "error: cannot read {}: {e}", path.display()).ok();
        EXIT_IO
    })
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    writeln!(err, "error: {e}").ok();
    exit_code(e)
}

fn load(path: &Path, err: &mut dyn Write) -> Result<Substitution, i32> {
    let text = read(path, err)?;
    parse_substitution(&text).map_err(|e| {
        writeln!(err, "error: {}: {e}", path.display()).ok();
        EXIT_PARSE
    })
}

fn options(screen: &Screen) -> Options {
    Options {
        horizon: screen.horizon,
        max_prime: screen.max_prime,
        ..Options::default()
    }
}

/// The JSON document for one batch item: a report, or the input and its error.
pub fn batch_item(s: &Substitution, options: &Options) -> String {
    match compute_cohomology(s, options) {
        Ok(res) => Report::new(&res, false).to_json(),
        Err(e) => serde_json::to_string_pretty(&FailedReport::new(s, &e)).expect("serializes"),
    }
}

/// Joins item documents so that each one appears byte-for-byte as a single run prints it.
pub fn join_items(items: &[String]) -> String {
    if items.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{}\n]\n", items.join(",\n"))
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write, style: Style) -> i32 {
    match cli.command {
        Command::Analyze {
            file,
            json,
            dot,
            basis,
            timings,
            screen,
        } => {
            let s = match load(&file, err) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let mut opts = options(&screen);
            if let Some(path) = basis {
                let text = match read(&path, err) {
                    Ok(t) => t,
                    Err(code) => return code,
                };
                match parse_basis(&text) {
                    Ok(b) => opts.basis = Some(b),
                    Err(e) => return fail(err, &e),
                }
            }
            let res = match compute_cohomology(&s, &opts) {
                Ok(r) => r,
                Err(e) => return fail(err, &e),
            };
            if let Some(dir) = dot {
                let written = fs::create_dir_all(&dir)
                    .and_then(|_| fs::write(dir.join("K.dot"), complex_dot(&res)))
                    .and_then(|_| fs::write(dir.join("g.dot"), map_dot(&res)));
                if let Err(e) = written {
                    writeln!(
                        err,
                        "error: cannot write DOT files to {}: {e}",
                        dir.display()
                    )
                    .ok();
                    return EXIT_IO;
                }
            }
            let body = if json {
                Report::new(&res, timings).to_json() + "\n"
            } else {
                render(&res, style, timings)
            };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_IO;
            }
            EXIT_OK
        }
        Command::Check {
            file,
            power,
            collar,
            screen,
        } => {
            if power == 0 {
                writeln!(err, "error: --power must be at least 1").ok();
                return EXIT_PARSE;
            }
            let s = match load(&file, err) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let suite = SuiteOptions {
                power,
                collar: collar == Switch::On,
                pipeline: options(&screen),
            };
            match invariance_suite(&s, &suite) {
                Ok(report) => {
                    if out
                        .write_all(suite_table(&report.entries, style).as_bytes())
                        .is_err()
                    {
                        return EXIT_IO;
                    }
                    EXIT_OK
                }
                Err(e) => fail(err, &e),
            }
        }
        Command::Batch { file, screen } => {
            let text = match read(&file, err) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let subs = match parse_batch(&text) {
                Ok(s) => s,
                Err(e) => {
                    writeln!(err, "error: {}: {e}", file.display()).ok();
                    return EXIT_PARSE;
                }
            };
            let opts = options(&screen);
            // collect preserves input order regardless of completion order
            let items: Vec<String> = subs.par_iter().map(|s| batch_item(s, &opts)).collect();
            if out.write_all(join_items(&items).as_bytes()).is_err() {
                return EXIT_IO;
            }
            EXIT_OK
        }
    }
}
