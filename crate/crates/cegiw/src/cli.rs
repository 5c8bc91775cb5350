//! Command-line front end.
//!
//! Exit status: 0 weakened (or other success), 1 no weakening exists,
//! 2 iteration limit reached, 3 usage, input or checker error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use cegiw_core::{extract, parse_formula, parse_property, Formula, ModificationKind, Property};
use clap::{Parser, Subcommand, ValueEnum};

use crate::check::{Checker, InternalChecker};
use crate::driver::{
    csv_log, jsonl_log, run_cegiw_with, CegiwResult, DEFAULT_MAX_COUNTEREXAMPLES,
    DEFAULT_MAX_ITERATIONS,
};
use crate::external::ExternalChecker;
use crate::fretish::{timing_to_mtl, FretishTiming};
use crate::model::{parse_model, Model};
use crate::smv::external_input;

pub const EXIT_WEAKENED: i32 = 0;
pub const EXIT_NO_WEAKENING: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

pub const CHECKER_ENV: &str = "CEGIW_EXTERNAL_CHECKER";

#[derive(Debug, Parser)]
#[command(
    name = "cegiw",
    version,
    about = "Weaken one MTL interval until the property holds on a model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Internal,
    External,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weaken the `?`-marked interval of a property against a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        /// Property text, or `@path` to read it from a file.
        #[arg(long)]
        prop: String,
        /// Maximum lasso length explored by the checker.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_iterations: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_COUNTEREXAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_counterexamples: u64,
        #[arg(long, value_enum, default_value_t = Backend::Internal)]
        backend: Backend,
        /// External checker executable; defaults to $CEGIW_EXTERNAL_CHECKER.
        #[arg(long)]
        external_cmd: Option<PathBuf>,
        /// Write one JSON record per iteration.
        #[arg(long)]
        log_json: Option<PathBuf>,
        /// Write `iteration,lo,hi` rows.
        #[arg(long)]
        log_csv: Option<PathBuf>,
        /// Print only the result line.
        #[arg(long)]
        quiet: bool,
    },
    /// Print the SMV input (model and LTLSPEC) for a formula.
    Emit {
        #[arg(long)]
        model: PathBuf,
        /// Formula text, or `@path`; a `?` mark is ignored.
        #[arg(long)]
        prop: String,
    },
    /// Translate a structured-requirement timing clause into MTL.
    Timing {
        /// `within N`, `for N`, `eventually` or `always`.
        timing: String,
        /// The response formula.
        response: String,
    },
}

/// A property as read from the command line or a file.
///
/// Files may contain `--` comment lines; the first line may start with a
/// name followed by `:`.
#[derive(Debug, Clone)]
pub struct PropertyFile {
    pub name: Option<String>,
    pub formula_text: String,
    pub parsed: Property,
}

pub fn parse_property_file(text: &str) -> Result<PropertyFile, String> {
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with("--") && !l.trim().is_empty())
        .collect();
    let mut body = lines.join("\n");
    let mut name = None;
    if let Some((head, rest)) = body.split_once(':') {
        let head = head.trim();
        if !head.is_empty() && head.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            name = Some(head.to_string());
            body = rest.trim().to_string();
        }
    }
    let body = body.trim().to_string();
    let parsed = parse_property(&body).map_err(|e| format!("property: {e}"))?;
    Ok(PropertyFile {
        name,
        formula_text: body,
        parsed,
    })
}

fn read_arg_text(arg: &str) -> Result<String, String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
        None => Ok(arg.to_string()),
    }
}

fn load_model(path: &Path) -> Result<Model, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_model(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn check_atoms(m: &Model, phi: &Formula) -> Result<(), String> {
    for atom in phi.atoms() {
        if !m.atoms().contains(&atom) {
            return Err(format!(
                "property atom `{atom}` is not a boolean variable or DEFINE of the model (atoms: {})",
                m.atoms().join(", ")
            ));
        }
    }
    Ok(())
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match command {
        Command::Timing { timing, response } => {
            let timing: FretishTiming = timing.parse().map_err(|e| format!("{e}"))?;
            let response = parse_formula(&response).map_err(|e| format!("response: {e}"))?;
            writeln!(out, "{}", timing_to_mtl(timing, response)).map_err(io)?;
            Ok(0)
        }
        Command::Emit { model, prop } => {
            let m = load_model(&model)?;
            let text = read_arg_text(&prop)?;
            let phi = match parse_property_file(&text) {
                Ok(p) => p.parsed.formula,
                Err(_) => parse_formula(text.trim()).map_err(|e| format!("property: {e}"))?,
            };
            check_atoms(&m, &phi)?;
            let input = external_input(&m, &phi).map_err(|e| e.to_string())?;
            write!(out, "{input}").map_err(io)?;
            Ok(0)
        }
        Command::Check {
            model,
            prop,
            bound,
            max_iterations,
            max_counterexamples,
            backend,
            external_cmd,
            log_json,
            log_csv,
            quiet,
        } => {
            let m = load_model(&model)?;
            let file = parse_property_file(&read_arg_text(&prop)?)?;
            let property = &file.parsed;
            check_atoms(&m, &property.formula)?;
            let (c, target) =
                extract(&property.formula, &property.selection).map_err(|e| e.to_string())?;
            let bound = bound as usize;
            let result = match backend {
                Backend::Internal => {
                    let mut checker = InternalChecker {
                        model: &m,
                        bound,
                        max_counterexamples: max_counterexamples as usize,
                    };
                    run_with(&mut checker, &c, &target, max_iterations as usize)?
                }
                Backend::External => {
                    let cmd = external_cmd
                        .or_else(|| std::env::var_os(CHECKER_ENV).map(PathBuf::from))
                        .ok_or_else(|| {
                            format!("--backend external needs --external-cmd or ${CHECKER_ENV}")
                        })?;
                    let mut checker = ExternalChecker::new(&m, cmd, bound);
                    run_with(&mut checker, &c, &target, max_iterations as usize)?
                }
            };
            if let Some(path) = log_json {
                std::fs::write(&path, jsonl_log(result.log()))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if let Some(path) = log_csv {
                std::fs::write(&path, csv_log(result.log()))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            report(out, &file, &target, &result, bound, quiet).map_err(io)
        }
    }
}

fn run_with<C: Checker>(
    checker: &mut C,
    c: &cegiw_core::Context,
    target: &cegiw_core::Target,
    max_iterations: usize,
) -> Result<CegiwResult, String> {
    run_cegiw_with(checker, c, target, max_iterations).map_err(|e| e.to_string())
}

fn report(
    out: &mut dyn Write,
    file: &PropertyFile,
    target: &cegiw_core::Target,
    result: &CegiwResult,
    bound: usize,
    quiet: bool,
) -> std::io::Result<i32> {
    let original = target.interval;
    let iterations = result.log().len();
    match result {
        CegiwResult::Weakened { interval, .. } => {
            writeln!(out, "{}", file.parsed.splice(interval))?;
            if !quiet {
                let direction = match ModificationKind::of(target.kind) {
                    ModificationKind::Extension => "extension",
                    ModificationKind::Contraction => "contraction",
                };
                let marked_kind = match file.parsed.formula.at_path(&file.parsed.selection.path) {
                    Some(Formula::Until(..)) => Some(cegiw_core::TemporalKind::Until),
                    Some(Formula::Release(..)) => Some(cegiw_core::TemporalKind::Release),
                    _ => None,
                };
                let note = if marked_kind != Some(target.kind) {
                    ", marked operator is under negation"
                } else {
                    ""
                };
                writeln!(out, "interval {original} -> {interval} ({direction}{note})")?;
                writeln!(
                    out,
                    "holds up to bound {bound} after {iterations} iteration(s)"
                )?;
            }
            Ok(EXIT_WEAKENED)
        }
        CegiwResult::NoWeakening { witness, .. } => {
            writeln!(out, "no weakening of {original} exists")?;
            writeln!(out, "witness: {witness}")?;
            if !quiet {
                writeln!(out, "after {iterations} iteration(s) at bound {bound}")?;
            }
            Ok(EXIT_NO_WEAKENING)
        }
        CegiwResult::BoundOrIterationExhausted { log } => {
            let last = log
                .last()
                .map(|r| r.interval_after.unwrap_or(r.interval_before))
                .unwrap_or(original);
            writeln!(
                out,
                "iteration limit reached after {iterations} iteration(s); last interval {last}"
            )?;
            Ok(EXIT_EXHAUSTED)
        }
    }
}
