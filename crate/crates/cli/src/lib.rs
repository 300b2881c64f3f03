//! Command-line front end for the `mucs` library: randomized verification
//! sweeps, figure grids, squeezing classification and the oscillator check.
//!
//! Exit codes: 0 success, 1 relation violation, 2 usage or schema error,
//! 3 I/O failure, 4 numeric precondition (truncation, positivity, ...).

pub mod error;
pub mod figure;
pub mod oscillator;
pub mod squeeze;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mucs::fixture::{parse_operator_set, to_json, OperatorSetDoc};
use mucs::squeezing::{oscillator_demo, StateSpec};
use mucs::{Mode, PairSet, DEFAULT_TOL};

pub use error::{CliError, Result};

use figure::{evaluate_grid, to_csv, FigureMetadata, FigureSpec};
use squeeze::{run_squeeze, FamilyName, StateSource};
use verify::{parse_pairs, run_sweep, PairList, Field, StateClass, SweepConfig, SweepRelation};

#[derive(Debug, Parser)]
#[command(name = "mucs", version, about = "Multi-operator uncertainty relations: sweeps, figure grids, squeezing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a seeded randomized sweep of one relation and print a JSON report.
    Verify(VerifyArgs),
    /// Emit a figure grid (CSV plus JSON metadata and operator fixture).
    Figure(FigureArgs),
    /// Classify q/M squeezing for an operator file and a state.
    Squeeze(SqueezeArgs),
    /// Check the three-observable oscillator relation in a truncated Fock space.
    Oscillator(OscillatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Hermitian,
    General,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Hermitian => Mode::Hermitian,
            ModeArg::General => Mode::General,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub relation: SweepRelation,
    /// Number of vectors or operators.
    #[arg(short = 'm', long = "m", default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Entry field of random vectors (vector relations only).
    #[arg(long, value_enum, default_value_t = Field::Complex)]
    pub field: Field,
    /// Random state ensemble (operator relations only).
    #[arg(long, value_enum, default_value_t = StateClass::Pure)]
    pub state: StateClass,
    /// Fixed pairs for unbalanced relations, e.g. `1-2,1-3`; default checks every pair subset.
    #[arg(long, value_parser = parse_pairs)]
    pub pairs: Option<PairList>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number, 1 to 5.
    pub id: u8,
    /// Grid size `NxM` or `N`.
    #[arg(long, value_parser = parse_grid, default_value = "48x48")]
    pub grid: (usize, usize),
    /// Operator seed; defaults to the figure's canonical seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Replay with operators from a JSON operator set instead of the seed.
    #[arg(long)]
    pub ops: Option<PathBuf>,
    /// Output directory; without it the CSV goes to stdout.
    #[arg(long, env = "MUCS_OUT_DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SqueezeArgs {
    /// JSON operator set.
    #[arg(long)]
    pub ops: PathBuf,
    /// JSON state file.
    #[arg(long, conflicts_with = "family")]
    pub state: Option<PathBuf>,
    /// Built-in state family, used with `--params`.
    #[arg(long, value_enum, requires = "params")]
    pub family: Option<FamilyName>,
    /// Family parameters `P1,P2`.
    #[arg(long, value_parser = parse_params, requires = "family")]
    pub params: Option<(f64, f64)>,
    #[arg(long, value_enum, default_value_t = ModeArg::Hermitian)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OscillatorArgs {
    #[arg(long, default_value_t = 40)]
    pub fock_dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// `vacuum`, `coherent:RE[,IM]` or `number:N`.
    #[arg(long, value_parser = oscillator::parse_state_spec, default_value = "vacuum")]
    pub state: StateSpec,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

/// Parses `48x32` or `48` (square).
pub fn parse_grid(text: &str) -> std::result::Result<(usize, usize), String> {
    let parse = |s: &str| -> std::result::Result<usize, String> {
        match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("grid side `{s}` must be a positive integer")),
        }
    };
    match text.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(text)?;
            Ok((n, n))
        }
    }
}

fn parse_params(text: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("`{text}` is not `P1,P2`"))?;
    let p = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("bad parameter `{s}`"));
    Ok((p(a)?, p(b)?))
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn print(text: &str) -> Result<()> {
    std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = to_json(value);
    match out {
        Some(path) => write_file(path, &text),
        None => print(&text),
    }
}

/// Runs one command. `Ok(false)` means a relation failed (exit code 1).
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Verify(a) => {
            let pairs = match &a.pairs {
                Some(p) => Some(PairSet::new(a.m, &p.0).map_err(|e| CliError::Usage(format!("--pairs: {e}")))?),
                None => None,
            };
            let cfg = SweepConfig {
                relation: a.relation,
                m: a.m,
                dim: a.dim,
                trials: a.trials,
                seed: a.seed,
                tol: a.tol,
                field: a.field,
                state: a.state,
                pairs,
            };
            let report = run_sweep(&cfg)?;
            emit(&report, a.out.as_deref())?;
            Ok(report.violations == 0)
        }
        Command::Figure(a) => {
            if !(a.tol > 0.0 && a.tol.is_finite()) {
                return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
            }
            let spec = FigureSpec::get(a.id)?;
            let seed = a.seed.unwrap_or(spec.default_seed);
            let ops = match &a.ops {
                Some(path) => parse_operator_set(&read_file(path)?)?,
                None => spec.operators(seed),
            };
            let rows = evaluate_grid(&spec, &ops, a.grid, a.tol)?;
            let mut meta = FigureMetadata::new(&spec, a.grid, seed, a.tol, &rows);
            meta.operators_from = a.ops.as_ref().map(|p| p.display().to_string());
            let csv = to_csv(&spec, &rows);
            match &a.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                    write_file(&dir.join(format!("figure{}.csv", spec.id)), &csv)?;
                    write_file(&dir.join(format!("figure{}.json", spec.id)), &to_json(&meta))?;
                    let doc = OperatorSetDoc::from_matrices(&ops, None)?;
                    write_file(&dir.join(&meta.operators_file), &to_json(&doc))?;
                }
                None => print(&csv)?,
            }
            Ok(meta.all_ok())
        }
        Command::Squeeze(a) => {
            let source = match (&a.state, a.family, a.params) {
                (Some(path), None, _) => StateSource::File(path),
                (None, Some(family), Some((p1, p2))) => StateSource::Family { family, p1, p2 },
                _ => return Err(CliError::Usage("give either --state FILE or --family with --params".into())),
            };
            let c = run_squeeze(&a.ops, &source, a.mode.into(), a.tol)?;
            emit(&c, None)?;
            Ok(c.relations_ok)
        }
        Command::Oscillator(a) => {
            if !(a.tol > 0.0 && a.tol.is_finite()) {
                return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
            }
            let r = oscillator_demo(a.fock_dim, a.hbar, a.state, a.tol)?;
            emit(&r, None)?;
            Ok(r.report.satisfied)
        }
    }
}
