//! Command-line front end: spectra, wavefunction tables, parameter sweeps,
//! self-checks and the derived constants, written as CSV or JSON.

pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::Error;
use crate::model::derived_constants;
use crate::susy::{gpt_coefficients, gpt_solve, rm2_solve, GptInput, Level, LevelSpectrum, Rm2Coeffs, Rm2Input};
use crate::wavefunctions::{gpt_wavefunction, rm2_wavefunction};

pub use config::{CommandKind, Format, ModelSource, Options, RunConfig, Suite, SweepRange};
pub use output::{Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ptdirac", version, about = "Exactly solvable position-dependent-mass Dirac spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level table: n, Ē_n, energy (re/im), reality and admissibility.
    Spectrum(Options),
    /// Normalized closed-form state of `--level` on the grid.
    Wavefunction(Options),
    /// One level across a parameter range.
    Sweep(Options),
    /// Identity and finite-difference self-checks; exit 2 on any failure.
    Verify(Options),
    /// Constants fixed by the matching conditions.
    Constraints(Options),
}

impl Command {
    pub fn into_parts(self) -> (CommandKind, Options) {
        match self {
            Command::Spectrum(o) => (CommandKind::Spectrum, o),
            Command::Wavefunction(o) => (CommandKind::Wavefunction, o),
            Command::Sweep(o) => (CommandKind::Sweep, o),
            Command::Verify(o) => (CommandKind::Verify, o),
            Command::Constraints(o) => (CommandKind::Constraints, o),
        }
    }
}

/// A failed run and the exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::NoRealC2 { .. }
            | Error::Inadmissible { .. }
            | Error::Domain { .. }
            | Error::ShiftUndefined(_) => CliError::Config(e.to_string()),
            Error::Overflow { .. }
            | Error::NonConvergence { .. }
            | Error::NonFinitePotential { .. }
            | Error::Pole { .. }
            | Error::Singular { .. }
            | Error::NonPositiveMass { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

/// Short status string for a sweep point that failed outright.
fn error_status(e: &Error) -> &'static str {
    match e {
        Error::NoRealC2 { .. } => "no-real-c2",
        Error::InvalidParameter(_) => "invalid",
        Error::Inadmissible { .. } => "inadmissible",
        Error::Domain { .. } => "domain",
        Error::ShiftUndefined(_) => "shift-undefined",
        Error::Overflow { .. } | Error::NonFinitePotential { .. } => "overflow",
        Error::Pole { .. } | Error::Singular { .. } => "pole",
        Error::NonPositiveMass { .. } => "non-positive-mass",
        Error::NonConvergence { .. } => "non-convergence",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub warnings: Vec<String>,
    pub verification_failed: bool,
}

struct Solved {
    spectrum: LevelSpectrum,
    warnings: Vec<String>,
}

fn solve(model: &ModelSource, n_max: usize, cfg: &RunConfig) -> Result<Solved, Error> {
    match *model {
        ModelSource::Example1 { params } => {
            let s = rm2_solve(Rm2Input::Params(params), n_max, cfg.energy_form)?;
            Ok(Solved { spectrum: s.spectrum, warnings: s.warnings })
        }
        ModelSource::DirectRm2 { v0, v1, v2 } => {
            let s = rm2_solve(Rm2Input::Direct { v0, v1, v2 }, n_max, cfg.energy_form)?;
            Ok(Solved { spectrum: s.spectrum, warnings: s.warnings })
        }
        ModelSource::Example2 { params } => {
            let s = gpt_solve(GptInput::Params(params), n_max)?;
            Ok(Solved { spectrum: s.spectrum, warnings: s.warnings })
        }
        ModelSource::DirectGpt { a, b, c, delta, gamma, m2 } => {
            let s = gpt_solve(GptInput::Direct { a, b, c, delta, gamma, m2 }, n_max)?;
            Ok(Solved { spectrum: s.spectrum, warnings: s.warnings })
        }
    }
}

const LEVEL_COLUMNS: [&str; 8] = ["n", "e_bar", "energy_re", "energy_im", "radicand", "is_real", "admissible", "status"];

fn level_cells(l: &Level) -> Vec<Cell> {
    let status = l.status.name();
    vec![
        Cell::Int(l.n as u64),
        Cell::num(l.e_bar, status),
        Cell::num(l.energy.re, status),
        Cell::num(l.energy.im, status),
        Cell::num(l.radicand, status),
        Cell::Bool(l.is_real),
        Cell::Bool(l.admissible),
        Cell::text(status),
    ]
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let solved = solve(&cfg.model, cfg.n_max, cfg)?;
    let mut table = Table::new(LEVEL_COLUMNS.to_vec());
    for l in &solved.spectrum.levels {
        table.push(level_cells(l));
    }
    Ok(Outcome { table, warnings: solved.warnings, verification_failed: false })
}

fn wavefunction(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spinor = if cfg.spinor { cfg.model.params() } else { None };
    let state = match cfg.model {
        ModelSource::Example1 { params } => {
            let k = Rm2Coeffs::from_params(&params)?;
            rm2_wavefunction(cfg.level, k.v1, k.v2, &cfg.grid, spinor)?
        }
        ModelSource::DirectRm2 { v1, v2, .. } => rm2_wavefunction(cfg.level, v1, v2, &cfg.grid, None)?,
        ModelSource::Example2 { params } => {
            let (a, b) = gpt_coefficients(&params);
            gpt_wavefunction(cfg.level, a, b, params.c, &cfg.grid, spinor)?
        }
        ModelSource::DirectGpt { a, b, c, .. } => gpt_wavefunction(cfg.level, a, b, c, &cfg.grid, None)?,
    };
    let mut columns = vec!["x", "phi"];
    if state.spinor.is_some() {
        columns.push("spinor");
    }
    let mut table = Table::new(columns);
    for (i, x) in cfg.grid.points().into_iter().enumerate() {
        let mut row = vec![Cell::float(x), Cell::float(state.samples[i])];
        if let Some(s) = &state.spinor {
            row.push(Cell::float(s[i]));
        }
        table.push(row);
    }
    Ok(Outcome { table, warnings: Vec::new(), verification_failed: false })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let range = cfg.sweep.as_ref().expect("sweep range resolved with the command");
    let values = range.values();
    // Indexed parallel map keeps sweep order.
    let points: Vec<(f64, Result<Solved, Error>)> = values
        .par_iter()
        .map(|&v| {
            let r = cfg
                .model
                .with_value(&range.param, v)
                .map_err(Error::InvalidParameter)
                .and_then(|m| solve(&m, cfg.level, cfg));
            (v, r)
        })
        .collect();

    let mut columns = vec!["param", "value"];
    columns.extend(LEVEL_COLUMNS);
    let mut table = Table::new(columns);
    let mut warnings: Vec<String> = Vec::new();
    let (mut failed, mut suppressed) = (0usize, 0usize);
    for (v, r) in points {
        let mut row = vec![Cell::text(range.param.clone()), Cell::float(v)];
        match r {
            Ok(solved) => {
                let level = solved.spectrum.level(cfg.level).expect("n_max covers the level");
                row.extend(level_cells(level));
                for w in solved.warnings {
                    if warnings.len() < 3 {
                        warnings.push(format!("{}={v}: {w}", range.param));
                    } else {
                        suppressed += 1;
                    }
                }
            }
            Err(e) => {
                failed += 1;
                let status = error_status(&e);
                row.push(Cell::Int(cfg.level as u64));
                row.extend(std::iter::repeat_with(|| Cell::text(status)).take(4));
                row.extend([Cell::Bool(false), Cell::Bool(false), Cell::text(status)]);
            }
        }
        table.push(row);
    }
    if suppressed > 0 {
        warnings.push(format!("{suppressed} further warning(s) suppressed"));
    }
    if failed > 0 {
        warnings.push(format!("{failed} sweep point(s) could not be solved; see the status column"));
    }
    Ok(Outcome { table, warnings, verification_failed: false })
}

fn verify_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.model.params().copied().unwrap_or_default();
    let ctx = verify::Context { params, grid_points: cfg.grid.n_points };
    let results = verify::run_checks(cfg.suite, &ctx, cfg.tolerance_factor);
    let mut table = Table::new(vec!["check", "residual", "tolerance", "passed"]);
    let mut warnings = Vec::new();
    for r in &results {
        let residual = match &r.residual {
            Ok(v) => Cell::float(*v),
            Err(msg) => {
                warnings.push(format!("{}: {msg}", r.name));
                Cell::text("error")
            }
        };
        table.push(vec![Cell::text(r.name), residual, Cell::float(r.tolerance), Cell::Bool(r.passed())]);
    }
    let verification_failed = results.iter().any(|r| !r.passed());
    Ok(Outcome { table, warnings, verification_failed })
}

fn constraints(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let Some(params) = cfg.model.params() else {
        return Err(CliError::Config("constraints need model constants (not direct coefficients)".into()));
    };
    let sol = derived_constants(params)?;
    let absent = |v: Option<f64>| v.map_or(Cell::text("absent"), Cell::float);
    let mut rows: Vec<(&'static str, Cell)> = vec![
        ("sigma", Cell::float(sol.sigma)),
        ("beta", Cell::float(sol.beta)),
        ("epsilon", Cell::float(sol.epsilon)),
        ("e_squared", Cell::float(sol.e_squared)),
        ("energy", absent(sol.energy())),
        ("m1_plus", absent(sol.m1_plus)),
        ("m1_minus", absent(sol.m1_minus)),
        ("m1_radicand", Cell::float(sol.m1_radicand)),
        ("m1_closure", Cell::float(sol.m1_closure)),
        ("mass_coupling", Cell::float(params.mass_coupling())),
    ];
    match cfg.model {
        ModelSource::Example1 { .. } => {
            let k = Rm2Coeffs::from_params(params)?;
            rows.extend([("v0", Cell::float(k.v0)), ("v1", Cell::float(k.v1)), ("v2", Cell::float(k.v2))]);
        }
        _ => {
            let (a, b) = gpt_coefficients(params);
            rows.extend([("a_coef", Cell::float(a)), ("b_coef", Cell::float(b))]);
        }
    }
    let mut table = Table::new(vec!["quantity", "value"]);
    for (k, v) in rows {
        table.push(vec![Cell::text(k), v]);
    }
    Ok(Outcome { table, warnings: Vec::new(), verification_failed: false })
}

/// Executes a resolved configuration without touching any output stream.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        CommandKind::Spectrum => spectrum(cfg),
        CommandKind::Wavefunction => wavefunction(cfg),
        CommandKind::Sweep => sweep(cfg),
        CommandKind::Verify => verify_cmd(cfg),
        CommandKind::Constraints => constraints(cfg),
    }
}

/// Renders the outcome in the configured format.
pub fn render(cfg: &RunConfig, outcome: &Outcome) -> String {
    match cfg.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => outcome.table.to_json(cfg),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("cannot write to standard output: {e}")))
        }
    }
}

/// Parses `args` (program name first), runs and writes the result; returns
/// the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (kind, opts) = cli.command.into_parts();
    let cfg = match RunConfig::resolve(kind, opts) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: invalid configuration: {msg}");
            return EXIT_CONFIG;
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&cfg, &render(&cfg, &outcome)) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if outcome.verification_failed {
        EXIT_VERIFY
    } else {
        EXIT_OK
    }
}
