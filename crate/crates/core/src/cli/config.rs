//! Command-line options, the flat `key = value` config file and their
//! resolution into a validated [`RunConfig`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::model::{BetaMode, ModelParams};
use crate::numerics::{Grid, DEFAULT_GRID_POINTS};
use crate::susy::Rm2EnergyForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Wavefunction,
    Sweep,
    Verify,
    Constraints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[default]
    All,
    Model,
    Hermitization,
    Dirac,
    Susy,
    Wavefunctions,
    Numerics,
}

/// Options shared by every subcommand. All are optional so that values from
/// `--config` can fill the gaps.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Options {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Model family: 1 (cosh profile, Rosen-Morse II) or 2 (coth profile,
    /// Pöschl-Teller).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub example: Option<u8>,

    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m2: Option<f64>,
    /// literal, matched or mass-cancelling.
    #[arg(long)]
    pub beta_mode: Option<BetaMode>,

    /// Rosen-Morse coefficients given directly (all three together).
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v2: Option<f64>,
    /// Pöschl-Teller `A` given directly (with --b-coef).
    #[arg(long, allow_negative_numbers = true)]
    pub a_coef: Option<f64>,
    /// Pöschl-Teller `B` given directly (with --a-coef).
    #[arg(long, allow_negative_numbers = true)]
    pub b_coef: Option<f64>,

    /// Highest level in spectrum tables.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Level used by `wavefunction` and `sweep`.
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,

    /// Swept parameter (model constant or direct coefficient name).
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    /// Number of sweep points, both ends included.
    #[arg(long)]
    pub steps: Option<usize>,

    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Multiplies every verification tolerance.
    #[arg(long)]
    pub tolerance_factor: Option<f64>,
    /// Rosen-Morse energy radicand: as-printed or consistent.
    #[arg(long)]
    pub energy_form: Option<Rm2EnergyForm>,
    /// Also emit the upper Dirac component.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub spinor: Option<bool>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (standard output when absent).
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("config key `{key}`: cannot parse `{value}`: {e}"))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, String> {
    T::from_str(value, false).map_err(|e| format!("config key `{key}`: {e}"))
}

macro_rules! fill {
    ($slot:expr, $value:expr) => {
        if $slot.is_none() {
            $slot = Some($value);
        }
    };
}

impl Options {
    /// Fills every option not given on the command line from `entries`.
    pub fn fill_from(&mut self, entries: &BTreeMap<String, String>) -> Result<(), String> {
        for (key, v) in entries {
            let k = key.as_str();
            match k {
                "example" => fill!(self.example, parse::<u8>(k, v).and_then(|e| {
                    if e == 1 || e == 2 { Ok(e) } else { Err(format!("config key `example`: expected 1 or 2, got {e}")) }
                })?),
                "omega" => fill!(self.omega, parse(k, v)?),
                "alpha" => fill!(self.alpha, parse(k, v)?),
                "gamma" => fill!(self.gamma, parse(k, v)?),
                "beta" => fill!(self.beta, parse(k, v)?),
                "delta" => fill!(self.delta, parse(k, v)?),
                "c" => fill!(self.c, parse(k, v)?),
                "m1" => fill!(self.m1, parse(k, v)?),
                "m2" => fill!(self.m2, parse(k, v)?),
                "beta-mode" => fill!(self.beta_mode, parse(k, v)?),
                "v0" => fill!(self.v0, parse(k, v)?),
                "v1" => fill!(self.v1, parse(k, v)?),
                "v2" => fill!(self.v2, parse(k, v)?),
                "a-coef" => fill!(self.a_coef, parse(k, v)?),
                "b-coef" => fill!(self.b_coef, parse(k, v)?),
                "n-max" => fill!(self.n_max, parse(k, v)?),
                "level" => fill!(self.level, parse(k, v)?),
                "grid-points" => fill!(self.grid_points, parse(k, v)?),
                "x-min" => fill!(self.x_min, parse(k, v)?),
                "x-max" => fill!(self.x_max, parse(k, v)?),
                "param" => fill!(self.param, v.clone()),
                "from" => fill!(self.from, parse(k, v)?),
                "to" => fill!(self.to, parse(k, v)?),
                "steps" => fill!(self.steps, parse(k, v)?),
                "suite" => fill!(self.suite, parse_enum(k, v)?),
                "tolerance-factor" => fill!(self.tolerance_factor, parse(k, v)?),
                "energy-form" => fill!(self.energy_form, parse(k, v)?),
                "spinor" => fill!(self.spinor, parse(k, v)?),
                "format" => fill!(self.format, parse_enum(k, v)?),
                "output" => fill!(self.output, PathBuf::from(v)),
                other => return Err(format!("unknown config key `{other}`")),
            }
        }
        Ok(())
    }
}

/// Reads `key = value` lines; `#` starts a comment, blank lines are
/// skipped and `_` in keys is read as `-`.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut entries = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected `key = value`", number + 1));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", number + 1));
        }
        if entries.insert(key.clone(), value).is_some() {
            return Err(format!("config line {}: duplicate key `{key}`", number + 1));
        }
    }
    Ok(entries)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    parse_config_text(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSource {
    /// Cosh profile; Rosen-Morse coefficients from the model constants.
    Example1 { params: ModelParams },
    /// Coth profile; Pöschl-Teller coefficients from the model constants.
    Example2 { params: ModelParams },
    DirectRm2 { v0: f64, v1: f64, v2: f64 },
    DirectGpt {
        a: f64,
        b: f64,
        c: f64,
        delta: f64,
        gamma: f64,
        m2: f64,
    },
}

impl ModelSource {
    pub fn is_whole_line(&self) -> bool {
        matches!(self, ModelSource::Example1 { .. } | ModelSource::DirectRm2 { .. })
    }

    pub fn params(&self) -> Option<&ModelParams> {
        match self {
            ModelSource::Example1 { params } | ModelSource::Example2 { params } => Some(params),
            _ => None,
        }
    }

    /// Copy with the named quantity replaced by `value`.
    pub fn with_value(&self, param: &str, value: f64) -> Result<ModelSource, String> {
        let mut next = *self;
        let slot: Option<&mut f64> = match &mut next {
            ModelSource::Example1 { params } | ModelSource::Example2 { params } => match param {
                "omega" => Some(&mut params.omega),
                "alpha" => Some(&mut params.alpha),
                "gamma" => Some(&mut params.gamma),
                "beta" => Some(&mut params.beta),
                "delta" => Some(&mut params.delta),
                "c" => Some(&mut params.c),
                "m1" => Some(&mut params.m1),
                "m2" => Some(&mut params.m2),
                _ => None,
            },
            ModelSource::DirectRm2 { v0, v1, v2 } => match param {
                "v0" => Some(v0),
                "v1" => Some(v1),
                "v2" => Some(v2),
                _ => None,
            },
            ModelSource::DirectGpt {
                a,
                b,
                c,
                delta,
                gamma,
                m2,
            } => match param {
                "a-coef" => Some(a),
                "b-coef" => Some(b),
                "c" => Some(c),
                "delta" => Some(delta),
                "gamma" => Some(gamma),
                "m2" => Some(m2),
                _ => None,
            },
        };
        match slot {
            Some(s) => {
                *s = value;
                Ok(next)
            }
            None => Err(format!("parameter `{param}` cannot be swept in this model mode")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRange {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let span = self.to - self.from;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.to
                } else {
                    self.from + span * i as f64 / last
                }
            })
            .collect()
    }
}

/// Fully resolved run description; serialized as `meta` in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model: ModelSource,
    pub n_max: usize,
    pub level: usize,
    pub grid: Grid,
    pub sweep: Option<SweepRange>,
    pub energy_form: Rm2EnergyForm,
    pub spinor: bool,
    pub suite: Suite,
    pub tolerance_factor: f64,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

pub const DEFAULT_N_MAX: usize = 5;

/// Model constants of the second family when nothing else is given.
pub fn example_two_defaults() -> ModelParams {
    ModelParams {
        omega: 5.0,
        alpha: 1.0,
        gamma: 10.0,
        beta: 0.0,
        delta: 0.5,
        c: 3.0,
        m1: 0.0,
        m2: 2.0,
        beta_mode: BetaMode::MassCancelling,
    }
}

fn finite(name: &str, v: Option<f64>) -> Result<Option<f64>, String> {
    match v {
        Some(x) if !x.is_finite() => Err(format!("--{name} must be finite")),
        other => Ok(other),
    }
}

impl RunConfig {
    pub fn resolve(command: CommandKind, mut opts: Options) -> Result<Self, String> {
        if let Some(path) = opts.config.clone() {
            let entries = read_config_file(&path)?;
            opts.fill_from(&entries)?;
        }
        for (name, v) in [
            ("omega", opts.omega), ("alpha", opts.alpha), ("gamma", opts.gamma),
            ("beta", opts.beta), ("delta", opts.delta), ("c", opts.c),
            ("m1", opts.m1), ("m2", opts.m2), ("v0", opts.v0), ("v1", opts.v1),
            ("v2", opts.v2), ("a-coef", opts.a_coef), ("b-coef", opts.b_coef),
            ("x-min", opts.x_min), ("x-max", opts.x_max), ("from", opts.from),
            ("to", opts.to), ("tolerance-factor", opts.tolerance_factor),
        ] {
            finite(name, v)?;
        }

        let model = resolve_model(&opts)?;
        if let Some(p) = model.params() {
            p.validate().map_err(|e| e.to_string())?;
        }

        let n_points = opts.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
        let default_grid = match model {
            ModelSource::Example1 { .. } | ModelSource::DirectRm2 { .. } => Grid::whole_line_default(),
            ModelSource::Example2 { params } => Grid::half_line_default(params.c),
            ModelSource::DirectGpt { c, .. } => {
                if !(c > 0.0) {
                    return Err(format!("c must be > 0 (got {c})"));
                }
                Grid::half_line_default(c)
            }
        };
        let grid = Grid::new(
            opts.x_min.unwrap_or(default_grid.x_min),
            opts.x_max.unwrap_or(default_grid.x_max),
            n_points,
        )
        .map_err(|e| e.to_string())?;
        if !model.is_whole_line() && grid.x_min < 0.0 {
            return Err(format!("the half-line family needs x-min >= 0 (got {})", grid.x_min));
        }

        let sweep_given = opts.param.is_some() || opts.from.is_some() || opts.to.is_some() || opts.steps.is_some();
        let sweep = if command == CommandKind::Sweep {
            let (Some(param), Some(from), Some(to), Some(steps)) = (opts.param.clone(), opts.from, opts.to, opts.steps)
            else {
                return Err("sweep needs --param, --from, --to and --steps".into());
            };
            if steps == 0 {
                return Err("--steps must be at least 1".into());
            }
            model.with_value(&param, from)?;
            Some(SweepRange { param, from, to, steps })
        } else {
            if sweep_given {
                return Err("--param/--from/--to/--steps only apply to `sweep`".into());
            }
            None
        };

        let spinor = opts.spinor.unwrap_or(false);
        if spinor && model.params().is_none() {
            return Err("--spinor needs model constants (not direct coefficients)".into());
        }
        let tolerance_factor = opts.tolerance_factor.unwrap_or(1.0);
        if !(tolerance_factor > 0.0) {
            return Err(format!("--tolerance-factor must be > 0 (got {tolerance_factor})"));
        }
        let level = opts.level.unwrap_or(0);
        let n_max = opts.n_max.unwrap_or(DEFAULT_N_MAX.max(level));

        Ok(RunConfig {
            command,
            model,
            n_max,
            level,
            grid,
            sweep,
            energy_form: opts.energy_form.unwrap_or_default(),
            spinor,
            suite: opts.suite.unwrap_or_default(),
            tolerance_factor,
            format: opts.format.unwrap_or_default(),
            output: opts.output.clone(),
        })
    }
}

fn resolve_model(opts: &Options) -> Result<ModelSource, String> {
    let rm2_direct = [opts.v0, opts.v1, opts.v2];
    let gpt_direct = [opts.a_coef, opts.b_coef];
    let any_rm2 = rm2_direct.iter().any(Option::is_some);
    let any_gpt = gpt_direct.iter().any(Option::is_some);
    let model_only = [
        ("omega", opts.omega.is_some()),
        ("alpha", opts.alpha.is_some()),
        ("beta", opts.beta.is_some()),
        ("m1", opts.m1.is_some()),
        ("beta-mode", opts.beta_mode.is_some()),
    ];

    if any_rm2 && any_gpt {
        return Err("Rosen-Morse and Pöschl-Teller coefficients cannot be mixed".into());
    }
    if any_rm2 || any_gpt {
        let conflicts: Vec<&str> = model_only.iter().filter(|(_, set)| *set).map(|(n, _)| *n).collect();
        if !conflicts.is_empty() {
            return Err(format!(
                "direct coefficients exclude model constants (got --{})",
                conflicts.join(", --")
            ));
        }
    }
    if any_rm2 {
        if opts.example == Some(2) {
            return Err("--v0/--v1/--v2 belong to example 1".into());
        }
        for (name, v) in [("gamma", opts.gamma), ("delta", opts.delta), ("c", opts.c), ("m2", opts.m2)] {
            if v.is_some() {
                return Err(format!("direct Rosen-Morse coefficients exclude --{name}"));
            }
        }
        let [Some(v0), Some(v1), Some(v2)] = rm2_direct else {
            return Err("direct Rosen-Morse mode needs all of --v0, --v1, --v2".into());
        };
        return Ok(ModelSource::DirectRm2 { v0, v1, v2 });
    }
    if any_gpt {
        if opts.example == Some(1) {
            return Err("--a-coef/--b-coef belong to example 2".into());
        }
        let [Some(a), Some(b)] = gpt_direct else {
            return Err("direct Pöschl-Teller mode needs both --a-coef and --b-coef".into());
        };
        let d = example_two_defaults();
        return Ok(ModelSource::DirectGpt {
            a,
            b,
            c: opts.c.unwrap_or(d.c),
            delta: opts.delta.unwrap_or(d.delta),
            gamma: opts.gamma.unwrap_or(d.gamma),
            m2: opts.m2.unwrap_or(d.m2),
        });
    }

    let example = opts.example.unwrap_or(1);
    let base = if example == 1 {
        ModelParams::default()
    } else {
        example_two_defaults()
    };
    let params = ModelParams {
        omega: opts.omega.unwrap_or(base.omega),
        alpha: opts.alpha.unwrap_or(base.alpha),
        gamma: opts.gamma.unwrap_or(base.gamma),
        beta: opts.beta.unwrap_or(base.beta),
        delta: opts.delta.unwrap_or(base.delta),
        c: opts.c.unwrap_or(base.c),
        m1: opts.m1.unwrap_or(base.m1),
        m2: opts.m2.unwrap_or(base.m2),
        beta_mode: opts.beta_mode.unwrap_or(base.beta_mode),
    };
    Ok(if example == 1 {
        ModelSource::Example1 { params }
    } else {
        ModelSource::Example2 { params }
    })
}
