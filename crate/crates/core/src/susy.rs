//! Shape-invariant superpotentials: Rosen-Morse II on the line and the
//! generalized Pöschl-Teller form on the half line. Partner potentials,
//! remainders, level ladders and the relativistic energies built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{self, Grid};

/// `sech² t`, finite for every real `t`.
pub(crate) fn sech2(t: f64) -> f64 {
    let e = (-2.0 * t.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// `csch² t` for `t > 0`.
pub(crate) fn csch2(t: f64) -> f64 {
    let e = (-2.0 * t).exp();
    4.0 * e / ((1.0 - e) * (1.0 - e))
}

/// `coth t` for `t > 0`.
pub(crate) fn coth(t: f64) -> f64 {
    1.0 / t.tanh()
}

/// `ln cosh t` without overflow.
pub(crate) fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `ln sinh t` for `t > 0` without overflow.
pub(crate) fn ln_sinh(t: f64) -> f64 {
    t + (-(-2.0 * t).exp()).ln_1p() - std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Superpotential {
    /// `W = C1 + C2 tanh x`
    RosenMorse2 { c1: f64, c2: f64 },
    /// `W = A tanh cx - B coth cx` on `x > 0`
    PoschlTeller { a: f64, b: f64, c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partners {
    /// `W² - W'`
    pub v_minus: f64,
    /// `W² + W'`
    pub v_plus: f64,
}

impl Superpotential {
    /// Boundary conditions that make the ground state normalizable.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Superpotential::RosenMorse2 { c1, c2 } => {
                if !(c2 > 0.0 && c1.abs() < c2) {
                    return Err(Error::InvalidParameter(format!(
                        "Rosen-Morse superpotential needs C2 > 0 and |C1| < C2 (got C1 = {c1}, C2 = {c2})"
                    )));
                }
            }
            Superpotential::PoschlTeller { a, b, c } => {
                if !(c > 0.0 && a / c > 0.0 && b / c > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "Pöschl-Teller superpotential needs c > 0, A/c > 0 and B/c > 0 (got A = {a}, B = {b}, c = {c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Superpotential::RosenMorse2 { .. } => x.is_finite(),
            Superpotential::PoschlTeller { .. } => x.is_finite() && x > 0.0,
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "W(x) = A tanh cx - B coth cx (x > 0)",
                x,
            })
        }
    }

    /// `(W, W')` at `x`.
    pub fn w(&self, x: f64) -> Result<(f64, f64)> {
        self.check_domain(x)?;
        Ok(match *self {
            Superpotential::RosenMorse2 { c1, c2 } => (c1 + c2 * x.tanh(), c2 * sech2(x)),
            Superpotential::PoschlTeller { a, b, c } => {
                let t = c * x;
                (
                    a * t.tanh() - b * coth(t),
                    a * c * sech2(t) + b * c * csch2(t),
                )
            }
        })
    }

    /// Parameters one step up the shape-invariance ladder.
    pub fn shifted(&self) -> Result<Superpotential> {
        match *self {
            Superpotential::RosenMorse2 { c1, c2 } => {
                let next = c2 - 1.0;
                if next <= 0.0 {
                    return Err(Error::ShiftUndefined(format!(
                        "C2 - 1 = {next} must be positive"
                    )));
                }
                Ok(Superpotential::RosenMorse2 {
                    c1: c1 * c2 / next,
                    c2: next,
                })
            }
            Superpotential::PoschlTeller { a, b, c } => Ok(Superpotential::PoschlTeller {
                a: a - c,
                b: b + c,
                c,
            }),
        }
    }

    /// Constant part of `W² - W'` (its value where the hyperbolic terms die).
    fn asymptote(&self) -> f64 {
        match *self {
            Superpotential::RosenMorse2 { c1, c2 } => c1 * c1 + c2 * c2,
            Superpotential::PoschlTeller { a, b, .. } => (a - b) * (a - b),
        }
    }

    /// `R(a1)` in `V+(x; a0) = V-(x; a1) + R(a1)`.
    pub fn remainder(&self) -> Result<f64> {
        Ok(self.asymptote() - self.shifted()?.asymptote())
    }

    /// `-∫W dx`, the logarithm of the unnormalized ground state.
    pub fn ground_state_log(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match *self {
            Superpotential::RosenMorse2 { c1, c2 } => -c1 * x - c2 * ln_cosh(x),
            Superpotential::PoschlTeller { a, b, c } => {
                let t = c * x;
                -(a / c) * ln_cosh(t) + (b / c) * ln_sinh(t)
            }
        })
    }
}

/// Partner potentials in their expanded closed forms.
pub fn partner_potentials(w: &Superpotential, x: f64) -> Result<Partners> {
    w.check_domain(x)?;
    Ok(match *w {
        Superpotential::RosenMorse2 { c1, c2 } => {
            let base = c1 * c1 + c2 * c2 + 2.0 * c1 * c2 * x.tanh();
            let s = sech2(x);
            Partners {
                v_minus: base - (c2 * c2 + c2) * s,
                v_plus: base - (c2 * c2 - c2) * s,
            }
        }
        Superpotential::PoschlTeller { a, b, c } => {
            let t = c * x;
            let (s, cs) = (sech2(t), csch2(t));
            let base = (a - b) * (a - b);
            Partners {
                v_minus: base + b * (b - c) * cs - a * (a + c) * s,
                v_plus: base + b * (b + c) * cs - a * (a - c) * s,
            }
        }
    })
}

/// `V+(x; a0) - V-(x; a1) - R(a1)`.
pub fn si_check(w: &Superpotential, x: f64) -> Result<f64> {
    let next = w.shifted()?;
    let plus = partner_potentials(w, x)?.v_plus;
    let minus = partner_potentials(&next, x)?.v_minus;
    Ok(plus - minus - w.remainder()?)
}

/// `Ē_n = Σ_{k=1..n} R(a_k)` in closed form; zero for `n = 0`.
pub fn si_remainder_ladder(w: &Superpotential, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    match *w {
        Superpotential::RosenMorse2 { c1, c2 } => {
            let d = c2 - nf;
            if d == 0.0 {
                return Err(Error::Inadmissible {
                    n,
                    reason: "C2 - n = 0".into(),
                });
            }
            let shifted_c1 = c1 * c2 / d;
            Ok(c1 * c1 + c2 * c2 - shifted_c1 * shifted_c1 - d * d)
        }
        Superpotential::PoschlTeller { a, b, c } => {
            let g = a - b;
            let top = g - 2.0 * c * nf;
            Ok(g * g - top * top)
        }
    }
}

/// Rosen-Morse II coefficients of `V0 - V1 sech²x + V2 tanh x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rm2Coeffs {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    /// Present when derived from model constants.
    pub sigma: Option<f64>,
}

impl Rm2Coeffs {
    pub fn direct(v0: f64, v1: f64, v2: f64) -> Self {
        Self {
            v0,
            v1,
            v2,
            sigma: None,
        }
    }

    /// `V0 = ω/2 + γ²σ + 1/4 + ((σβ - 1)/m2)²`,
    /// `V1 = ω/2 - γ²(m2² - σ) - 1/4 + (σβ - 1)²/m2²`,
    /// `V2 = 2γ(σβ - 1)`; these assume `δ = 1`.
    pub fn from_params(params: &ModelParams) -> Result<Self> {
        if !(params.omega > 0.0) || params.m2 == 0.0 {
            return Err(Error::InvalidParameter(
                "Rosen-Morse coefficients need omega > 0 and m2 != 0".into(),
            ));
        }
        let sigma = params.sigma();
        let beta = params.effective_beta();
        let (omega, gamma, m2) = (params.omega, params.gamma, params.m2);
        let q = sigma * beta - 1.0;
        Ok(Self {
            v0: omega / 2.0 + gamma * gamma * sigma + 0.25 + (q / m2) * (q / m2),
            v1: omega / 2.0 - gamma * gamma * (m2 * m2 - sigma) - 0.25 + q * q / (m2 * m2),
            v2: 2.0 * gamma * q,
            sigma: Some(sigma),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelStatus {
    Ok,
    /// `C2 - n = 0`: the level formula divides by zero.
    Pole,
    /// A non-finite intermediate value.
    Overflow,
}

impl LevelStatus {
    pub fn name(self) -> &'static str {
        match self {
            LevelStatus::Ok => "ok",
            LevelStatus::Pole => "pole",
            LevelStatus::Overflow => "overflow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    /// Eigenvalue of `-d² + W² - W'`; zero for the ground state.
    pub e_bar: f64,
    /// The nonnegative branch of `±sqrt(radicand)`: real and `>= 0`, or
    /// purely imaginary with positive imaginary part.
    pub energy: Complex64,
    pub radicand: f64,
    pub is_real: bool,
    pub admissible: bool,
    pub status: LevelStatus,
}

impl Level {
    fn from_parts(n: usize, e_bar: f64, radicand: f64, scale: f64, admissible: bool) -> Self {
        if !(e_bar.is_finite() && radicand.is_finite()) {
            return Self::failed(n, LevelStatus::Overflow);
        }
        let is_real = radicand >= 0.0;
        let root = radicand.abs().sqrt() * scale;
        Self {
            n,
            e_bar,
            energy: if is_real {
                Complex64::new(root, 0.0)
            } else {
                Complex64::new(0.0, root)
            },
            radicand,
            is_real,
            admissible,
            status: LevelStatus::Ok,
        }
    }

    fn failed(n: usize, status: LevelStatus) -> Self {
        Self {
            n,
            e_bar: f64::NAN,
            energy: Complex64::new(f64::NAN, f64::NAN),
            radicand: f64::NAN,
            is_real: false,
            admissible: false,
            status,
        }
    }

    /// The other sign of the `±` pair.
    pub fn negative_branch(&self) -> Complex64 {
        -self.energy
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LevelSpectrum {
    pub levels: Vec<Level>,
}

impl LevelSpectrum {
    pub fn admissible(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter().filter(|l| l.admissible)
    }

    pub fn level(&self, n: usize) -> Option<&Level> {
        self.levels.get(n)
    }
}

/// Which radicand the Rosen-Morse energies use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Rm2EnergyForm {
    /// `V0 - V2²/4(C2 - n)² + (C2 - n)²`, the closed form as usually quoted; its
    /// positivity is the stated reality condition.
    #[default]
    AsPrinted,
    /// `V0 - V2²/4(C2 - n)² - (C2 - n)²`, the eigenvalue of `V0 - V1 sech² +
    /// V2 tanh` itself.
    Consistent,
}

impl std::str::FromStr for Rm2EnergyForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(Self::AsPrinted),
            "consistent" => Ok(Self::Consistent),
            other => Err(Error::InvalidParameter(format!(
                "unknown energy form `{other}` (expected as-printed or consistent)"
            ))),
        }
    }
}

impl Rm2EnergyForm {
    pub fn name(self) -> &'static str {
        match self {
            Rm2EnergyForm::AsPrinted => "as-printed",
            Rm2EnergyForm::Consistent => "consistent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rm2Input {
    Params(ModelParams),
    Direct { v0: f64, v1: f64, v2: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rm2Solution {
    pub coeffs: Rm2Coeffs,
    pub superpotential: Superpotential,
    /// `E² - V0` of the ground state, `-(C1² + C2²)`.
    pub ground_e_bar: f64,
    pub spectrum: LevelSpectrum,
    pub warnings: Vec<String>,
}

/// `C2 = (-1 + sqrt(1 + 4V1))/2`, `C1 = V2 / 2C2`.
pub fn rm2_superpotential(v1: f64, v2: f64) -> Result<Superpotential> {
    let disc = 1.0 + 4.0 * v1;
    if !(disc > 0.0) {
        return Err(Error::NoRealC2 { value: disc });
    }
    let c2 = 0.5 * (disc.sqrt() - 1.0);
    if c2 == 0.0 {
        return Err(Error::InvalidParameter(
            "V1 = 0 gives C2 = 0 and no superpotential".into(),
        ));
    }
    Ok(Superpotential::RosenMorse2 {
        c1: v2 / (2.0 * c2),
        c2,
    })
}

pub fn rm2_solve(input: Rm2Input, n_max: usize, form: Rm2EnergyForm) -> Result<Rm2Solution> {
    let mut warnings = Vec::new();
    let coeffs = match input {
        Rm2Input::Params(params) => {
            params.validate()?;
            if params.delta != 1.0 {
                warnings.push(format!(
                    "delta = {} but the Rosen-Morse coefficients assume delta = 1",
                    params.delta
                ));
            }
            Rm2Coeffs::from_params(&params)?
        }
        Rm2Input::Direct { v0, v1, v2 } => {
            if ![v0, v1, v2].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidParameter("V0, V1, V2 must be finite".into()));
            }
            Rm2Coeffs::direct(v0, v1, v2)
        }
    };
    let superpotential = rm2_superpotential(coeffs.v1, coeffs.v2)?;
    if coeffs.v1 <= 0.0 {
        warnings.push(format!("V1 = {} <= 0: no bound states", coeffs.v1));
    }
    let Superpotential::RosenMorse2 { c1, c2 } = superpotential else {
        unreachable!()
    };
    let v2 = coeffs.v2;
    let levels = (0..=n_max)
        .map(|n| {
            let d = c2 - n as f64;
            if d == 0.0 {
                return Level::failed(n, LevelStatus::Pole);
            }
            let e_bar = if n == 0 {
                0.0
            } else {
                c1 * c1 + c2 * c2 - v2 * v2 / (4.0 * d * d) - d * d
            };
            let tail = match form {
                Rm2EnergyForm::AsPrinted => d * d,
                Rm2EnergyForm::Consistent => -d * d,
            };
            let radicand = coeffs.v0 - v2 * v2 / (4.0 * d * d) + tail;
            let admissible = d > 0.0 && d * d > v2.abs() / 2.0;
            Level::from_parts(n, e_bar, radicand, 1.0, admissible)
        })
        .collect();
    Ok(Rm2Solution {
        coeffs,
        superpotential,
        ground_e_bar: -(c1 * c1 + c2 * c2),
        spectrum: LevelSpectrum { levels },
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GptInput {
    /// `B = 3c/2`, `A = c/2 - (ω/2 - γ²(m2² - σ) + δ²m2²)/4c`.
    Params(ModelParams),
    Direct {
        a: f64,
        b: f64,
        c: f64,
        delta: f64,
        gamma: f64,
        m2: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GptSolution {
    pub superpotential: Superpotential,
    pub delta: f64,
    /// `γ m2`
    pub gamma_m2: f64,
    pub spectrum: LevelSpectrum,
    pub warnings: Vec<String>,
}

/// `(A, B)` from the model constants.
pub fn gpt_coefficients(params: &ModelParams) -> (f64, f64) {
    let ModelParams {
        omega,
        gamma,
        delta,
        c,
        m2,
        ..
    } = *params;
    let sigma = params.sigma();
    let a = c / 2.0 - (omega / 2.0 - gamma * gamma * (m2 * m2 - sigma) + delta * delta * m2 * m2) / (4.0 * c);
    (a, 1.5 * c)
}

pub fn gpt_solve(input: GptInput, n_max: usize) -> Result<GptSolution> {
    let (a, b, c, delta, gamma_m2) = match input {
        GptInput::Params(params) => {
            params.validate()?;
            let (a, b) = gpt_coefficients(&params);
            (a, b, params.c, params.delta, params.gamma * params.m2)
        }
        GptInput::Direct {
            a,
            b,
            c,
            delta,
            gamma,
            m2,
        } => {
            if ![a, b, c, delta, gamma, m2].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidParameter("A, B, c, delta, gamma, m2 must be finite".into()));
            }
            if !(c > 0.0) {
                return Err(Error::InvalidParameter(format!("c must be > 0 (got {c})")));
            }
            (a, b, c, delta, gamma * m2)
        }
    };
    let mut warnings = Vec::new();
    let bounded = a / c > 0.0 && b / c > 0.0;
    if a / c <= 0.0 {
        warnings.push(format!("A/c = {} <= 0 violates the boundary conditions", a / c));
    }
    if b / c <= 0.0 {
        warnings.push(format!("B/c = {} <= 0 violates the boundary conditions", b / c));
    }
    let superpotential = Superpotential::PoschlTeller { a, b, c };
    let levels = (0..=n_max)
        .map(|n| {
            let e_bar = si_remainder_ladder(&superpotential, n).expect("closed form has no poles");
            let radicand = gamma_m2 * gamma_m2 + e_bar;
            let admissible = bounded && a - b - 2.0 * c * n as f64 > 0.0;
            Level::from_parts(n, e_bar, radicand, delta.abs(), admissible)
        })
        .collect();
    Ok(GptSolution {
        superpotential,
        delta,
        gamma_m2,
        spectrum: LevelSpectrum { levels },
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderState {
    /// Unit-norm samples on the interior grid nodes.
    pub samples: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Builds the `n`-th state by applying `A†(a_k) = -d/dx + W(x; a_k)` for
/// `k = n-1, ..., 0` to the ground state of `W(x; a_n)`, differentiating
/// numerically at fourth order.
pub fn ladder_state(w: &Superpotential, n: usize, grid: &Grid) -> Result<LadderState> {
    let mut warnings = Vec::new();
    if n > 5 {
        warnings.push(format!(
            "n = {n} > 5: repeated numerical differentiation loses accuracy"
        ));
    }
    let mut chain = vec![*w];
    for _ in 0..n {
        let next = chain.last().unwrap().shifted()?;
        chain.push(next);
    }
    let xs = grid.points();
    let logs = xs
        .iter()
        .map(|&x| chain[n].ground_state_log(x))
        .collect::<Result<Vec<f64>>>()?;
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut psi: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();

    let h = grid.step();
    let mut worst = 0.0f64;
    for link in chain[..n].iter().rev() {
        let d4 = numerics::derivative(&psi, h);
        let scale = d4.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 1..psi.len() - 1 {
            let d2 = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
            worst = worst.max((d4[i] - d2).abs() / scale);
        }
        psi = xs
            .iter()
            .zip(psi.iter().zip(&d4))
            .map(|(&x, (p, d))| Ok(-d + link.w(x)?.0 * p))
            .collect::<Result<Vec<f64>>>()?;
    }
    if worst > 1e-3 {
        warnings.push(format!(
            "grid too coarse for numerical differentiation (difference estimate {worst:.1e})"
        ));
    }

    let norm = numerics::quadrature_norm(&psi, grid)?.value;
    let max = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sign = psi
        .iter()
        .find(|v| v.abs() > 1e-3 * max)
        .map_or(1.0, |v| v.signum());
    psi.iter_mut().for_each(|v| *v *= sign / norm);
    Ok(LadderState {
        samples: psi,
        warnings,
    })
}
