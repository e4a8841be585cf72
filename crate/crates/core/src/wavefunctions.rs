//! Jacobi polynomials with arbitrary real parameters and the closed-form
//! bound states of the two shape-invariant families.

use crate::dirac::AnsatzMass;
use crate::error::{Error, Result};
use crate::jet::Smooth;
use crate::model::{ModelParams, ProfileFamily, HYPERBOLIC_GUARD};
use crate::numerics::{self, Grid};
use crate::susy::{self, Superpotential};

/// `P_n^{(a,b)}`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

/// Generalized binomial coefficient `C(x, m)` for real `x`.
fn binomial(x: f64, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, j| acc * (x - j as f64) / (j + 1) as f64)
}

impl JacobiParams {
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        Self { n, a, b }
    }

    /// False when a leading coefficient `2k(k+a+b)(2k+a+b-2)` of the
    /// three-term recurrence vanishes (or nearly so) for some `2 <= k <= n`.
    pub fn recurrence_is_safe(&self) -> bool {
        let (a, b) = (self.a, self.b);
        let scale = 1.0 + a.abs() + b.abs();
        (2..=self.n).all(|k| {
            let k = k as f64;
            (k + a + b).abs() > 1e-8 * (k + scale) && (2.0 * k + a + b - 2.0).abs() > 1e-8 * (k + scale)
        })
    }

    /// Value at `z`. Uses the recurrence unless its running error estimate
    /// exceeds that of the explicit sum (which happens near a vanishing
    /// leading coefficient, a removable singularity of the recurrence).
    pub fn eval(&self, z: f64) -> f64 {
        self.eval_flagged(z).0
    }

    /// Value at `z` and whether the explicit-sum fallback was used.
    pub fn eval_flagged(&self, z: f64) -> (f64, bool) {
        if self.recurrence_is_safe() {
            let (value, error) = self.eval_recurrence(z);
            if error <= 1e-13 * value.abs() {
                return (value, false);
            }
            let (sum, sum_error) = self.eval_explicit_with_error(z);
            if error <= sum_error {
                return (value, false);
            }
            (sum, true)
        } else {
            (self.eval_explicit(z), true)
        }
    }

    /// Three-term recurrence with a first-order running bound on the
    /// accumulated rounding error.
    fn eval_recurrence(&self, z: f64) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        let eps = f64::EPSILON;
        let (mut prev, mut prev_err) = (1.0, 0.0);
        if self.n == 0 {
            return (prev, prev_err);
        }
        let mut cur = 0.5 * ((a + b + 2.0) * z + a - b);
        let mut cur_err = eps * ((a + b + 2.0) * z).abs().max((a - b).abs());
        for k in 2..=self.n {
            let k = k as f64;
            let s = 2.0 * k + a + b;
            let lead = 2.0 * k * (k + a + b) * (s - 2.0);
            let mid = (s - 1.0) * (s * (s - 2.0) * z + a * a - b * b);
            let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
            let next = (mid * cur - back * prev) / lead;
            let next_err = (mid.abs() * cur_err
                + back.abs() * prev_err
                + 4.0 * eps * ((mid * cur).abs() + (back * prev).abs()))
                / lead.abs();
            (prev, prev_err) = (cur, cur_err);
            (cur, cur_err) = (next, next_err);
        }
        (cur, cur_err)
    }

    fn eval_explicit_with_error(&self, z: f64) -> (f64, f64) {
        let n = self.n;
        let (lo, hi) = ((z - 1.0) / 2.0, (z + 1.0) / 2.0);
        let (mut sum, mut magnitude) = (0.0, 0.0);
        for k in 0..=n {
            let term = binomial(n as f64 + self.a, n - k)
                * binomial(n as f64 + self.b, k)
                * lo.powi(k as i32)
                * hi.powi((n - k) as i32);
            sum += term;
            magnitude += term.abs();
        }
        (sum, (2 * n + 4) as f64 * f64::EPSILON * magnitude)
    }

    /// `Σ_k C(n+a, n-k) C(n+b, k) ((z-1)/2)^k ((z+1)/2)^(n-k)`
    pub fn eval_explicit(&self, z: f64) -> f64 {
        self.eval_explicit_with_error(z).0
    }

    /// `d/dz P_n^{(a,b)} = (n+a+b+1)/2 · P_{n-1}^{(a+1,b+1)}`
    pub fn derivative(&self, z: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let lower = JacobiParams::new(self.n - 1, self.a + 1.0, self.b + 1.0);
        0.5 * (self.n as f64 + self.a + self.b + 1.0) * lower.eval(z)
    }

    pub fn second_derivative(&self, z: f64) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let lower = JacobiParams::new(self.n - 1, self.a + 1.0, self.b + 1.0);
        0.5 * (self.n as f64 + self.a + self.b + 1.0) * lower.derivative(z)
    }

    /// Left side of `(1-z²)P'' + (b - a - (a+b+2)z)P' + n(n+a+b+1)P = 0`
    /// and the sum of the magnitudes of its terms.
    pub fn ode_defect(&self, z: f64) -> (f64, f64) {
        let (a, b, n) = (self.a, self.b, self.n as f64);
        let terms = [
            (1.0 - z * z) * self.second_derivative(z),
            (b - a - (a + b + 2.0) * z) * self.derivative(z),
            n * (n + a + b + 1.0) * self.eval(z),
        ];
        (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
    }
}

pub fn jacobi_eval(p: &JacobiParams, z: f64) -> f64 {
    p.eval(z)
}

/// A closed-form bound state sampled on the interior grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub n: usize,
    pub grid: Grid,
    /// Unit norm under grid quadrature.
    pub samples: Vec<f64>,
    /// `√M(x)` times `samples`, when requested.
    pub spinor: Option<Vec<f64>>,
    pub e_bar: f64,
    /// Grid norm of the unnormalized closed form (may be `inf` if it
    /// overflows).
    pub norm: f64,
    pub nodes: usize,
    /// The polynomial factor.
    pub jacobi: JacobiParams,
}

/// `ln(1 + e^y)` without overflow.
fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

/// Turns `(log prefactor, polynomial)` pairs into unit-norm samples.
fn assemble(parts: &[(f64, f64)], grid: &Grid) -> Result<(Vec<f64>, f64)> {
    let log_mag = |&(l, p): &(f64, f64)| if p == 0.0 { f64::NEG_INFINITY } else { l + p.abs().ln() };
    let shift = parts.iter().map(log_mag).fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::InvalidParameter("state vanishes on the whole grid".into()));
    }
    let mut samples: Vec<f64> = parts
        .iter()
        .map(|part| {
            let m = log_mag(part);
            if m == f64::NEG_INFINITY {
                0.0
            } else {
                part.1.signum() * (m - shift).exp()
            }
        })
        .collect();
    let q = numerics::quadrature_norm(&samples, grid)?.value;
    samples.iter_mut().for_each(|v| *v /= q);
    Ok((samples, q * shift.exp()))
}

fn attach_spinor(
    samples: &[f64],
    grid: &Grid,
    params: &ModelParams,
    family: ProfileFamily,
) -> Result<Vec<f64>> {
    let mass = AnsatzMass {
        profile: params.profile(family),
        m1: params.m1,
        m2: params.m2,
    };
    grid.points()
        .into_iter()
        .zip(samples)
        .map(|(x, s)| {
            let m = mass.value(x)?;
            if !(m > 0.0) {
                return Err(Error::NonPositiveMass { x, value: m });
            }
            Ok(m.sqrt() * s)
        })
        .collect()
}

/// Rosen-Morse II state
/// `((1+tanh x)/2)^(-r) ((1-tanh x)/2)^(-s) P_n^{(-2r,-2s)}(-tanh x)` of
/// `V0 - V1 sech²x + V2 tanh x`. With `spinor`, the upper Dirac component
/// `√M ϕ` for the cosh profile of those constants is attached.
pub fn rm2_wavefunction(
    n: usize,
    v1: f64,
    v2: f64,
    grid: &Grid,
    spinor: Option<&ModelParams>,
) -> Result<BoundState> {
    let w = susy::rm2_superpotential(v1, v2)?;
    let Superpotential::RosenMorse2 { c2, .. } = w else {
        unreachable!()
    };
    let d = c2 - n as f64;
    if !(d > 0.0 && d * d > v2.abs() / 2.0) {
        return Err(Error::Inadmissible {
            n,
            reason: format!("requires C2 - n > 0 and (C2 - n)² > |V2|/2 (C2 - n = {d})"),
        });
    }
    let q = n as f64 + 0.5 * (1.0 - (1.0 + 4.0 * v1).sqrt());
    let r = 0.5 * (q - v2 / (2.0 * q));
    let s = 0.5 * (q + v2 / (2.0 * q));
    let jacobi = JacobiParams::new(n, -2.0 * r, -2.0 * s);
    let parts: Vec<(f64, f64)> = grid
        .points()
        .into_iter()
        .map(|x| {
            let log_plus = -softplus(-2.0 * x);
            let log_minus = -softplus(2.0 * x);
            (-r * log_plus - s * log_minus, jacobi.eval(-x.tanh()))
        })
        .collect();
    let (samples, norm) = assemble(&parts, grid)?;
    let spinor = spinor
        .map(|p| attach_spinor(&samples, grid, p, ProfileFamily::Cosh))
        .transpose()?;
    Ok(BoundState {
        n,
        grid: *grid,
        nodes: numerics::count_nodes(&samples),
        e_bar: susy::si_remainder_ladder(&w, n)?,
        samples,
        spinor,
        norm,
        jacobi,
    })
}

/// Generalized Pöschl-Teller state in `y = cosh 2cx`:
/// `(y-1)^(B/2c) (y+1)^(-A/2c) P_n^{(B/c-1/2, -A/c-1/2)}(y)`, which at
/// `n = 0` is `sinh^(B/c)(cx) cosh^(-A/c)(cx)` up to a constant.
pub fn gpt_wavefunction(
    n: usize,
    a: f64,
    b: f64,
    c: f64,
    grid: &Grid,
    spinor: Option<&ModelParams>,
) -> Result<BoundState> {
    if !(c > 0.0 && a / c > 0.0 && b / c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Pöschl-Teller states need c > 0, A/c > 0 and B/c > 0 (got A = {a}, B = {b}, c = {c})"
        )));
    }
    if grid.x_min < 0.0 {
        return Err(Error::Domain {
            what: "Pöschl-Teller state (x > 0)",
            x: grid.x_min,
        });
    }
    if a - b - 2.0 * c * n as f64 <= 0.0 {
        return Err(Error::Inadmissible {
            n,
            reason: format!("requires A - B - 2cn > 0 (got {})", a - b - 2.0 * c * n as f64),
        });
    }
    let jacobi = JacobiParams::new(n, b / c - 0.5, -a / c - 0.5);
    let ln2 = std::f64::consts::LN_2;
    let parts = grid
        .points()
        .into_iter()
        .map(|x| {
            let t = c * x;
            if 2.0 * t > HYPERBOLIC_GUARD {
                return Err(Error::Overflow {
                    argument: 2.0 * t,
                    threshold: HYPERBOLIC_GUARD,
                });
            }
            let log_pref = b / (2.0 * c) * (ln2 + 2.0 * susy::ln_sinh(t))
                - a / (2.0 * c) * (ln2 + 2.0 * susy::ln_cosh(t));
            Ok((log_pref, jacobi.eval((2.0 * t).cosh())))
        })
        .collect::<Result<Vec<_>>>()?;
    let (samples, norm) = assemble(&parts, grid)?;
    let spinor = spinor
        .map(|p| attach_spinor(&samples, grid, p, ProfileFamily::Coth))
        .transpose()?;
    let w = Superpotential::PoschlTeller { a, b, c };
    Ok(BoundState {
        n,
        grid: *grid,
        nodes: numerics::count_nodes(&samples),
        e_bar: susy::si_remainder_ladder(&w, n)?,
        samples,
        spinor,
        norm,
        jacobi,
    })
}
