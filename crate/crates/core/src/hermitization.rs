//! The non-Hermitian operator in differential form, the mapping weight
//! `ρ`, the Hermitian equivalent `h = ρĤρ⁻¹` and its Schrödinger-like
//! reduction.

use crate::error::{Error, Result};
use crate::jet::{Jet, Smooth};
use crate::model::{AnsatzProfile, ModelParams, ProfileValues};

/// Coefficients of `c2 ∂² + c1 ∂ + c0` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl Coefficients {
    pub fn apply(&self, f: Jet) -> f64 {
        self.c2 * f.d2 + self.c1 * f.d1 + self.c0 * f.value
    }
}

/// A second-order differential operator given by its coefficient functions.
pub trait OperatorCoefficients: Sync {
    fn at(&self, x: f64) -> Result<Coefficients>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantOperator(pub Coefficients);

impl OperatorCoefficients for ConstantOperator {
    fn at(&self, _x: f64) -> Result<Coefficients> {
        Ok(self.0)
    }
}

/// `Ĥ = ω(b†b + 1/2) + α(b² - b†²)` written out for `b = A d/dx + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonHermitianOperator {
    pub omega: f64,
    pub alpha: f64,
    pub profile: AnsatzProfile,
}

impl OperatorCoefficients for NonHermitianOperator {
    fn at(&self, x: f64) -> Result<Coefficients> {
        let (w, al) = (self.omega, self.alpha);
        let ProfileValues { a, a1, a2, b, b1, .. } = self.profile.evaluate(x)?;
        Ok(Coefficients {
            c2: -w * a * a,
            c1: 4.0 * al * a * b - 2.0 * w * a * a1,
            c0: -(w - 2.0 * al) * (a * b1 + a1 * b) + w * b * b - al * (a * a2 + a1 * a1)
                + w / 2.0,
        })
    }
}

/// `h = -ω d/dx A² d/dx + U_eff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOperator {
    pub omega: f64,
    pub alpha: f64,
    pub profile: AnsatzProfile,
}

impl HermitianOperator {
    pub fn u_eff(&self, x: f64) -> Result<f64> {
        let v = self.profile.evaluate(x)?;
        Ok(u_eff_from(self.omega, self.alpha, &v))
    }
}

fn u_eff_from(w: f64, al: f64, v: &ProfileValues) -> f64 {
    let ab1 = v.a1 * v.b + v.a * v.b1;
    w / 2.0 - w * ab1 - al * (v.a1 * v.a1 + v.a * v.a2) + (w + 4.0 * al * al / w) * v.b * v.b
}

impl OperatorCoefficients for HermitianOperator {
    fn at(&self, x: f64) -> Result<Coefficients> {
        let v = self.profile.evaluate(x)?;
        Ok(Coefficients {
            c2: -self.omega * v.a * v.a,
            c1: -2.0 * self.omega * v.a * v.a1,
            c0: u_eff_from(self.omega, self.alpha, &v),
        })
    }
}

pub fn nonhermitian_coeffs(params: &ModelParams, profile: &AnsatzProfile) -> NonHermitianOperator {
    NonHermitianOperator {
        omega: params.omega,
        alpha: params.alpha,
        profile: *profile,
    }
}

pub fn hermitian_coeffs(params: &ModelParams, profile: &AnsatzProfile) -> HermitianOperator {
    HermitianOperator {
        omega: params.omega,
        alpha: params.alpha,
        profile: *profile,
    }
}

/// `c2 f'' + c1 f' + c0 f` at `x`.
pub fn apply_operator<C, F>(coeffs: &C, f: &F, x: f64) -> Result<f64>
where
    C: OperatorCoefficients + ?Sized,
    F: Smooth + ?Sized,
{
    Ok(coeffs.at(x)?.apply(f.jet(x)?))
}

/// `ρ(x) = A(x)^(-2αβ/ω) exp(-2αγx/ω)`, the closed-form mapping weight.
pub fn rho_weight(params: &ModelParams, profile: &AnsatzProfile, x: f64) -> Result<f64> {
    let v = profile.evaluate(x)?;
    let k = 2.0 * params.alpha / params.omega;
    let exponent = -k * profile.beta;
    let linear = (-k * profile.gamma * x).exp();
    let power = if exponent == 0.0 {
        1.0
    } else if v.a > 0.0 {
        v.a.powf(exponent)
    } else if exponent.fract() == 0.0 {
        v.a.powi(exponent as i32)
    } else {
        return Err(Error::Domain {
            what: "ρ = A^p e^(qx) with A <= 0 and non-integer p",
            x,
        });
    };
    Ok(power * linear)
}

/// `(ρ⁻¹)'/ρ⁻¹ = (2α/ω) B/A` and its derivative.
pub fn rho_inverse_log_derivative(
    params: &ModelParams,
    profile: &AnsatzProfile,
    x: f64,
) -> Result<(f64, f64)> {
    let v = profile.evaluate(x)?;
    let k = 2.0 * params.alpha / params.omega;
    Ok((k * v.b / v.a, k * (v.b1 * v.a - v.b * v.a1) / (v.a * v.a)))
}

/// Both sides of `Ĥ ρ⁻¹ ξ = ρ⁻¹ h ξ` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityDefect {
    /// `Ĥ(ρ⁻¹ξ)(x)`
    pub lhs: f64,
    /// `ρ⁻¹(x) · (hξ)(x)`
    pub rhs: f64,
    pub rho_inverse: f64,
}

impl SimilarityDefect {
    /// `|lhs - rhs|` measured in the frame of `h`, i.e. multiplied by `ρ`.
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rho_inverse
    }

    /// `|(hξ)(x)|`
    pub fn hermitian_magnitude(&self) -> f64 {
        (self.rhs / self.rho_inverse).abs()
    }
}

/// Evaluates both sides of the similarity relation for a test function
/// `ξ` with exact derivatives; `ρ⁻¹ξ` is differentiated in closed form.
pub fn similarity_defect<F: Smooth + ?Sized>(
    params: &ModelParams,
    profile: &AnsatzProfile,
    xi: &F,
    x: f64,
) -> Result<SimilarityDefect> {
    let rho_inverse = 1.0 / rho_weight(params, profile, x)?;
    let (g, g1) = rho_inverse_log_derivative(params, profile, x)?;
    let f = xi.jet(x)?;
    let u = Jet::new(
        rho_inverse * f.value,
        rho_inverse * (f.d1 + g * f.value),
        rho_inverse * (f.d2 + 2.0 * g * f.d1 + (g1 + g * g) * f.value),
    );
    let lhs = nonhermitian_coeffs(params, profile).at(x)?.apply(u);
    let rhs = rho_inverse * hermitian_coeffs(params, profile).at(x)?.apply(f);
    Ok(SimilarityDefect {
        lhs,
        rhs,
        rho_inverse,
    })
}

/// The full coefficient of `Φ` in `-Φ'' + Q(x) Φ = 0`, obtained from
/// `(h - ε)ξ = 0` with `ξ = Φ/A`:
///
/// `Q = (ω/2 - ε)/(ωA²) - (AB)'/A² + (ω² + 4α²)B²/(ω²A²) + (ω - α)A''/(ωA) - α(A')²/(ωA²)`
pub fn schrodinger_potential(
    params: &ModelParams,
    profile: &AnsatzProfile,
    epsilon: f64,
    x: f64,
) -> Result<f64> {
    let (w, al) = (params.omega, params.alpha);
    let v = profile.evaluate(x)?;
    let a2 = v.a * v.a;
    let ab1 = v.a1 * v.b + v.a * v.b1;
    Ok((w / 2.0 - epsilon) / (w * a2) - ab1 / a2
        + (w * w + 4.0 * al * al) * v.b * v.b / (w * w * a2)
        + (w - al) * v.a2 / (w * v.a)
        - al * v.a1 * v.a1 / (w * a2))
}

/// The ansatz-specialized potential `U(x)` of the Schrödinger-like form,
/// which carries an explicit `+ε` so that `-Φ'' + UΦ = εΦ`.
///
/// `U - ε` equals [`schrodinger_potential`] when `B = γA + βA'`.
pub fn schrodinger_potential_ansatz(
    params: &ModelParams,
    profile: &AnsatzProfile,
    epsilon: f64,
    x: f64,
) -> Result<f64> {
    let (w, al) = (params.omega, params.alpha);
    let sigma = params.sigma();
    let (g, b) = (profile.gamma, profile.beta);
    let v = profile.evaluate(x)?;
    let l = v.a1 / v.a;
    Ok(sigma * g * g + epsilon + (w / 2.0 - epsilon) / (w * v.a * v.a)
        + (b * b * sigma - b - al / w) * l * l
        + ((w - al) / w - b) * v.a2 / v.a
        + 2.0 * g * (sigma * b - 1.0) * l)
}
