//! Model constants, the `A(x)`/`B(x)` ansatz profiles and the constraint
//! algebra that ties the bosonic model to the Dirac reduction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest hyperbolic argument evaluated before reporting overflow.
pub const HYPERBOLIC_GUARD: f64 = 700.0;

/// How the ansatz constant `β` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BetaMode {
    /// `β` is taken verbatim from the input (e.g. `β = 6` for the reference spectra).
    #[default]
    Literal,
    /// `β = (ω - 2α) / 2ω`, from matching the `A''/A` terms of the two
    /// Schrödinger-like forms.
    Matched,
    /// `β = -m1 / m2`, which removes the `A'/A` part of the mass.
    MassCancelling,
}

impl BetaMode {
    pub fn name(self) -> &'static str {
        match self {
            BetaMode::Literal => "literal",
            BetaMode::Matched => "matched",
            BetaMode::MassCancelling => "mass-cancelling",
        }
    }
}

impl std::str::FromStr for BetaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(BetaMode::Literal),
            "matched" => Ok(BetaMode::Matched),
            "mass-cancelling" => Ok(BetaMode::MassCancelling),
            other => Err(Error::InvalidParameter(format!(
                "unknown beta mode `{other}` (expected literal, matched or mass-cancelling)"
            ))),
        }
    }
}

/// All real constants of the model in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Raw `β` input; only used as-is in [`BetaMode::Literal`].
    pub beta: f64,
    pub delta: f64,
    pub c: f64,
    pub m1: f64,
    pub m2: f64,
    pub beta_mode: BetaMode,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega: 3.0,
            alpha: 2.0,
            gamma: 0.1,
            beta: 6.0,
            delta: 1.0,
            c: 1.0,
            m1: 0.0,
            m2: 2.0,
            beta_mode: BetaMode::Literal,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.omega, self.alpha, self.gamma, self.beta, self.delta, self.c, self.m1, self.m2,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("all model constants must be finite".into()));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega must be > 0 (got {})", self.omega)));
        }
        if self.m2 == 0.0 {
            return Err(Error::InvalidParameter("m2 must be nonzero".into()));
        }
        if self.delta == 0.0 {
            return Err(Error::InvalidParameter("delta must be nonzero".into()));
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidParameter(format!("c must be > 0 (got {})", self.c)));
        }
        Ok(())
    }

    /// `σ = (ω² + 4α²) / ω²`
    pub fn sigma(&self) -> f64 {
        sigma(self.omega, self.alpha)
    }

    /// `β` as selected by [`ModelParams::beta_mode`].
    pub fn effective_beta(&self) -> f64 {
        match self.beta_mode {
            BetaMode::Literal => self.beta,
            BetaMode::Matched => (self.omega - 2.0 * self.alpha) / (2.0 * self.omega),
            BetaMode::MassCancelling => -self.m1 / self.m2,
        }
    }

    /// The combination `m1 + β m2` multiplying `A'/A` in the mass.
    pub fn mass_coupling(&self) -> f64 {
        self.m1 + self.effective_beta() * self.m2
    }

    /// Replace `m1` by the unique value satisfying `m2 (m1 + β m2) = σβ - 1`.
    ///
    /// Leaves `β` untouched, so this is meaningless in
    /// [`BetaMode::MassCancelling`] where `β` itself depends on `m1`.
    pub fn with_closure_m1(mut self) -> Self {
        let beta = self.effective_beta();
        self.m1 = (self.sigma() * beta - 1.0) / self.m2 - beta * self.m2;
        self
    }

    pub fn profile(&self, family: ProfileFamily) -> AnsatzProfile {
        AnsatzProfile {
            family,
            delta: self.delta,
            c: self.c,
            gamma: self.gamma,
            beta: self.effective_beta(),
        }
    }
}

pub fn sigma(omega: f64, alpha: f64) -> f64 {
    (omega * omega + 4.0 * alpha * alpha) / (omega * omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileFamily {
    /// `A(x) = δ cosh x` on the whole line.
    Cosh,
    /// `A(x) = δ coth(cx)` on `x > 0`.
    Coth,
}

/// `A(x)` together with the `B = γA + βA'` ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzProfile {
    pub family: ProfileFamily,
    pub delta: f64,
    pub c: f64,
    pub gamma: f64,
    pub beta: f64,
}

/// `A` with derivatives up to third order, and `B`, `B'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues {
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b: f64,
    pub b1: f64,
}

impl ProfileValues {
    /// `A'/A`
    pub fn log_slope(&self) -> f64 {
        self.a1 / self.a
    }
}

impl AnsatzProfile {
    pub fn cosh(delta: f64, gamma: f64, beta: f64) -> Self {
        Self {
            family: ProfileFamily::Cosh,
            delta,
            c: 1.0,
            gamma,
            beta,
        }
    }

    pub fn coth(delta: f64, c: f64, gamma: f64, beta: f64) -> Self {
        Self {
            family: ProfileFamily::Coth,
            delta,
            c,
            gamma,
            beta,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self.family {
            ProfileFamily::Cosh => x.is_finite(),
            ProfileFamily::Coth => x.is_finite() && x > 0.0,
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<ProfileValues> {
        let d = self.delta;
        let (a, a1, a2, a3) = match self.family {
            ProfileFamily::Cosh => {
                guard(x)?;
                if !x.is_finite() {
                    return Err(Error::Domain { what: "A(x) = δ cosh x", x });
                }
                let (ch, sh) = (x.cosh(), x.sinh());
                (d * ch, d * sh, d * ch, d * sh)
            }
            ProfileFamily::Coth => {
                if !self.contains(x) {
                    return Err(Error::Domain { what: "A(x) = δ coth cx (x > 0)", x });
                }
                let c = self.c;
                let t = c * x;
                guard(t)?;
                let sh = t.sinh();
                let coth = t.cosh() / sh;
                let csch2 = 1.0 / (sh * sh);
                (
                    d * coth,
                    -d * c * csch2,
                    2.0 * d * c * c * csch2 * coth,
                    -2.0 * d * c * c * c * csch2 * (2.0 * coth * coth + csch2),
                )
            }
        };
        if a == 0.0 {
            return Err(Error::Singular { what: "A(x)", x });
        }
        Ok(ProfileValues {
            a,
            a1,
            a2,
            a3,
            b: self.gamma * a + self.beta * a1,
            b1: self.gamma * a1 + self.beta * a2,
        })
    }
}

fn guard(argument: f64) -> Result<()> {
    if argument.abs() > HYPERBOLIC_GUARD {
        Err(Error::Overflow {
            argument,
            threshold: HYPERBOLIC_GUARD,
        })
    } else {
        Ok(())
    }
}

/// Constants fixed by matching the Hermitian equivalent against the Dirac
/// effective potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintSolution {
    pub sigma: f64,
    pub beta: f64,
    /// `ε = γ² m2² - σγ²`
    pub epsilon: f64,
    /// `E² = ω/2 - γ² (m2² - σ)`
    pub e_squared: f64,
    /// `m1 = (-βωm2 + sqrt(ω²(1 + β²m2²) - 4αω)) / 2ω`, absent when the radicand is negative.
    pub m1_plus: Option<f64>,
    pub m1_minus: Option<f64>,
    /// Radicand of the two `m1` branches.
    pub m1_radicand: f64,
    /// The `m1` solving `m2 (m1 + β m2) = σβ - 1` exactly.
    pub m1_closure: f64,
}

impl ConstraintSolution {
    /// Nonnegative root of `E²`, if real.
    pub fn energy(&self) -> Option<f64> {
        (self.e_squared >= 0.0).then(|| self.e_squared.sqrt())
    }
}

pub fn derived_constants(params: &ModelParams) -> Result<ConstraintSolution> {
    let ModelParams {
        omega,
        alpha,
        gamma,
        m2,
        ..
    } = *params;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("omega must be > 0 (got {omega})")));
    }
    if m2 == 0.0 {
        return Err(Error::InvalidParameter("m2 must be nonzero".into()));
    }
    let sigma = params.sigma();
    let beta = params.effective_beta();
    let g2 = gamma * gamma;
    let epsilon = g2 * m2 * m2 - sigma * g2;
    let e_squared = omega / 2.0 - g2 * (m2 * m2 - sigma);

    let m1_radicand = omega * omega * (1.0 + beta * beta * m2 * m2) - 4.0 * alpha * omega;
    let (m1_plus, m1_minus) = if m1_radicand >= 0.0 {
        let root = m1_radicand.sqrt();
        let base = -beta * omega * m2;
        (
            Some((base + root) / (2.0 * omega)),
            Some((base - root) / (2.0 * omega)),
        )
    } else {
        (None, None)
    };

    Ok(ConstraintSolution {
        sigma,
        beta,
        epsilon,
        e_squared,
        m1_plus,
        m1_minus,
        m1_radicand,
        m1_closure: (sigma * beta - 1.0) / m2 - beta * m2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn cosh_profile_at_origin() {
        let p = AnsatzProfile::cosh(1.0, 0.1, 0.5);
        let v = p.evaluate(0.0).unwrap();
        assert_eq!(v.a, 1.0);
        assert_eq!(v.a1, 0.0);
        assert_eq!(v.a2, 1.0);
        assert_eq!(v.b, 0.1);
        assert_eq!(v.b1, 0.5);
    }

    #[test]
    fn coth_profile_asymptote() {
        let p = AnsatzProfile::coth(1.0, 1.0, 0.0, 0.0);
        let v = p.evaluate(40.0).unwrap();
        assert!((v.a - 1.0).abs() < 1e-15);
        assert!(v.a1.abs() < 1e-30);
    }

    #[test]
    fn coth_profile_rejects_nonpositive_x() {
        let p = AnsatzProfile::coth(1.0, 1.0, 0.0, 0.0);
        assert!(matches!(p.evaluate(0.0), Err(Error::Domain { .. })));
        assert!(matches!(p.evaluate(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn overflow_guard_reports_threshold() {
        let p = AnsatzProfile::cosh(1.0, 0.0, 0.0);
        match p.evaluate(750.0) {
            Err(Error::Overflow { threshold, .. }) => assert_eq!(threshold, HYPERBOLIC_GUARD),
            other => panic!("expected overflow, got {other:?}"),
        }
        let q = AnsatzProfile::coth(1.0, 10.0, 0.0, 0.0);
        assert!(matches!(q.evaluate(71.0), Err(Error::Overflow { .. })));
        assert!(p.evaluate(699.0).is_ok());
    }

    #[test]
    fn sigma_and_matched_beta() {
        let params = ModelParams {
            omega: 3.0,
            alpha: 2.0,
            beta_mode: BetaMode::Matched,
            ..Default::default()
        };
        let sol = derived_constants(&params).unwrap();
        assert!((sol.sigma - 25.0 / 9.0).abs() < 1e-15);
        assert!((sol.beta + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_limit() {
        let params = ModelParams {
            omega: 1.7,
            alpha: 0.0,
            beta_mode: BetaMode::Matched,
            ..Default::default()
        };
        let sol = derived_constants(&params).unwrap();
        assert_eq!(sol.sigma, 1.0);
        assert_eq!(sol.beta, 0.5);
    }

    #[test]
    fn zero_gamma_constants() {
        let params = ModelParams {
            omega: 2.5,
            gamma: 0.0,
            ..Default::default()
        };
        let sol = derived_constants(&params).unwrap();
        assert_eq!(sol.epsilon, 0.0);
        assert_eq!(sol.e_squared, 1.25);
    }

    #[test]
    fn negative_m1_radicand_marks_both_branches_absent() {
        let params = ModelParams {
            omega: 3.0,
            alpha: 2.0,
            beta: -1.0 / 6.0,
            m2: 2.0,
            beta_mode: BetaMode::Literal,
            ..Default::default()
        };
        let sol = derived_constants(&params).unwrap();
        assert!((sol.m1_radicand + 14.0).abs() < 1e-12);
        assert_eq!(sol.m1_plus, None);
        assert_eq!(sol.m1_minus, None);
    }

    #[test]
    fn mass_cancelling_beta() {
        let params = ModelParams {
            m1: 3.0,
            m2: -1.5,
            beta_mode: BetaMode::MassCancelling,
            ..Default::default()
        };
        assert_eq!(params.effective_beta(), 2.0);
        assert_eq!(params.mass_coupling(), 0.0);
    }

    #[test]
    fn validation() {
        assert!(ModelParams::default().validate().is_ok());
        for bad in [
            ModelParams { omega: 0.0, ..Default::default() },
            ModelParams { m2: 0.0, ..Default::default() },
            ModelParams { delta: 0.0, ..Default::default() },
            ModelParams { c: -1.0, ..Default::default() },
            ModelParams { gamma: f64::NAN, ..Default::default() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidParameter(_))));
        }
        assert!(derived_constants(&ModelParams { m2: 0.0, ..Default::default() }).is_err());
    }

    #[test]
    fn beta_mode_parse() {
        assert_eq!("matched".parse::<BetaMode>().unwrap(), BetaMode::Matched);
        assert!("eq32".parse::<BetaMode>().is_err());
    }

    fn fd_check(p: &AnsatzProfile, x: f64) {
        let h = 1e-4;
        let v = p.evaluate(x).unwrap();
        let vp = p.evaluate(x + h).unwrap();
        let vm = p.evaluate(x - h).unwrap();
        let d1 = (vp.a - vm.a) / (2.0 * h);
        let d2 = (vp.a1 - vm.a1) / (2.0 * h);
        let d3 = (vp.a2 - vm.a2) / (2.0 * h);
        assert!(close(v.a1, d1, 1e-6), "A1 {x}: {} vs {d1}", v.a1);
        assert!(close(v.a2, d2, 1e-6), "A2 {x}: {} vs {d2}", v.a2);
        assert!(close(v.a3, d3, 1e-6), "A3 {x}: {} vs {d3}", v.a3);
    }

    proptest! {
        #[test]
        fn cosh_derivatives_match_central_differences(x in -3.0f64..3.0) {
            fd_check(&AnsatzProfile::cosh(2.0, 0.3, -0.4), x);
        }

        #[test]
        fn coth_derivatives_match_central_differences(x in 0.2f64..4.0, c in 0.5f64..2.0) {
            fd_check(&AnsatzProfile::coth(1.5, c, 0.3, -0.4), x);
        }

        #[test]
        fn b_is_the_ansatz_combination(x in 0.05f64..5.0, g in -2.0f64..2.0, b in -2.0f64..2.0) {
            for p in [AnsatzProfile::cosh(0.7, g, b), AnsatzProfile::coth(0.7, 1.3, g, b)] {
                let v = p.evaluate(x).unwrap();
                prop_assert_eq!(v.b, g * v.a + b * v.a1);
                prop_assert_eq!(v.b1, g * v.a1 + b * v.a2);
            }
        }

        #[test]
        fn sigma_is_at_least_one(omega in 0.01f64..50.0, alpha in -20.0f64..20.0) {
            let s = sigma(omega, alpha);
            prop_assert!(s >= 1.0);
            if alpha.abs() > 1e-3 {
                prop_assert!(s > 1.0);
            }
        }

        #[test]
        fn closure_m1_satisfies_mass_relation(
            omega in 0.5f64..10.0, alpha in -5.0f64..5.0,
            beta in -5.0f64..5.0, m2 in 0.2f64..6.0,
        ) {
            let params = ModelParams { omega, alpha, beta, m2, ..Default::default() }.with_closure_m1();
            let sol = derived_constants(&params).unwrap();
            let lhs = m2 * (params.m1 + sol.beta * m2);
            let rhs = sol.sigma * sol.beta - 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs() + (sol.beta * m2 * m2).abs()));
        }

        #[test]
        fn m1_branches_solve_their_quadratic(
            omega in 0.5f64..10.0, alpha in -5.0f64..1.0,
            beta in -5.0f64..5.0, m2 in 0.2f64..6.0,
        ) {
            let params = ModelParams { omega, alpha, beta, m2, ..Default::default() };
            let sol = derived_constants(&params).unwrap();
            // The two printed roots solve m1² + βm2 m1 + α/ω - 1/4 = 0.
            for m1 in [sol.m1_plus, sol.m1_minus].into_iter().flatten() {
                let q = m1 * m1 + beta * m2 * m1 + alpha / omega - 0.25;
                let scale = 1.0 + m1 * m1 + (beta * m2 * m1).abs();
                prop_assert!(q.abs() <= 1e-12 * scale);
            }
            prop_assert_eq!(sol.m1_plus.is_some(), sol.m1_radicand >= 0.0);
        }
    }
}
