//! Position-dependent-mass Dirac equation in 1+1 dimensions: mass and vector
//! potential built from the ansatz profile, the imaginary part of the
//! potential that keeps the effective potential real, the effective
//! potential itself and the spinor components.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, Smooth};
use crate::model::{AnsatzProfile, ModelParams};
use crate::numerics::{self, Grid};

/// `M(x) = m1 A'/A + m2 B/A`, which under `B = γA + βA'` is
/// `m2 γ + (m1 + β m2) A'/A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzMass {
    pub profile: AnsatzProfile,
    pub m1: f64,
    pub m2: f64,
}

impl AnsatzMass {
    /// `m1 + β m2`
    pub fn coupling(&self) -> f64 {
        self.m1 + self.profile.beta * self.m2
    }
}

impl Smooth for AnsatzMass {
    fn jet(&self, x: f64) -> Result<Jet> {
        let p = self.profile.evaluate(x)?;
        let l = p.a1 / p.a;
        let a2 = p.a2 / p.a;
        let l1 = a2 - l * l;
        let l2 = p.a3 / p.a - l * a2 - 2.0 * l * l1;
        let k = self.coupling();
        Ok(Jet::new(
            self.m2 * self.profile.gamma + k * l,
            k * l1,
            k * l2,
        ))
    }
}

/// `V_R(x) = E - E/A(x)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzVectorReal {
    pub profile: AnsatzProfile,
    pub energy: f64,
}

impl Smooth for AnsatzVectorReal {
    fn jet(&self, x: f64) -> Result<Jet> {
        let p = self.profile.evaluate(x)?;
        let e = self.energy;
        let a = p.a;
        Ok(Jet::new(
            e - e / a,
            e * p.a1 / (a * a),
            e * (p.a2 / (a * a) - 2.0 * p.a1 * p.a1 / (a * a * a)),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracProfiles {
    pub mass: AnsatzMass,
    pub v_r: AnsatzVectorReal,
}

impl DiracProfiles {
    pub fn energy(&self) -> f64 {
        self.v_r.energy
    }

    /// The complete potential `V_R + i V_I` with the cancelling `V_I`.
    pub fn potential(&self) -> DiracPotential<AnsatzMass, AnsatzVectorReal> {
        complete_potential(self.mass, self.v_r, self.v_r.energy)
    }

    pub fn effective_potential(&self, x: f64, form: EffectiveForm) -> Result<f64> {
        match form {
            EffectiveForm::General => {
                effective_potential_general(&self.mass, &self.v_r, self.v_r.energy, x)
            }
            EffectiveForm::Ansatz => effective_potential_ansatz(
                &self.mass.profile,
                self.mass.m1,
                self.mass.m2,
                self.v_r.energy,
                x,
            ),
        }
    }
}

/// Mass and real vector potential for `profile`, with `m1`, `m2` from
/// `params` and the reference energy `energy`.
pub fn dirac_profiles(
    params: &ModelParams,
    profile: &AnsatzProfile,
    energy: f64,
) -> Result<DiracProfiles> {
    if params.m2 == 0.0 {
        return Err(Error::InvalidParameter("m2 must be nonzero".into()));
    }
    if !energy.is_finite() {
        return Err(Error::InvalidParameter(format!("energy must be finite (got {energy})")));
    }
    Ok(DiracProfiles {
        mass: AnsatzMass {
            profile: *profile,
            m1: params.m1,
            m2: params.m2,
        },
        v_r: AnsatzVectorReal {
            profile: *profile,
            energy,
        },
    })
}

/// `V = V_R + i V_I` with `V_I = M'/2M + V_R'/2(E - V_R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracPotential<M, V> {
    pub mass: M,
    pub v_r: V,
    pub energy: f64,
}

pub fn complete_potential<M: Smooth, V: Smooth>(mass: M, v_r: V, energy: f64) -> DiracPotential<M, V> {
    DiracPotential { mass, v_r, energy }
}

/// Pieces shared by the evaluators at one point.
struct Local {
    m: Jet,
    v: Jet,
    /// `E - V_R`
    gap: f64,
}

fn gap_checked(energy: f64, v_r: f64, x: f64) -> Result<f64> {
    let gap = energy - v_r;
    if gap.abs() <= 1e-13 * (energy.abs() + v_r.abs()) {
        return Err(Error::Pole { x });
    }
    Ok(gap)
}

impl<M: Smooth, V: Smooth> DiracPotential<M, V> {
    fn local(&self, x: f64) -> Result<Local> {
        let m = self.mass.jet(x)?;
        if m.value == 0.0 {
            return Err(Error::Singular { what: "M(x)", x });
        }
        let v = self.v_r.jet(x)?;
        let gap = gap_checked(self.energy, v.value, x)?;
        Ok(Local { m, v, gap })
    }

    pub fn v_i(&self, x: f64) -> Result<f64> {
        let Local { m, v, gap } = self.local(x)?;
        Ok(m.d1 / (2.0 * m.value) + v.d1 / (2.0 * gap))
    }

    /// `V_I'`
    pub fn v_i_derivative(&self, x: f64) -> Result<f64> {
        let Local { m, v, gap } = self.local(x)?;
        Ok((m.d2 * m.value - m.d1 * m.d1) / (2.0 * m.value * m.value)
            + (v.d2 * gap + v.d1 * v.d1) / (2.0 * gap * gap))
    }

    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.v_r.value(x)?, self.v_i(x)?))
    }

    /// Imaginary part of the effective potential,
    /// `-2 V_I V_R + 2E V_I - V_R' + (M'/M) V_R - E M'/M`, together with the
    /// sum of the magnitudes of its terms.
    pub fn imaginary_bracket(&self, x: f64) -> Result<(f64, f64)> {
        let Local { m, v, .. } = self.local(x)?;
        let vi = self.v_i(x)?;
        let e = self.energy;
        let lm = m.d1 / m.value;
        let terms = [
            -2.0 * vi * v.value,
            2.0 * e * vi,
            -v.d1,
            lm * v.value,
            -e * lm,
        ];
        Ok((terms.iter().sum(), terms.iter().map(|t| t.abs()).sum()))
    }

    /// Real part of the effective potential before the `V_I` substitution is
    /// simplified:
    /// `-V_R² + V_I² + M² + 2E V_R - M''/2M + (3/4)(M'/M)² + V_I' - (M'/M) V_I`.
    pub fn real_part(&self, x: f64) -> Result<f64> {
        let Local { m, v, .. } = self.local(x)?;
        let vi = self.v_i(x)?;
        let vi1 = self.v_i_derivative(x)?;
        let lm = m.d1 / m.value;
        Ok(-v.value * v.value + vi * vi + m.value * m.value + 2.0 * self.energy * v.value
            - m.d2 / (2.0 * m.value)
            + 0.75 * lm * lm
            + vi1
            - lm * vi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EffectiveForm {
    /// In terms of arbitrary `M` and `V_R`.
    #[default]
    General,
    /// Specialized to the mass and vector ansatz.
    Ansatz,
}

/// `-V_R² + M² + 2E V_R + 3V_R'²/4(E - V_R)² + V_R''/2(E - V_R)`
pub fn effective_potential_general<M: Smooth, V: Smooth>(
    mass: &M,
    v_r: &V,
    energy: f64,
    x: f64,
) -> Result<f64> {
    let m = mass.value(x)?;
    let v = v_r.jet(x)?;
    let gap = gap_checked(energy, v.value, x)?;
    Ok(-v.value * v.value
        + m * m
        + 2.0 * energy * v.value
        + 3.0 * v.d1 * v.d1 / (4.0 * gap * gap)
        + v.d2 / (2.0 * gap))
}

/// `E² - E²/A² + m2²γ² + 2γm2 k A'/A + (k² - 1/4)(A'/A)² + A''/2A` with
/// `k = m1 + β m2`.
pub fn effective_potential_ansatz(
    profile: &AnsatzProfile,
    m1: f64,
    m2: f64,
    energy: f64,
    x: f64,
) -> Result<f64> {
    let p = profile.evaluate(x)?;
    let e2 = energy * energy;
    let k = m1 + profile.beta * m2;
    let l = p.a1 / p.a;
    let g = profile.gamma;
    Ok(e2 - e2 / (p.a * p.a)
        + m2 * m2 * g * g
        + 2.0 * g * m2 * k * l
        + (k * k - 0.25) * l * l
        + p.a2 / (2.0 * p.a))
}

/// Upper and lower spinor components on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorPair {
    pub phi: Vec<Complex64>,
    pub theta: Vec<Complex64>,
    /// `‖-iθ' + (E - V)θ - Mφ‖₂ / ‖Mφ‖₂`, with `θ'` from fourth-order
    /// differences.
    pub residual: f64,
}

/// Builds `φ = √M ϕ` and `θ = (iφ' + (E - V)φ)/M` from samples of the
/// Schrödinger-like solution `ϕ` and its derivative on the interior nodes,
/// and reports how well the remaining first-order equation is satisfied.
pub fn spinor_components<M: Smooth, V: Smooth>(
    varphi: &[f64],
    dvarphi: &[f64],
    grid: &Grid,
    potential: &DiracPotential<M, V>,
) -> Result<SpinorPair> {
    let n = grid.n_points;
    if varphi.len() != n || dvarphi.len() != n {
        return Err(Error::InvalidParameter(format!(
            "expected {n} samples of the state and its derivative"
        )));
    }
    let e = potential.energy;
    let mut phi = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    let mut masses = Vec::with_capacity(n);
    let mut gaps = Vec::with_capacity(n);
    for (i, x) in grid.points().into_iter().enumerate() {
        let m = potential.mass.jet(x)?;
        if !(m.value > 0.0) {
            return Err(Error::NonPositiveMass { x, value: m.value });
        }
        let root = m.value.sqrt();
        let p = Complex64::new(root * varphi[i], 0.0);
        let dp = Complex64::new(root * dvarphi[i] + m.d1 / (2.0 * root) * varphi[i], 0.0);
        let gap = Complex64::new(e, 0.0) - potential.value(x)?;
        theta.push((Complex64::i() * dp + gap * p) / m.value);
        phi.push(p);
        masses.push(m.value);
        gaps.push(gap);
    }

    let h = grid.step();
    let re: Vec<f64> = theta.iter().map(|t| t.re).collect();
    let im: Vec<f64> = theta.iter().map(|t| t.im).collect();
    let (dre, dim) = (numerics::derivative(&re, h), numerics::derivative(&im, h));
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let dtheta = Complex64::new(dre[i], dim[i]);
        let mphi = masses[i] * phi[i];
        let r = -Complex64::i() * dtheta + gaps[i] * theta[i] - mphi;
        num += r.norm_sqr();
        den += mphi.norm_sqr();
    }
    Ok(SpinorPair {
        phi,
        theta,
        residual: (num / den).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{Constant, FnSmooth};
    use crate::model::{derived_constants, BetaMode};
    use crate::susy::Rm2Coeffs;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / (1.0 + a.abs().max(b.abs()))
    }

    fn example_one() -> (ModelParams, DiracProfiles) {
        let params = ModelParams {
            beta_mode: BetaMode::Matched,
            ..Default::default()
        }
        .with_closure_m1();
        let sol = derived_constants(&params).unwrap();
        let profile = params.profile(crate::model::ProfileFamily::Cosh);
        let profiles = dirac_profiles(&params, &profile, sol.energy().unwrap()).unwrap();
        (params, profiles)
    }

    #[test]
    fn cosh_mass_reduces_to_tanh_form() {
        let (params, profiles) = example_one();
        let sigma = params.sigma();
        let beta = params.effective_beta();
        for x in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            let expected = params.m2 * params.gamma + (sigma * beta - 1.0) / params.m2 * f64::tanh(x);
            assert!(rel(profiles.mass.value(x).unwrap(), expected) < 1e-14);
        }
        assert_eq!(profiles.mass.value(0.0).unwrap(), params.m2 * params.gamma);
    }

    #[test]
    fn vector_potential_at_origin() {
        let params = ModelParams::default();
        for delta in [1.0, 2.5] {
            let profile = crate::model::AnsatzProfile::cosh(delta, 0.1, 0.5);
            let p = dirac_profiles(&params, &profile, 1.3).unwrap();
            assert!((p.v_r.value(0.0).unwrap() - 1.3 * (1.0 - 1.0 / delta)).abs() < 1e-15);
        }
    }

    #[test]
    fn mass_cancelling_beta_gives_constant_coth_mass() {
        let params = ModelParams {
            m1: 0.8,
            m2: 2.0,
            gamma: 0.3,
            c: 1.7,
            beta_mode: BetaMode::MassCancelling,
            ..Default::default()
        };
        let profile = params.profile(crate::model::ProfileFamily::Coth);
        let p = dirac_profiles(&params, &profile, 1.0).unwrap();
        for x in [0.05, 0.5, 3.0] {
            let m = p.mass.jet(x).unwrap();
            assert!((m.value - 0.6).abs() < 1e-15);
            assert_eq!(m.d1, 0.0);
        }
    }

    #[test]
    fn mass_derivatives_match_differences() {
        let h = 1e-3;
        let five_point = |f: &dyn Fn(f64) -> f64, x: f64| {
            (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
        };
        for profile in [
            crate::model::AnsatzProfile::cosh(1.3, 0.4, -0.7),
            crate::model::AnsatzProfile::coth(0.8, 1.4, 0.4, -0.7),
        ] {
            let mass = AnsatzMass { profile, m1: 0.9, m2: 1.7 };
            let v = AnsatzVectorReal { profile, energy: 1.1 };
            for x in [0.3, 0.9, 2.1] {
                for f in [&mass as &dyn Smooth, &v as &dyn Smooth] {
                    let j = f.jet(x).unwrap();
                    let d1 = five_point(&|y| f.jet(y).unwrap().value, x);
                    let d2 = five_point(&|y| f.jet(y).unwrap().d1, x);
                    assert!(rel(j.d1, d1) < 1e-7, "{x}: {} vs {d1}", j.d1);
                    assert!(rel(j.d2, d2) < 1e-7, "{x}: {} vs {d2}", j.d2);
                }
            }
        }
    }

    #[test]
    fn constant_mass_and_vector_give_no_imaginary_part() {
        let pot = complete_potential(Constant(2.0), Constant(0.4), 1.5);
        for x in [-3.0, 0.0, 2.0] {
            assert_eq!(pot.v_i(x).unwrap(), 0.0);
            let veff = effective_potential_general(&Constant(2.0), &Constant(0.4), 1.5, x).unwrap();
            assert_eq!(veff, -0.16 + 4.0 + 2.0 * 1.5 * 0.4);
        }
    }

    #[test]
    fn coth_imaginary_part_with_constant_mass() {
        let params = ModelParams {
            m1: 0.5,
            m2: 1.5,
            c: 2.0,
            delta: 0.7,
            beta_mode: BetaMode::MassCancelling,
            ..Default::default()
        };
        let profile = params.profile(crate::model::ProfileFamily::Coth);
        let pot = dirac_profiles(&params, &profile, 1.2).unwrap().potential();
        for x in [0.01, 0.3, 1.0, 4.0] {
            let t = params.c * x;
            let expected = -(params.c / 2.0) / (t.sinh() * t.cosh());
            assert!(rel(pot.v_i(x).unwrap(), expected) < 1e-13);
            let vr = pot.v_r.value(x).unwrap();
            assert!(rel(vr, 1.2 - 1.2 / params.delta * t.tanh()) < 1e-14);
        }
    }

    #[test]
    fn pole_is_reported() {
        let pot = complete_potential(Constant(1.0), Constant(2.0), 2.0);
        assert_eq!(pot.v_i(0.5), Err(Error::Pole { x: 0.5 }));
        assert!(matches!(
            effective_potential_general(&Constant(1.0), &Constant(2.0), 2.0, 0.5),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn cosh_ansatz_matches_rosen_morse_form() {
        let (params, profiles) = example_one();
        let coeffs = Rm2Coeffs::from_params(&params).unwrap();
        for x in [-4.0, -1.0, 0.0, 0.5, 2.5, 6.0] {
            let veff = profiles.effective_potential(x, EffectiveForm::Ansatz).unwrap();
            let sech = 1.0 / f64::cosh(x);
            let rm = coeffs.v0 - coeffs.v1 * sech * sech + coeffs.v2 * f64::tanh(x);
            assert!(rel(veff, rm) < 1e-10, "x={x}: {veff} vs {rm}");
        }
    }

    #[test]
    fn real_part_with_cancelling_v_i_is_the_general_form() {
        let (_, profiles) = example_one();
        let pot = profiles.potential();
        for x in [-2.0, -0.4, 0.3, 1.9] {
            let a = pot.real_part(x).unwrap();
            let b = profiles.effective_potential(x, EffectiveForm::General).unwrap();
            assert!(rel(a, b) < 1e-12);
        }
    }

    #[test]
    fn bracket_cancels_for_random_smooth_profiles() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let (m0, m1, w) = (rng.gen_range(1.0..3.0), rng.gen_range(-0.5..0.5), rng.gen_range(0.2..2.0));
            let (v0, v1, e) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(3.0..5.0));
            let mass = FnSmooth(move |x: f64| {
                Jet::new(m0 + m1 * (w * x).sin(), m1 * w * (w * x).cos(), -m1 * w * w * (w * x).sin())
            });
            let v_r = FnSmooth(move |x: f64| {
                let g = (-x * x).exp();
                Jet::new(v0 + v1 * g, -2.0 * x * v1 * g, v1 * (4.0 * x * x - 2.0) * g)
            });
            let pot = complete_potential(&mass, &v_r, e);
            for _ in 0..50 {
                let x = rng.gen_range(-4.0..4.0);
                let (bracket, scale) = pot.imaginary_bracket(x).unwrap();
                assert!(bracket.abs() <= 1e-12 * (1.0 + scale));
                let a = pot.real_part(x).unwrap();
                let b = effective_potential_general(&mass, &v_r, e, x).unwrap();
                assert!(rel(a, b) < 1e-12);
            }
        }
    }

    /// Self-consistent Rosen-Morse ground state: `E` in `V_R` equals the
    /// eigenvalue of the effective problem it generates (`δ = 1`).
    fn self_consistent_ground_state() -> (DiracProfiles, f64, f64) {
        let (mg, k) = (2.0f64, 0.5f64);
        let a = mg * mg * k * k;
        let b = mg * mg + k * k + 0.25;
        let u = 0.5 * (b + (b * b - 4.0 * a).sqrt());
        let c2 = u.sqrt();
        let c1 = mg * k / c2;
        let e = (u + c2 - k * k + 0.25).sqrt();
        let params = ModelParams { gamma: 1.0, m2: 2.0, m1: 0.5, beta: 0.0, ..Default::default() };
        let profile = crate::model::AnsatzProfile::cosh(1.0, 1.0, 0.0);
        (dirac_profiles(&params, &profile, e).unwrap(), c1, c2)
    }

    fn ground_state_residual(n: usize) -> (f64, SpinorPair) {
        let (profiles, c1, c2) = self_consistent_ground_state();
        let grid = Grid::new(-15.0, 15.0, n).unwrap();
        let xs = grid.points();
        let phi: Vec<f64> = xs.iter().map(|&x| (-c1 * x - c2 * x.cosh().ln()).exp()).collect();
        let dphi: Vec<f64> = xs
            .iter()
            .zip(&phi)
            .map(|(&x, p)| (-c1 - c2 * x.tanh()) * p)
            .collect();
        if n >= 6000 {
            // the closed form really is an eigenstate of the effective problem
            let e2 = profiles.energy().powi(2);
            let r = numerics::ode_residual(
                |x| profiles.effective_potential(x, EffectiveForm::General).unwrap(),
                e2,
                &phi,
                &grid,
            );
            assert!(r < 1e-6, "ode residual {r}");
        }
        let pair = spinor_components(&phi, &dphi, &grid, &profiles.potential()).unwrap();
        (pair.residual, pair)
    }

    #[test]
    fn spinor_residual_is_small_and_fourth_order() {
        let fine = ground_state_residual(6000).0;
        assert!(fine < 1e-5, "residual {fine}");
        let coarse = ground_state_residual(599).0;
        let finer = ground_state_residual(1199).0;
        let ratio = coarse / finer;
        assert!((10.0..22.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn constant_mass_spinor_is_proportional() {
        let grid = Grid::new(-5.0, 5.0, 201).unwrap();
        let xs = grid.points();
        let phi: Vec<f64> = xs.iter().map(|x| (-x * x).exp()).collect();
        let dphi: Vec<f64> = xs.iter().zip(&phi).map(|(x, p)| -2.0 * x * p).collect();
        let pot = complete_potential(Constant(4.0), Constant(0.0), 1.0);
        let pair = spinor_components(&phi, &dphi, &grid, &pot).unwrap();
        for (p, v) in pair.phi.iter().zip(&phi) {
            assert!((p.re - 2.0 * v).abs() < 1e-15 && p.im == 0.0);
        }
    }

    #[test]
    fn nonpositive_mass_is_rejected() {
        let grid = Grid::new(-1.0, 1.0, 31).unwrap();
        let pot = complete_potential(
            FnSmooth(|x: f64| Jet::new(x, 1.0, 0.0)),
            Constant(0.0),
            1.0,
        );
        let s = vec![1.0; 31];
        assert!(matches!(
            spinor_components(&s, &s, &grid, &pot),
            Err(Error::NonPositiveMass { .. })
        ));
    }

    proptest! {
        #[test]
        fn effective_forms_agree(
            x in 0.05f64..6.0, sign in prop::bool::ANY,
            gamma in -1.0f64..1.0, beta in -2.0f64..2.0,
            m1 in -2.0f64..2.0, m2 in 0.3f64..3.0, e in 0.2f64..4.0,
            delta in 0.5f64..2.0, c in 0.3f64..2.0,
        ) {
            let params = ModelParams { m1, m2, ..Default::default() };
            let x = if sign { x } else { -x };
            let cosh = crate::model::AnsatzProfile::cosh(delta, gamma, beta);
            let coth = crate::model::AnsatzProfile::coth(delta, c, gamma, beta);
            for (profile, x) in [(cosh, x), (coth, x.abs())] {
                let p = dirac_profiles(&params, &profile, e).unwrap();
                let general = p.effective_potential(x, EffectiveForm::General).unwrap();
                let ansatz = p.effective_potential(x, EffectiveForm::Ansatz).unwrap();
                prop_assert!(rel(general, ansatz) < 1e-10, "{} vs {}", general, ansatz);
            }
        }
    }
}
