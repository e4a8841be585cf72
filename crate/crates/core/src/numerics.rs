//! Finite-difference oracle for `-ϕ'' + V(x)ϕ = Ēϕ` with Dirichlet
//! boundaries: symmetric tridiagonal discretization, Sturm-sequence
//! bisection, inverse iteration, quadrature and node counting.

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform grid of `n_points` interior nodes strictly between `x_min` and
/// `x_max`; the two end nodes carry the Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

pub const MIN_GRID_POINTS: usize = 16;
pub const DEFAULT_GRID_POINTS: usize = 6000;

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParameter(format!(
                "grid needs finite x_min < x_max (got [{x_min}, {x_max}])"
            )));
        }
        if n_points < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_GRID_POINTS} interior points (got {n_points})"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// `[-15, 15]` with the default resolution.
    pub fn whole_line_default() -> Self {
        Self {
            x_min: -15.0,
            x_max: 15.0,
            n_points: DEFAULT_GRID_POINTS,
        }
    }

    /// `(10⁻³/c, 20/c]` with the default resolution.
    pub fn half_line_default(c: f64) -> Self {
        Self {
            x_min: 1e-3 / c,
            x_max: 20.0 / c,
            n_points: DEFAULT_GRID_POINTS,
        }
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    /// Interior node `i` (`0 <= i < n_points`).
    pub fn point(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn with_points(self, n_points: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, n_points)
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be n - 1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence of
    /// the `LDLᵀ` pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let guard = f64::EPSILON * self.norm_bound().max(f64::MIN_POSITIVE);
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i > 0 {
                self.off[i - 1] * self.off[i - 1] / q
            } else {
                0.0
            };
            q = self.diag[i] - lambda - coupling;
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm_bound() + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        let floor = 2.0 * f64::EPSILON * self.norm_bound();
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= floor.max(2.0 * f64::EPSILON * mid.abs()) {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn lowest(&self, k: usize) -> Vec<f64> {
        (0..k).map(|j| self.eigenvalue(j)).collect()
    }

    /// Solves `(T - shift I) x = rhs` by Gaussian elimination with partial
    /// pivoting; exactly singular pivots are nudged to `ε‖T‖`.
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.norm_bound().max(1.0);
        let nudge = |p: f64| if p == 0.0 { tiny } else { p };
        let mut upper = vec![[0.0f64; 3]; n];
        let mut y = vec![0.0; n];
        let mut cur = [
            self.diag[0] - shift,
            if n > 1 { self.off[0] } else { 0.0 },
            0.0,
        ];
        let mut rcur = rhs[0];
        for i in 0..n.saturating_sub(1) {
            let mut next = [
                self.off[i],
                self.diag[i + 1] - shift,
                if i + 2 < n { self.off[i + 1] } else { 0.0 },
            ];
            let mut rnext = rhs[i + 1];
            if next[0].abs() > cur[0].abs() {
                std::mem::swap(&mut cur, &mut next);
                std::mem::swap(&mut rcur, &mut rnext);
            }
            cur[0] = nudge(cur[0]);
            let f = next[0] / cur[0];
            upper[i] = cur;
            y[i] = rcur;
            cur = [next[1] - f * cur[1], next[2] - f * cur[2], 0.0];
            rcur = rnext - f * rcur;
        }
        cur[0] = nudge(cur[0]);
        upper[n - 1] = cur;
        y[n - 1] = rcur;

        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= upper[i][1] * x[i + 1];
            }
            if i + 2 < n {
                s -= upper[i][2] * x[i + 2];
            }
            x[i] = s / upper[i][0];
        }
        x
    }

    /// Eigenvector for an (already accurate) eigenvalue by inverse iteration.
    pub fn inverse_iteration(&self, lambda: f64, index: usize) -> Result<Vec<f64>> {
        const MAX_ITERATIONS: usize = 8;
        let n = self.len();
        let tol = 64.0 * f64::EPSILON * self.norm_bound().max(1.0);
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract())
            .collect();
        normalize_euclidean(&mut v);
        let mut residual = f64::INFINITY;
        for iteration in 1..=MAX_ITERATIONS {
            v = self.solve_shifted(lambda, &v);
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::NonConvergence {
                    index,
                    iterations: iteration,
                    residual,
                });
            }
            normalize_euclidean(&mut v);
            let tv = self.mul(&v);
            residual = tv
                .iter()
                .zip(&v)
                .map(|(t, x)| (t - lambda * x).powi(2))
                .sum::<f64>()
                .sqrt();
            if iteration >= 2 && residual <= tol {
                return Ok(v);
            }
        }
        Err(Error::NonConvergence {
            index,
            iterations: MAX_ITERATIONS,
            residual,
        })
    }
}

fn normalize_euclidean(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Lowest eigenpairs of the discretized problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// Interior samples, unit norm under [`quadrature_norm`], positive at the
    /// first significant sample.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// `‖Tv - λv‖ / ‖v‖` for each returned vector.
    pub matrix_residuals: Option<Vec<f64>>,
    pub grid: Grid,
}

/// Builds `T = tridiag(-1/h², 2/h² + V_i, -1/h²)` on the interior nodes.
pub fn discretize<V: Fn(f64) -> f64>(potential: V, grid: &Grid) -> Result<SymTridiagonal> {
    let h = grid.step();
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(grid.n_points);
    for x in grid.points() {
        let v = potential(x);
        if !v.is_finite() {
            return Err(Error::NonFinitePotential { x });
        }
        diag.push(2.0 * inv_h2 + v);
    }
    let off = vec![-inv_h2; grid.n_points - 1];
    Ok(SymTridiagonal::new(diag, off))
}

pub fn discretize_and_solve<V: Fn(f64) -> f64>(
    potential: V,
    grid: &Grid,
    k: usize,
    with_vectors: bool,
) -> Result<EigenResult> {
    if k > grid.n_points {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenvalues from {} grid points",
            grid.n_points
        )));
    }
    let matrix = discretize(potential, grid)?;
    let eigenvalues = matrix.lowest(k);
    let (eigenvectors, matrix_residuals) = if with_vectors {
        let mut vectors = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        for (index, &lambda) in eigenvalues.iter().enumerate() {
            let mut v = matrix.inverse_iteration(lambda, index)?;
            let tv = matrix.mul(&v);
            residuals.push(
                tv.iter()
                    .zip(&v)
                    .map(|(t, x)| (t - lambda * x).powi(2))
                    .sum::<f64>()
                    .sqrt(),
            );
            let norm = quadrature_norm(&v, grid)?.value;
            let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let sign = v
                .iter()
                .find(|x| x.abs() > 1e-3 * max)
                .map_or(1.0, |x| x.signum());
            v.iter_mut().for_each(|x| *x *= sign / norm);
            vectors.push(v);
        }
        (Some(vectors), Some(residuals))
    } else {
        (None, None)
    };
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        matrix_residuals,
        grid: *grid,
    })
}

/// Fourth-order central second difference at interior index `i`
/// (`2 <= i < len - 2`).
fn second_difference(samples: &[f64], i: usize, h: f64) -> f64 {
    (-samples[i + 2] + 16.0 * samples[i + 1] - 30.0 * samples[i] + 16.0 * samples[i - 1]
        - samples[i - 2])
        / (12.0 * h * h)
}

/// Fourth-order first derivative: central in the bulk, one-sided five-point
/// stencils on the two outermost samples at each end.
pub fn derivative(samples: &[f64], h: f64) -> Vec<f64> {
    let n = samples.len();
    assert!(n >= 5, "need at least five samples");
    let f = samples;
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    let m = n - 1;
    d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4])
        / (12.0 * h);
    d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4])
        / (12.0 * h);
    d
}

/// `‖-D₄ϕ + Vϕ - Ēϕ‖₂ / ‖ϕ‖₂` over the samples where the central stencil fits.
pub fn ode_residual<V: Fn(f64) -> f64>(potential: V, e_bar: f64, samples: &[f64], grid: &Grid) -> f64 {
    assert_eq!(samples.len(), grid.n_points, "samples must match the interior grid");
    let h = grid.step();
    let n = samples.len();
    let mut num = 0.0;
    for i in 2..n.saturating_sub(2) {
        let x = grid.point(i);
        let r = -second_difference(samples, i, h) + (potential(x) - e_bar) * samples[i];
        num += r * r;
    }
    let den: f64 = samples.iter().map(|v| v * v).sum();
    (num / den).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    Simpson,
    /// Even node count; Simpson does not apply.
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub rule: QuadratureRule,
}

fn closed_nodes<'a>(samples: &'a [f64], grid: &Grid) -> Result<std::borrow::Cow<'a, [f64]>> {
    if samples.len() == grid.n_points + 2 {
        Ok(samples.into())
    } else if samples.len() == grid.n_points {
        let mut padded = Vec::with_capacity(samples.len() + 2);
        padded.push(0.0);
        padded.extend_from_slice(samples);
        padded.push(0.0);
        Ok(padded.into())
    } else {
        Err(Error::InvalidParameter(format!(
            "{} samples do not match a grid of {} interior points",
            samples.len(),
            grid.n_points
        )))
    }
}

fn integrate(values: &[f64], h: f64) -> Quadrature {
    let n = values.len();
    if n % 2 == 1 && n >= 3 {
        let mut s = values[0] + values[n - 1];
        for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * v;
        }
        Quadrature {
            value: s * h / 3.0,
            rule: QuadratureRule::Simpson,
        }
    } else {
        let inner: f64 = values[1..n - 1].iter().sum();
        Quadrature {
            value: h * (inner + 0.5 * (values[0] + values[n - 1])),
            rule: QuadratureRule::Trapezoid,
        }
    }
}

/// L2 norm on the grid. Accepts either interior samples (boundary values
/// taken as zero) or samples on all `n_points + 2` nodes.
pub fn quadrature_norm(samples: &[f64], grid: &Grid) -> Result<Quadrature> {
    let nodes = closed_nodes(samples, grid)?;
    let squares: Vec<f64> = nodes.iter().map(|v| v * v).collect();
    let q = integrate(&squares, grid.step());
    Ok(Quadrature {
        value: q.value.sqrt(),
        rule: q.rule,
    })
}

/// `∫ a b dx` with the same rule as [`quadrature_norm`].
pub fn inner_product(a: &[f64], b: &[f64], grid: &Grid) -> Result<f64> {
    let (a, b) = (closed_nodes(a, grid)?, closed_nodes(b, grid)?);
    let products: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x * y).collect();
    Ok(integrate(&products, grid.step()).value)
}

/// Strict sign changes, skipping samples below `1e-12 · max|samples|`.
pub fn count_nodes(samples: &[f64]) -> usize {
    let max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return 0;
    }
    let floor = 1e-12 * max;
    let mut last_sign = 0.0;
    let mut nodes = 0;
    for &v in samples {
        if v.abs() < floor {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            nodes += 1;
        }
        last_sign = s;
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_invariants() {
        assert!(Grid::new(1.0, 1.0, 100).is_err());
        assert!(Grid::new(0.0, 1.0, 15).is_err());
        let g = Grid::new(0.0, 1.0, 99).unwrap();
        assert!((g.step() - 0.01).abs() < 1e-15);
        assert!((g.point(0) - 0.01).abs() < 1e-15);
        assert!((g.point(98) - 0.99).abs() < 1e-14);
    }

    #[test]
    fn particle_in_a_box() {
        let grid = Grid::new(0.0, PI, 4000).unwrap();
        let res = discretize_and_solve(|_| 0.0, &grid, 3, false).unwrap();
        assert!((res.eigenvalues[0] - 1.0).abs() < 1e-5);
        for (n, ev) in res.eigenvalues.iter().enumerate() {
            let exact = ((n + 1) * (n + 1)) as f64;
            assert!((ev - exact).abs() < 1e-4 * exact);
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let grid = Grid::new(-12.0, 12.0, 4000).unwrap();
        let res = discretize_and_solve(|x| x * x, &grid, 4, false).unwrap();
        assert!((res.eigenvalues[0] - 1.0).abs() < 1e-5);
        for (n, ev) in res.eigenvalues.iter().enumerate() {
            assert!((ev - (2 * n + 1) as f64).abs() < 1e-4);
        }
    }

    fn box_error(n: usize) -> f64 {
        let grid = Grid::new(0.0, PI, n).unwrap();
        let res = discretize_and_solve(|_| 0.0, &grid, 2, false).unwrap();
        (res.eigenvalues[1] - 4.0).abs()
    }

    fn oscillator_error(n: usize) -> f64 {
        let grid = Grid::new(-10.0, 10.0, n).unwrap();
        let res = discretize_and_solve(|x| x * x, &grid, 2, false).unwrap();
        (res.eigenvalues[1] - 3.0).abs()
    }

    #[test]
    fn second_order_convergence() {
        // halving h: n + 1 intervals doubled
        for (coarse, fine) in [(box_error(199), box_error(399)), (oscillator_error(399), oscillator_error(799))] {
            let ratio = coarse / fine;
            assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
        }
    }

    #[test]
    fn eigenvector_residuals_and_parity() {
        let grid = Grid::new(-8.0, 8.0, 1001).unwrap();
        let res = discretize_and_solve(|x| x * x - 2.0 / x.cosh().powi(2), &grid, 4, true).unwrap();
        let vecs = res.eigenvectors.as_ref().unwrap();
        for r in res.matrix_residuals.as_ref().unwrap() {
            assert!(*r < 1e-9, "matrix residual {r}");
        }
        for (n, v) in vecs.iter().enumerate() {
            assert!((quadrature_norm(v, &grid).unwrap().value - 1.0).abs() < 1e-12);
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            let asym = (0..v.len())
                .map(|i| (v[i] - parity * v[v.len() - 1 - i]).abs())
                .fold(0.0, f64::max);
            assert!(asym < 1e-6, "state {n} asymmetry {asym}");
            assert_eq!(count_nodes(v), n);
        }
        for i in 0..vecs.len() {
            for j in 0..i {
                assert!(inner_product(&vecs[i], &vecs[j], &grid).unwrap().abs() < 1e-8);
            }
        }
    }

    #[test]
    fn strictly_ascending_and_sturm_consistent() {
        let grid = Grid::new(-10.0, 10.0, 500).unwrap();
        let m = discretize(|x| 0.5 * x * x, &grid).unwrap();
        let ev = m.lowest(10);
        for w in ev.windows(2) {
            assert!(w[0] < w[1]);
        }
        for (k, e) in ev.iter().enumerate() {
            assert_eq!(m.sturm_count(e - 1e-8), k);
            assert_eq!(m.sturm_count(e + 1e-8), k + 1);
        }
    }

    #[test]
    fn box_independence_for_confining_potential() {
        let v = |x: f64| -6.0 / x.cosh().powi(2);
        let n_per_unit = 100.0;
        let solve = |l: f64| {
            let grid = Grid::new(-l, l, (2.0 * l * n_per_unit) as usize - 1).unwrap();
            discretize_and_solve(v, &grid, 1, false).unwrap().eigenvalues[0]
        };
        assert!((solve(15.0) - solve(20.0)).abs() < 1e-8);
    }

    #[test]
    fn non_finite_potential_reports_location() {
        let grid = Grid::new(-1.0, 1.0, 99).unwrap();
        let err = discretize_and_solve(|x| if x > 0.5 { f64::NAN } else { 0.0 }, &grid, 1, false)
            .unwrap_err();
        match err {
            Error::NonFinitePotential { x } => assert!(x > 0.5 && x < 0.53),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn too_many_eigenvalues_requested() {
        let grid = Grid::new(0.0, 1.0, 20).unwrap();
        assert!(discretize_and_solve(|_| 0.0, &grid, 21, false).is_err());
    }

    #[test]
    fn shifted_solve_matches_multiplication() {
        let m = SymTridiagonal::new(vec![1.0, -2.0, 3.0, 0.5, 4.0], vec![0.3, 7.0, -1.0, 2.0]);
        let x = vec![1.0, 2.0, -1.0, 0.5, 3.0];
        let shift = 0.25;
        let mut b = m.mul(&x);
        b.iter_mut().zip(&x).for_each(|(bi, xi)| *bi -= shift * xi);
        let solved = m.solve_shifted(shift, &b);
        for (s, e) in solved.iter().zip(&x) {
            assert!((s - e).abs() < 1e-12);
        }
    }

    #[test]
    fn ode_residual_of_exact_and_noisy_states() {
        let grid = Grid::new(0.0, PI, 4000).unwrap();
        let s: Vec<f64> = grid.points().iter().map(|x| x.sin()).collect();
        assert!(ode_residual(|_| 0.0, 1.0, &s, &grid) < 1e-8);

        // deterministic pseudo-noise: residual scales like noise / h²
        let noise = |grid: &Grid| -> f64 {
            let s: Vec<f64> = (0..grid.n_points)
                .map(|i| 1e-6 * (((i as f64) * 12.9898).sin() * 43758.5453).fract())
                .collect();
            ode_residual(|_| 0.0, 1.0, &s, grid)
        };
        let coarse = noise(&Grid::new(0.0, PI, 999).unwrap());
        let fine = noise(&Grid::new(0.0, PI, 1999).unwrap());
        assert!(coarse > 1.0);
        assert!((fine / coarse - 4.0).abs() < 1.0, "{}", fine / coarse);
    }

    #[test]
    fn quadrature_norms() {
        let grid = Grid::new(0.0, 1.0, 999).unwrap();
        let ones = vec![1.0; grid.n_points + 2];
        let q = quadrature_norm(&ones, &grid).unwrap();
        assert!((q.value - 1.0).abs() < 1e-14);
        assert_eq!(q.rule, QuadratureRule::Simpson);

        let grid = Grid::new(0.0, PI, 3999).unwrap();
        let s: Vec<f64> = grid.points().iter().map(|x| x.sin()).collect();
        let q = quadrature_norm(&s, &grid).unwrap();
        assert!((q.value - (PI / 2.0).sqrt()).abs() < 1e-10);

        let even = Grid::new(0.0, 1.0, 1000).unwrap();
        assert_eq!(
            quadrature_norm(&vec![1.0; 1002], &even).unwrap().rule,
            QuadratureRule::Trapezoid
        );
        assert!(quadrature_norm(&[1.0; 10], &even).is_err());
    }

    #[test]
    fn gaussian_truncation() {
        // ∫ exp(-x²/σ²) dx = σ√π
        let sigma = 0.8;
        let l = 12.0 * sigma;
        let grid = Grid::new(-l, l, 2399).unwrap();
        let s: Vec<f64> = grid
            .points()
            .iter()
            .map(|x| (-0.5 * x * x / (sigma * sigma)).exp())
            .collect();
        let norm = quadrature_norm(&s, &grid).unwrap().value;
        assert!((norm * norm - sigma * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[1.0, 2.0, 3.0]), 0);
        let grid = Grid::new(0.0, PI, 999).unwrap();
        let s: Vec<f64> = grid.points().iter().map(|x| (3.0 * x).sin()).collect();
        assert_eq!(count_nodes(&s), 2);
        assert_eq!(count_nodes(&[1.0, 1e-20, -1.0]), 1);
        assert_eq!(count_nodes(&[1.0, -1e-20, 1.0]), 0);
        assert_eq!(count_nodes(&[0.0; 4]), 0);
    }

    #[test]
    fn derivative_is_fourth_order() {
        let err = |n: usize| {
            let grid = Grid::new(0.0, 2.0, n).unwrap();
            let s: Vec<f64> = grid.points().iter().map(|x| x.exp()).collect();
            let d = derivative(&s, grid.step());
            d.iter()
                .zip(grid.points())
                .map(|(d, x)| (d - x.exp()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(99) / err(199);
        assert!(ratio > 12.0, "ratio {ratio}");
    }
}
