//! Scalar functions carried together with their first two derivatives.

use crate::error::Result;

/// Value and first two derivatives of a smooth function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.value, k * self.d1, k * self.d2)
    }

    /// Product rule up to second order.
    pub fn mul(self, other: Jet) -> Self {
        Self::new(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        )
    }
}

/// A real function of `x` that can report exact derivatives.
pub trait Smooth: Sync {
    fn jet(&self, x: f64) -> Result<Jet>;

    fn value(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|j| j.value)
    }
}

impl<T: Smooth + ?Sized> Smooth for &T {
    fn jet(&self, x: f64) -> Result<Jet> {
        (**self).jet(x)
    }
}

/// Adapter for closures returning a [`Jet`].
pub struct FnSmooth<F>(pub F);

impl<F> Smooth for FnSmooth<F>
where
    F: Fn(f64) -> Jet + Sync,
{
    fn jet(&self, x: f64) -> Result<Jet> {
        Ok((self.0)(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl Smooth for Constant {
    fn jet(&self, _x: f64) -> Result<Jet> {
        Ok(Jet::constant(self.0))
    }
}

/// `exp(-(x - center)^2 / (2 width^2))`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub center: f64,
    pub width: f64,
}

impl Smooth for Gaussian {
    fn jet(&self, x: f64) -> Result<Jet> {
        let s2 = self.width * self.width;
        let u = x - self.center;
        let g = (-0.5 * u * u / s2).exp();
        Ok(Jet::new(g, -u / s2 * g, (u * u / s2 - 1.0) / s2 * g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let g = Gaussian {
            center: 0.3,
            width: 0.7,
        };
        let h = 1e-4;
        for &x in &[-1.0, 0.0, 0.3, 1.1] {
            let j = g.jet(x).unwrap();
            let fp = g.value(x + h).unwrap();
            let fm = g.value(x - h).unwrap();
            let d1 = (fp - fm) / (2.0 * h);
            let d2 = (fp - 2.0 * j.value + fm) / (h * h);
            assert!((j.d1 - d1).abs() < 1e-7);
            assert!((j.d2 - d2).abs() < 1e-6);
        }
    }

    #[test]
    fn product_rule() {
        let a = Jet::new(2.0, 3.0, 5.0);
        let b = Jet::new(7.0, 11.0, 13.0);
        let p = a.mul(b);
        assert_eq!(p.value, 14.0);
        assert_eq!(p.d1, 3.0 * 7.0 + 2.0 * 11.0);
        assert_eq!(p.d2, 5.0 * 7.0 + 2.0 * 3.0 * 11.0 + 2.0 * 13.0);
    }
}
