//! Oracles shared by the integration tests. Everything here is written
//! from the closed forms directly and does not call into the library.

#![allow(dead_code)]

/// Unevaluated sum `hi + lo` carrying about 32 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Self {
        self.add(Self::from_f64(x))
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Self::from_f64(q1)).neg());
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Self::from_f64(q2)).neg());
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

/// Jacobi polynomial from its terminating hypergeometric series
/// `Σ_k (a+k+1)_{n-k}/(n-k)! · (n+a+b+1)_k/k! · ((z-1)/2)^k`,
/// summed in double-double arithmetic.
pub fn jacobi_dd(n: usize, a: f64, b: f64, z: f64) -> f64 {
    type D = DoubleDouble;
    let u = D::from_f64(z).add_f64(-1.0).div(D::from_f64(2.0));
    let ab = D::from_f64(a).add_f64(b);
    let mut total = D::ZERO;
    let mut upow = D::ONE;
    for k in 0..=n {
        // (a+k+1)(a+k+2)...(a+n) / (n-k)!
        let mut left = D::ONE;
        for j in (k + 1)..=n {
            left = left.mul(D::from_f64(a).add_f64(j as f64)).div(D::from_f64((j - k) as f64));
        }
        // (n+a+b+1)...(n+a+b+k) / k!
        let mut right = D::ONE;
        for j in 1..=k {
            right = right.mul(ab.add_f64((n + j) as f64)).div(D::from_f64(j as f64));
        }
        total = total.add(left.mul(right).mul(upow));
        upow = upow.mul(u);
    }
    total.to_f64()
}

/// `C2 = (-1 + sqrt(1 + 4V1))/2` and `C1 = V2/2C2` of `W = C1 + C2 tanh x`.
pub fn rm2_constants(v1: f64, v2: f64) -> (f64, f64) {
    let c2 = 0.5 * ((1.0 + 4.0 * v1).sqrt() - 1.0);
    (v2 / (2.0 * c2), c2)
}

/// `W² ∓ W'` for `W = C1 + C2 tanh x`; `sign = -1` gives the lower partner.
pub fn rm2_partner(c1: f64, c2: f64, sign: f64, x: f64) -> f64 {
    let w = c1 + c2 * x.tanh();
    let sech = 1.0 / x.cosh();
    w * w + sign * c2 * sech * sech
}

/// `Ē_n = C2² + V2²/4C2² - (C2 - n)² - V2²/4(C2 - n)²`, eigenvalues of the lower partner.
pub fn rm2_level(v1: f64, v2: f64, n: usize) -> f64 {
    let (_, c2) = rm2_constants(v1, v2);
    let d = c2 - n as f64;
    c2 * c2 + v2 * v2 / (4.0 * c2 * c2) - d * d - v2 * v2 / (4.0 * d * d)
}

/// Bound-state indices: `C2 - n > 0` and `(C2 - n)² > |V2|/2`.
pub fn rm2_admissible(v1: f64, v2: f64) -> Vec<usize> {
    let (_, c2) = rm2_constants(v1, v2);
    (0..)
        .take_while(|&n| c2 - n as f64 > 0.0)
        .filter(|&n| {
            let d = c2 - n as f64;
            d * d > v2.abs() / 2.0
        })
        .collect()
}

/// `W² ∓ W'` for `W = A tanh cx - B coth cx` on `x > 0`.
pub fn gpt_partner(a: f64, b: f64, c: f64, sign: f64, x: f64) -> f64 {
    let (t, s) = ((c * x).tanh(), (c * x).sinh());
    let w = a * t - b / t;
    let dw = a * c * (1.0 - t * t) + b * c / (s * s);
    w * w + sign * dw
}

/// `(A - B)² - (A - B - 2cn)²`
pub fn gpt_level(a: f64, b: f64, c: f64, n: usize) -> f64 {
    let k = a - b;
    k * k - (k - 2.0 * c * n as f64).powi(2)
}

pub fn gpt_admissible(a: f64, b: f64, c: f64) -> Vec<usize> {
    (0..).take_while(|&n| a - b - 2.0 * c * n as f64 > 0.0).collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
