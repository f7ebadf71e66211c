//! Normalized branch shapes and branches.
//!
//! A [`Shape`] is an increasing diffeomorphism `h` of `[0, 1]` with `h(0) = 0`
//! and `h(1) = 1`. A [`Branch`] places a shape between a domain and an image
//! interval by affine changes of coordinates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Df(t) = K·exp(A·sign(t−c)·|t−c|^β)` on `[0, 1]`, normalized so that
/// `h(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerKink {
    pub c: f64,
    pub beta: f64,
    pub amp: f64,
    ln_k: f64,
}

impl PowerKink {
    pub fn new(c: f64, beta: f64, amp: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidMap(format!("kink center {c} must lie in (0, 1)")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidMap(format!("kink exponent {beta} must lie in (0, 1)")));
        }
        if !amp.is_finite() {
            return Err(Error::InvalidMap("kink amplitude must be finite".into()));
        }
        let mut pk = PowerKink { c, beta, amp, ln_k: 0.0 };
        let mass = pk.series(1.0 - c, 1.0) + pk.series(c, -1.0);
        pk.ln_k = -mass.ln();
        Ok(pk)
    }

    /// `s(t) = sign(t−c)·|t−c|^β`.
    fn s(&self, t: f64) -> f64 {
        let r = t - self.c;
        r.signum() * r.abs().powf(self.beta)
    }

    /// `∫₀^r exp(σ·A·ρ^β) dρ = r·Σ_k (σ A r^β)^k / (k! (kβ+1))`.
    fn series<S: Scalar>(&self, r: S, sigma: f64) -> S {
        let zero = S::from_f64(0.0);
        if !(r > zero) {
            return zero;
        }
        let x = r.powf(self.beta) * S::from_f64(sigma * self.amp);
        let mut term = S::from_f64(1.0);
        let mut sum = S::from_f64(1.0);
        for k in 1..400 {
            term = term * x / S::from_f64(k as f64);
            let add = term / S::from_f64(k as f64 * self.beta + 1.0);
            sum = sum + add;
            if add.abs().to_f64() <= S::SERIES_EPS * sum.abs().to_f64() {
                break;
            }
        }
        r * sum
    }

    fn value<S: Scalar>(&self, t: S) -> S {
        let c = S::from_f64(self.c);
        let k = S::from_f64(self.ln_k).exp();
        let base = self.series(c, -1.0);
        if t < c {
            k * (base - self.series(c - t, -1.0))
        } else {
            k * (base + self.series(t - c, 1.0))
        }
    }

    fn ln_d1(&self, t: f64) -> f64 {
        self.ln_k + self.amp * self.s(t)
    }

    fn d1<S: Scalar>(&self, t: S) -> S {
        let r = t - S::from_f64(self.c);
        let zero = S::from_f64(0.0);
        let s = if r < zero {
            -(-r).powf(self.beta)
        } else {
            r.powf(self.beta)
        };
        (S::from_f64(self.ln_k) + S::from_f64(self.amp) * s).exp()
    }

    /// `∫₀¹ h''/h' = A·(s(1) − s(0))`.
    pub fn total_nonlinearity(&self) -> f64 {
        self.amp * (self.s(1.0) - self.s(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Linear,
    /// `h(t) = t·m / (1 + t(m−1))`.
    Moebius { m: f64 },
    PowerKink(PowerKink),
}

impl Shape {
    pub fn moebius(m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidMap(format!("Moebius parameter {m} must be positive")));
        }
        Ok(Shape::Moebius { m })
    }

    pub fn power_kink(c: f64, beta: f64, amp: f64) -> Result<Self> {
        PowerKink::new(c, beta, amp).map(Shape::PowerKink)
    }

    pub fn value<S: Scalar>(&self, t: S) -> S {
        match self {
            Shape::Linear => t,
            Shape::Moebius { m } => {
                let m = S::from_f64(*m);
                t * m / (S::from_f64(1.0) + t * (m - S::from_f64(1.0)))
            }
            Shape::PowerKink(pk) => pk.value(t),
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        match self {
            Shape::Linear => 1.0,
            Shape::Moebius { m } => m / (1.0 + t * (m - 1.0)).powi(2),
            Shape::PowerKink(pk) => pk.d1(t),
        }
    }

    /// Second derivative; infinite at a kink center with `A ≠ 0`.
    pub fn d2(&self, t: f64) -> f64 {
        match self {
            Shape::Linear => 0.0,
            Shape::Moebius { m } => -2.0 * m * (m - 1.0) / (1.0 + t * (m - 1.0)).powi(3),
            Shape::PowerKink(pk) => {
                if pk.amp == 0.0 {
                    return 0.0;
                }
                let r = (t - pk.c).abs();
                pk.d1(t) * pk.amp * pk.beta * r.powf(pk.beta - 1.0)
            }
        }
    }

    pub fn ln_d1(&self, t: f64) -> f64 {
        match self {
            Shape::Linear => 0.0,
            Shape::Moebius { m } => m.ln() - 2.0 * (1.0 + t * (m - 1.0)).ln(),
            Shape::PowerKink(pk) => pk.ln_d1(t),
        }
    }

    /// `∫₀¹ h''/h'`.
    pub fn total_nonlinearity(&self) -> f64 {
        self.ln_d1(1.0) - self.ln_d1(0.0)
    }

    /// Solves `h(t) = y`.
    pub fn inverse<S: Scalar>(&self, y: S) -> S {
        match self {
            Shape::Linear => y,
            Shape::Moebius { m } => {
                let m = S::from_f64(*m);
                y / (m - y * (m - S::from_f64(1.0)))
            }
            Shape::PowerKink(pk) => {
                let mut lo = S::from_f64(0.0);
                let mut hi = S::from_f64(1.0);
                while pk.value(lo) > y {
                    lo = lo - (hi - lo);
                }
                while pk.value(hi) < y {
                    hi = hi + (hi - lo);
                }
                let mut t = y;
                if !(t > lo && t < hi) {
                    t = (lo + hi) * S::from_f64(0.5);
                }
                for _ in 0..200 {
                    let g = pk.value(t) - y;
                    if g > S::from_f64(0.0) {
                        hi = t;
                    } else {
                        lo = t;
                    }
                    let step = g / pk.d1(t);
                    let mut next = t - step;
                    if !(next > lo && next < hi) {
                        next = (lo + hi) * S::from_f64(0.5);
                    }
                    let moved = (next - t).abs().to_f64();
                    t = next;
                    if moved <= S::SERIES_EPS * 4.0 || (hi - lo).to_f64() <= S::SERIES_EPS {
                        break;
                    }
                }
                t
            }
        }
    }

    /// Points of `[0, 1]` where the second derivative is singular.
    pub fn kink(&self) -> Option<f64> {
        match self {
            Shape::PowerKink(pk) if pk.amp != 0.0 => Some(pk.c),
            _ => None,
        }
    }
}

/// Increasing homeomorphism `[a, b) → [u, v)` of the form
/// `x ↦ u + (v−u)·h((x−a)/(b−a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Branch {
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub v: f64,
    pub shape: Shape,
}

impl Branch {
    pub fn new(a: f64, b: f64, u: f64, v: f64, shape: Shape) -> Result<Self> {
        if !(b > a && v > u) {
            return Err(Error::InvalidMap(format!(
                "branch [{a}, {b}) -> [{u}, {v}) is degenerate"
            )));
        }
        Ok(Branch { a, b, u, v, shape })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn image_len(&self) -> f64 {
        self.v - self.u
    }

    fn scale(&self) -> f64 {
        (self.v - self.u) / (self.b - self.a)
    }

    fn local<S: Scalar>(&self, x: S) -> S {
        let a = S::from_f64(self.a);
        (x - a) / (S::from_f64(self.b) - a)
    }

    pub fn value<S: Scalar>(&self, x: S) -> S {
        let u = S::from_f64(self.u);
        u + (S::from_f64(self.v) - u) * self.shape.value(self.local(x))
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.scale() * self.shape.d1(self.local(x))
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.scale() / self.len() * self.shape.d2(self.local(x))
    }

    pub fn ln_d1(&self, x: f64) -> f64 {
        self.scale().ln() + self.shape.ln_d1(self.local(x))
    }

    /// `(value, Df, D²f)` at `x`.
    pub fn jet<S: Scalar>(&self, x: S) -> (S, f64, f64) {
        let xf = x.to_f64();
        (self.value(x), self.d1(xf), self.d2(xf))
    }

    pub fn inverse<S: Scalar>(&self, y: S) -> S {
        let u = S::from_f64(self.u);
        let t = self.shape.inverse((y - u) / (S::from_f64(self.v) - u));
        let a = S::from_f64(self.a);
        a + (S::from_f64(self.b) - a) * t
    }

    /// `∫_{x0}^{x1} f''/f' = ln Df(x1) − ln Df(x0)`.
    pub fn nonlinearity(&self, x0: f64, x1: f64) -> f64 {
        self.shape.ln_d1(self.local(x1)) - self.shape.ln_d1(self.local(x0))
    }

    pub fn kink(&self) -> Option<f64> {
        self.shape.kink().map(|c| self.a + c * self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleDouble;

    fn shapes() -> Vec<Shape> {
        vec![
            Shape::Linear,
            Shape::moebius(1.3).unwrap(),
            Shape::moebius(0.6).unwrap(),
            Shape::power_kink(0.4, 0.6, 0.5).unwrap(),
            Shape::power_kink(0.7, 0.3, -1.2).unwrap(),
        ]
    }

    #[test]
    fn shapes_fix_endpoints() {
        for s in shapes() {
            assert!(s.value(0.0f64).abs() < 1e-15, "{s:?}");
            assert!((s.value(1.0f64) - 1.0).abs() < 1e-14, "{s:?}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for s in shapes() {
            for i in 1..200 {
                let t = i as f64 / 200.0;
                if let Some(c) = s.kink() {
                    if (t - c).abs() < 1e-3 {
                        continue;
                    }
                }
                let fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
                assert!((fd - s.d1(t)).abs() <= 1e-6f64.max(1e-4 * s.d1(t).abs()), "{s:?} t={t}");
                let fd2 = (s.d1(t + h) - s.d1(t - h)) / (2.0 * h);
                assert!((fd2 - s.d2(t)).abs() <= 1e-4f64.max(1e-4 * s.d2(t).abs()), "{s:?} t={t}");
                assert!((s.ln_d1(t) - s.d1(t).ln()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn moebius_nonlinearity_closed_form() {
        let m = 1.7f64;
        let s = Shape::moebius(m).unwrap();
        assert!((s.total_nonlinearity() + 2.0 * m.ln()).abs() < 1e-15);
    }

    #[test]
    fn kink_with_zero_amplitude_is_linear() {
        let s = Shape::power_kink(0.3, 0.5, 0.0).unwrap();
        for t in [0.1, 0.3, 0.77] {
            assert!((s.value(t) - t).abs() < 1e-15);
            assert_eq!(s.d1(t), 1.0);
        }
        assert_eq!(s.kink(), None);
    }

    #[test]
    fn inverses_round_trip() {
        for s in shapes() {
            for i in 0..=50 {
                let t = i as f64 / 50.0;
                let back = s.inverse(s.value(t));
                assert!((back - t).abs() < 1e-13, "{s:?} {t} {back}");
            }
        }
    }

    #[test]
    fn double_double_kink_values_agree_and_refine() {
        let s = Shape::power_kink(0.4, 0.6, 0.8).unwrap();
        for t in [0.05, 0.39, 0.4, 0.41, 0.9] {
            let dd = s.value(DoubleDouble::from_f64(t));
            assert!((dd.to_f64() - s.value(t)).abs() < 1e-15);
            let back = s.inverse(dd);
            assert!((back - DoubleDouble::from_f64(t)).to_f64().abs() < 1e-28);
        }
    }

    #[test]
    fn branch_frames() {
        let b = Branch::new(0.2, 0.5, 0.6, 0.7, Shape::moebius(2.0).unwrap()).unwrap();
        assert!((b.value(0.2f64) - 0.6).abs() < 1e-15);
        assert!((b.value(0.5f64) - 0.7).abs() < 1e-15);
        // slope at the left end is m·|image|/|domain|
        assert!((b.d1(0.2) - 2.0 / 3.0).abs() < 1e-14);
        assert!((b.inverse(b.value(0.31f64)) - 0.31).abs() < 1e-15);
        assert!((b.nonlinearity(0.2, 0.5) + 2.0 * 2f64.ln()).abs() < 1e-14);
    }
}
