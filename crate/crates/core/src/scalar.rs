//! Working precision for orbit evaluation.
//!
//! Return maps at level `n` compose roughly `Fibonacci(n)` branches, and the
//! zoom divides the accumulated absolute error by a domain length that shrinks
//! at the same rate. Past `n ≈ 20` binary64 is no longer enough, so positions
//! along orbits can be tracked in double-double arithmetic instead.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Arithmetic needed to evaluate branch values along an orbit.
pub trait Scalar:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Relative size at which series expansions may be truncated.
    const SERIES_EPS: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;

    fn abs(self) -> Self {
        if self < Self::from_f64(0.0) {
            -self
        } else {
            self
        }
    }

    fn powf(self, e: f64) -> Self {
        if self.to_f64() == 0.0 {
            return Self::from_f64(0.0);
        }
        (self.ln() * Self::from_f64(e)).exp()
    }
}

impl Scalar for f64 {
    const SERIES_EPS: f64 = 1e-17;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
}

/// Selects the arithmetic used for orbit positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// binary64
    #[default]
    Std,
    /// double-double (about 32 significant digits)
    Dd,
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "std" => Ok(Precision::Std),
            "dd" => Ok(Precision::Dd),
            other => Err(format!("unknown precision `{other}` (expected std or dd)")),
        }
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DoubleDouble::new(self.hi * s, self.lo * s)
    }

    fn square(self) -> Self {
        self * self
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        DoubleDouble::new(s, e)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble::new(-self.hi, -self.lo)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (p, e) = quick_two_sum(p, e);
        DoubleDouble::new(p, e)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * DoubleDouble::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DoubleDouble::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        DoubleDouble::new(q1, q2) + DoubleDouble::from_f64(q3)
    }
}

impl Scalar for DoubleDouble {
    const SERIES_EPS: f64 = 1e-33;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble::new(x, 0.0)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::from_f64(0.0);
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * DoubleDouble::from_f64(k)).ldexp(-9);
        // expm1(r) by Taylor series; |r| < 7e-4 so 12 terms reach 1e-40.
        let mut term = r;
        let mut sum = r;
        for i in 2..14 {
            term = term * r / DoubleDouble::from_f64(i as f64);
            sum = sum + term;
        }
        // expm1(2x) = 2 expm1(x) + expm1(x)^2
        for _ in 0..9 {
            sum = sum.ldexp(1) + sum.square();
        }
        (sum + DoubleDouble::from_f64(1.0)).ldexp(k as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        let mut y = DoubleDouble::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - DoubleDouble::from_f64(1.0);
        }
        y
    }
}
