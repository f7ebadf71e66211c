//! ℓ₂ smoothing sequences and trend statistics.

use serde::Serialize;

use crate::cocycle::ls_slope;
use crate::error::{Error, Result};

/// The sequences `x`, `y`, `z` built from a positive prefix `r₁, r₂, …`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingSequences {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub sum_r2: f64,
    pub sum_x2: f64,
    pub sum_z2: f64,
    /// `(1−λ)⁻² Σ r²`
    pub bound: f64,
}

impl SmoothingSequences {
    pub fn holds(&self) -> bool {
        let slack = 1e-12 * self.bound;
        self.sum_x2 <= self.bound + slack
            && self.sum_z2 <= self.bound + slack
            && self.y.iter().zip(&self.x).all(|(y, x)| *y <= *x + 1e-12 * x.abs())
    }
}

/// With 1-based indices and `r_j = 0` past the prefix:
/// `x_n = Σ_{j≥n} λ^{j−n} r_j`, `y_n = Σ_{j<n} λ^j r_{n+j}`,
/// `z_n = Σ_{j<n} λ^j r_{n−j}`, for `n = 1..=len`.
pub fn l2_smoothing_sequences(r: &[f64], lambda: f64, len: usize) -> Result<SmoothingSequences> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} is not in (0, 1)")));
    }
    if r.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("r must be nonnegative and finite".into()));
    }
    let rj = |j: usize| if j >= 1 && j <= r.len() { r[j - 1] } else { 0.0 };
    // x_n = r_n + λ x_{n+1}
    let top = r.len().max(len);
    let mut x_all = vec![0.0; top + 2];
    for n in (1..=top).rev() {
        x_all[n] = rj(n) + lambda * x_all[n + 1];
    }
    let x: Vec<f64> = x_all[1..=len].to_vec();
    let y: Vec<f64> = (1..=len)
        .map(|n| {
            let mut s = 0.0;
            let mut p = 1.0;
            for j in 0..n {
                if n + j > r.len() {
                    break;
                }
                s += p * rj(n + j);
                p *= lambda;
            }
            s
        })
        .collect();
    let mut z = Vec::with_capacity(len);
    let mut prev = 0.0;
    for n in 1..=len {
        prev = rj(n) + lambda * prev;
        z.push(prev);
    }
    let sq = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
    let sum_r2 = sq(r);
    Ok(SmoothingSequences {
        sum_x2: sq(&x),
        sum_z2: sq(&z),
        bound: sum_r2 / (1.0 - lambda).powi(2),
        sum_r2,
        x,
        y,
        z,
    })
}

/// Least-squares slope of `ln a_n` against `n`; zeros are floored.
pub fn log_slope(ns: &[usize], values: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    ls_slope(&xs, &ys)
}

/// Boundedness of `Σ a_n²` judged from a geometric fit of `a_n²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Proxy {
    pub partial_sum: f64,
    /// Fitted per-step ratio of `a_n²`.
    pub ratio: f64,
    /// `a_N² ρ / (1−ρ)`, infinite when `ρ ≥ 1`.
    pub tail_estimate: f64,
}

impl L2Proxy {
    pub fn bounded(&self) -> bool {
        self.ratio < 1.0 && self.tail_estimate <= self.partial_sum
    }
}

pub fn l2_proxy(ns: &[usize], values: &[f64]) -> L2Proxy {
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    let partial_sum = sq.iter().sum();
    let ratio = log_slope(ns, &sq).exp();
    let last = *sq.last().unwrap_or(&0.0);
    let tail_estimate = if ratio < 1.0 { last * ratio / (1.0 - ratio) } else { f64::INFINITY };
    L2Proxy { partial_sum, ratio, tail_estimate }
}

/// Trend summary of a quantity indexed by level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trend {
    pub slope: f64,
    pub l2: L2Proxy,
}

impl Trend {
    pub fn of(ns: &[usize], values: &[f64]) -> Self {
        Trend { slope: log_slope(ns, values), l2: l2_proxy(ns, values) }
    }

    pub fn decays(&self) -> bool {
        self.slope < 0.0
    }
}
