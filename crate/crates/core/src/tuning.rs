//! Tuning two-interval maps to a prescribed renormalization path.
//!
//! The family is `λ ↦ f_λ` with `|I_A| = λ`, `|I_B| = 1 − λ` and image
//! lengths `μ_A = Kλ / (Kλ + 1 − λ)`, `μ_B = 1 − μ_A`, for fixed shapes and a
//! fixed odds ratio `K`. The type sequence of `f_λ` is monotone in `λ` for
//! the lexicographic order with `0 < 1`, so bisection converges to the
//! parameter whose path starts with the target pattern.

use std::cmp::Ordering;

use crate::combinatorics::{MoveType, Pair};
use crate::error::{Error, Result};
use crate::induction::renormalize;
use crate::maps::{Giem, Shape};

/// Number of types matched when no depth is given.
pub const DEFAULT_DEPTH: usize = 30;

/// `"golden"` or a string over `{0, 1}`.
pub fn parse_pattern(s: &str) -> Result<Vec<MoveType>> {
    if s == "golden" {
        return Ok(vec![MoveType::Zero, MoveType::One]);
    }
    let v = s
        .chars()
        .map(|c| match c {
            '0' => Ok(MoveType::Zero),
            '1' => Ok(MoveType::One),
            _ => Err(Error::InvalidArgument(format!("pattern `{s}` must use 0 and 1"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(Error::InvalidArgument("empty pattern".into()));
    }
    Ok(v)
}

/// The member of the family with parameter `lambda`.
pub fn two_interval_map(pair: &Pair, shapes: &[Shape], odds: f64, lambda: f64) -> Result<Giem> {
    if pair.d() != 2 {
        return Err(Error::Dimension("tuning needs a two-interval map".into()));
    }
    if !(odds > 0.0 && odds.is_finite()) {
        return Err(Error::InvalidArgument(format!("odds {odds} must be positive")));
    }
    let mu = odds * lambda / (odds * lambda + 1.0 - lambda);
    Giem::new(pair.clone(), &[lambda, 1.0 - lambda], &[mu, 1.0 - mu], shapes)
}

/// Result of [`tune_two_interval`].
#[derive(Debug, Clone)]
pub struct Tuned {
    pub map: Giem,
    pub lambda: f64,
    /// Number of leading types that agree with the target.
    pub matched: usize,
}

fn compare(f: &Giem, target: &[MoveType]) -> (Ordering, usize) {
    let r = renormalize(f, target.len());
    let moves = r.path().moves();
    for (i, (m, t)) in moves.iter().zip(target).enumerate() {
        if m != t {
            return (m.cmp(t), i);
        }
    }
    if moves.len() == target.len() {
        (Ordering::Equal, moves.len())
    } else {
        // a numerical connection: either side will do
        (Ordering::Greater, moves.len())
    }
}

/// Bisects for the parameter whose first `depth` types repeat `pattern`.
///
/// Stops when the bracket cannot be split further in binary64; `matched`
/// then reports how far the best parameter agrees.
pub fn tune_two_interval(
    pair: &Pair,
    shapes: &[Shape],
    odds: f64,
    pattern: &[MoveType],
    depth: usize,
) -> Result<Tuned> {
    let target: Vec<MoveType> = pattern.iter().copied().cycle().take(depth).collect();
    let eval = |lambda: f64| -> Result<(Ordering, usize)> {
        Ok(compare(&two_interval_map(pair, shapes, odds, lambda)?, &target))
    };
    let (mut lo, mut hi) = (1e-9, 1.0 - 1e-9);
    let (s_lo, _) = eval(lo)?;
    let (s_hi, _) = eval(hi)?;
    if s_lo == s_hi || s_lo == Ordering::Equal || s_hi == Ordering::Equal {
        return Err(Error::InvalidArgument("target path is not bracketed by the family".into()));
    }
    let mut best = (0usize, 0.5);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (s, matched) = eval(mid)?;
        if matched >= best.0 {
            best = (matched, mid);
        }
        if s == Ordering::Equal {
            break;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (matched, lambda) = best;
    Ok(Tuned { map: two_interval_map(pair, shapes, odds, lambda)?, lambda, matched })
}
