//! Affine models and distances between renormalizations.

use serde::Serialize;

use super::slopes::propagate;
use super::zoom::{c1_distance, l1_second_derivative_distance, zoom};
use crate::combinatorics::{MoveType, RauzyPath};
use crate::error::{Error, Result};
use crate::induction::{renormalize, InductionState};
use crate::maps::{make_affine_iem, Giem};

/// The constructed model and how far its combinatorics agrees.
#[derive(Debug, Clone)]
pub struct AffineModel {
    pub map: Giem,
    pub lengths: Vec<f64>,
    pub log_slopes: Vec<f64>,
    /// Number of leading steps whose type, winner and loser match.
    pub matched: usize,
    pub requested: usize,
}

/// Pulls a positive vector back along the first `n` steps of `path` through
/// the inverse length maps of the affine map with slopes `ωⁱ`.
fn pulled_back_lengths(path: &RauzyPath, omega: &[f64], n: usize) -> Result<Vec<f64>> {
    let omegas = propagate(&path.prefix(n), omega);
    let mut lam = compatible_lengths(&omegas[n])?;
    for i in (0..n).rev() {
        let step = &path.steps()[i];
        let w = &omegas[i];
        let (win, lose) = (step.winner, step.loser);
        match step.eps {
            MoveType::Zero => lam[win] += w[lose].exp() * lam[lose],
            MoveType::One => {
                // the loser is α(0) and the winner α(1)
                lam[lose] *= w[win].exp();
                lam[win] += lam[lose] / w[win].exp();
            }
        }
        let s: f64 = lam.iter().sum();
        for x in lam.iter_mut() {
            *x /= s;
        }
    }
    Ok(lam)
}

/// A positive `x` with `Σ e^{ω_α} x_α = Σ x_α`, as close to `(1, …, 1)` as
/// possible.
fn compatible_lengths(omega: &[f64]) -> Result<Vec<f64>> {
    let c: Vec<f64> = omega.iter().map(|w| w.exp_m1()).collect();
    let cc: f64 = c.iter().map(|x| x * x).sum();
    if cc < 1e-28 {
        return Ok(vec![1.0; c.len()]);
    }
    let shift = c.iter().sum::<f64>() / cc;
    let x: Vec<f64> = c.iter().map(|ci| 1.0 - shift * ci).collect();
    if x.iter().all(|&v| v > 1e-3) {
        return Ok(x);
    }
    let pos = c.iter().filter(|&&v| v > 0.0).count() as f64;
    let neg = c.iter().filter(|&&v| v < 0.0).count() as f64;
    if pos == 0.0 || neg == 0.0 {
        return Err(Error::InvalidArgument("slopes admit no affine map: all of one sign".into()));
    }
    Ok(c.iter()
        .map(|&ci| if ci > 0.0 { 1.0 / (pos * ci) } else if ci < 0.0 { -1.0 / (neg * ci) } else { 1.0 })
        .collect())
}

/// The affine interval exchange with slopes `e^ω` whose combinatorics follows
/// the first `n` steps of `path`.
///
/// Image lengths are renormalized to sum to 1, which shifts all slopes by a
/// common constant when `ω` is not exactly compatible.
pub fn affine_model(path: &RauzyPath, omega: &[f64], n: usize) -> Result<AffineModel> {
    if n == 0 || n > path.len() {
        return Err(Error::InvalidArgument(format!("model depth {n} outside 1..={}", path.len())));
    }
    if omega.len() != path.start().d() || omega.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument("slope vector must be finite of dimension d".into()));
    }
    let lengths = pulled_back_lengths(path, omega, n)?;
    let images: Vec<f64> = lengths.iter().zip(omega).map(|(l, w)| l * w.exp()).collect();
    let total: f64 = images.iter().sum();
    let log_slopes: Vec<f64> = omega.iter().map(|w| w - total.ln()).collect();
    let map = make_affine_iem(path.start(), &lengths, &log_slopes)?;
    let r = renormalize(&map, n);
    let model_path = r.path();
    let matched = model_path
        .steps()
        .iter()
        .zip(path.steps())
        .take_while(|(a, b)| a.eps == b.eps && a.winner == b.winner && a.loser == b.loser)
        .count();
    if matched < n / 2 {
        return Err(Error::ModelRejected(matched));
    }
    Ok(AffineModel { map, lengths, log_slopes, matched, requested: n })
}

/// Lengths and image lengths of `Rⁿf` relative to `|I⁽ⁿ⁾|`.
pub fn partition_vectors(state: &InductionState) -> (Vec<f64>, Vec<f64>) {
    let zeta = state.len.iter().map(|l| l / state.domain_len).collect();
    let image = (0..state.d()).map(|a| state.image_len(a) / state.domain_len).collect();
    (zeta, image)
}

/// Distance between `Rⁿf` and `Rⁿg` at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelDistance {
    pub level: usize,
    /// `max_α` C¹ distance of the zoomed branches.
    pub zoomed_c1: f64,
    /// `max_α |ζⁿ_α − ζ̃ⁿ_α|`.
    pub partition_gap: f64,
    /// The same for the image partition.
    pub image_gap: f64,
    /// `max_α` L¹ distance of the zoomed second derivatives.
    pub l1_second: f64,
}

impl LevelDistance {
    /// Composite C¹ distance of the rescaled return maps.
    pub fn c1(&self) -> f64 {
        self.zoomed_c1 + self.partition_gap + self.image_gap
    }
}

/// Compares two renormalizations with the same pair at the same level.
pub fn level_distance(f: &Giem, sf: &InductionState, g: &Giem, sg: &InductionState, nodes: usize) -> Result<LevelDistance> {
    if sf.pair != sg.pair {
        return Err(Error::InvalidArgument(format!("pairs {} and {} differ", sf.pair, sg.pair)));
    }
    let (zf, imf) = partition_vectors(sf);
    let (zg, img) = partition_vectors(sg);
    let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut zoomed_c1: f64 = 0.0;
    let mut l1_second: f64 = 0.0;
    for a in 0..sf.d() {
        let za = zoom(f, sf, a, nodes)?;
        let zb = zoom(g, sg, a, nodes)?;
        zoomed_c1 = zoomed_c1.max(c1_distance(&za, &zb)?);
        l1_second = l1_second.max(l1_second_derivative_distance(&za, &zb)?);
    }
    Ok(LevelDistance {
        level: sf.level,
        zoomed_c1,
        partition_gap: gap(&zf, &zg),
        image_gap: gap(&imf, &img),
        l1_second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Pair;
    use crate::maps::make_standard_iem;

    fn affine(pair: &Pair, lam: &[f64], w: &[f64]) -> (Giem, Vec<f64>) {
        // shift the slopes so that Σ e^ω λ = 1
        let s: f64 = lam.iter().zip(w).map(|(l, w)| l * f64::exp(*w)).sum();
        let w: Vec<f64> = w.iter().map(|x| x - s.ln()).collect();
        (make_affine_iem(pair, lam, &w).unwrap(), w)
    }

    #[test]
    fn affine_model_reconstructs_affine_maps() {
        let lam = [0.45, 0.55];
        let (f, w) = affine(&Pair::rotation(), &lam, &[0.3, 0.0]);
        let path = renormalize(&f, 40).path().clone();
        let model = affine_model(&path, &w, 40).unwrap();
        for a in 0..2 {
            assert!((model.lengths[a] - lam[a]).abs() < 1e-8, "{:?}", model.lengths);
            assert!((model.log_slopes[a] - w[a]).abs() < 1e-8);
        }
        assert_eq!(model.matched, 40);
    }

    #[test]
    fn affine_model_in_three_intervals() {
        let lam = [0.3, 0.45, 0.25];
        let (f, w) = affine(&Pair::from_monodromy(&[3, 2, 1]).unwrap(), &lam, &[0.2, -0.1, 0.0]);
        let path = renormalize(&f, 50).path().clone();
        let model = affine_model(&path, &w, 50).unwrap();
        assert_eq!(model.matched, 50);
        for a in 0..3 {
            assert!((model.lengths[a] - lam[a]).abs() < 1e-8, "{:?}", model.lengths);
        }
    }

    #[test]
    fn zero_slopes_give_the_standard_map() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = make_standard_iem(&Pair::rotation(), &[g, 1.0 - g]).unwrap();
        let path = renormalize(&f, 30).path().clone();
        let model = affine_model(&path, &[0.0, 0.0], 30).unwrap();
        assert!((model.lengths[0] - g).abs() < 1e-10);
        assert!(model.map.is_affine());
    }

    #[test]
    fn identical_maps_are_at_distance_zero() {
        let f = make_standard_iem(&Pair::rotation(), &[0.3, 0.7]).unwrap();
        let s = InductionState::initial(&f);
        let d = level_distance(&f, &s, &f, &s, 1025).unwrap();
        assert_eq!(d.c1(), 0.0);
        assert_eq!(d.l1_second, 0.0);
    }
}
