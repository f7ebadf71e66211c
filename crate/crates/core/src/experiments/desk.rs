//! Named maps used by the desk experiments.

use crate::combinatorics::Pair;
use crate::error::{Error, Result};
use crate::maps::{break_amplitude, make_standard_iem, Giem, Shape};
use crate::tuning::{parse_pattern, tune_two_interval, DEFAULT_DEPTH};

pub const PRESETS: [&str; 5] = ["golden-standard", "golden-moebius", "ko-f", "ko-g", "rational-rotation"];

/// Möbius parameter of the `A` branch of the golden Möbius map.
pub const GOLDEN_M: f64 = 1.3;

pub fn golden_ratio_length() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// The rotation by the inverse golden mean, with `|A| < |B|` so that its
/// types read `0, 1, 0, 1, …`.
pub fn golden_standard() -> Result<Giem> {
    let g = golden_ratio_length();
    make_standard_iem(&Pair::rotation(), &[1.0 - g, g])
}

/// Tuning depth of the kinked pair; enough for the residuals at level 20.
pub const KO_DEPTH: usize = 24;

fn golden_tuned(shapes: &[Shape], odds: f64, depth: usize) -> Result<Giem> {
    let golden = parse_pattern("golden")?;
    Ok(tune_two_interval(&Pair::rotation(), shapes, odds, &golden, depth)?.map)
}

/// Möbius branches `m` and `1/m`, tuned to the golden path.
pub fn golden_moebius(m: f64) -> Result<Giem> {
    golden_tuned(&[Shape::moebius(m)?, Shape::moebius(1.0 / m)?], 1.0, DEFAULT_DEPTH)
}

/// A power kink whose amplitude cancels the nonlinearity of `other`.
pub fn balancing_kink(c: f64, beta: f64, other: &Shape) -> Result<Shape> {
    let span = (1.0 - c).powf(beta) + c.powf(beta);
    Shape::power_kink(c, beta, -other.total_nonlinearity() / span)
}

fn ko_shapes(m: f64, c: f64) -> Result<[Shape; 2]> {
    let a = Shape::moebius(m)?;
    Ok([a, balancing_kink(c, 0.6, &a)?])
}

/// Zero-mean map with a Möbius branch and a kinked branch on the golden path.
pub fn ko_f() -> Result<Giem> {
    golden_tuned(&ko_shapes(1.3, 0.4)?, 1.0, KO_DEPTH)
}

/// Zero-mean map with different shapes whose break amplitude matches
/// [`ko_f`], on the same path.
pub fn ko_g() -> Result<Giem> {
    Ok(ko_pair()?.1)
}

/// [`ko_f`] and [`ko_g`] with a single tuning of `f`.
pub fn ko_pair() -> Result<(Giem, Giem)> {
    let f = ko_f()?;
    let target = break_amplitude(&f, f.branch(1).a)?.amplitude;
    let shapes = ko_shapes(1.15, 0.7)?;
    // the break at the interior endpoint is ln K − ln h_A′(1) + ln h_B′(0)
    let odds = (target - shapes[0].ln_d1(1.0) + shapes[1].ln_d1(0.0)).exp();
    let g = golden_tuned(&shapes, odds, KO_DEPTH)?;
    Ok((f, g))
}

pub fn preset(name: &str) -> Result<Giem> {
    match name {
        "golden-standard" => golden_standard(),
        "golden-moebius" => golden_moebius(GOLDEN_M),
        "ko-f" => ko_f(),
        "ko-g" => ko_g(),
        "rational-rotation" => make_standard_iem(&Pair::rotation(), &[0.4, 0.6]),
        _ => Err(Error::InvalidArgument(format!("unknown preset `{name}`; expected one of {PRESETS:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{break_points, mean_nonlinearity};

    #[test]
    fn ko_pair_is_break_equivalent() {
        let (f, g) = ko_pair().unwrap();
        assert!(mean_nonlinearity(&f).abs() < 1e-12);
        assert!(mean_nonlinearity(&g).abs() < 1e-12);
        let bf = break_points(&f);
        let bg = break_points(&g);
        assert_eq!(bf.len(), bg.len());
        for (a, b) in bf.iter().zip(&bg) {
            assert!((a.amplitude - b.amplitude).abs() < 1e-9, "{a:?} {b:?}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(preset("silver").is_err());
        assert!(preset("golden-moebius").unwrap().shapes()[0] == Shape::moebius(1.3).unwrap());
    }
}
