//! Seeded random genus-one maps with mixed branch kinds.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{genus, rauzy_class, Pair};
use crate::error::{Error, Result};
use crate::maps::{Giem, Shape};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomDef {
    pub d: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Genus-one pairs with `d` letters, in class order.
pub fn genus_one_pairs(d: usize) -> Result<Vec<Pair>> {
    if !(2..=6).contains(&d) {
        return Err(Error::Dimension(format!("random maps need 2 ≤ d ≤ 6, got {d}")));
    }
    let mut mono: Vec<usize> = vec![d];
    mono.extend(1..d);
    let class = rauzy_class(&Pair::from_monodromy(&mono)?)?;
    Ok(class.vertices.into_iter().filter(|p| genus(p) == 1).collect())
}

fn random_shape(rng: &mut ChaCha8Rng) -> Result<Shape> {
    match rng.gen_range(0..3) {
        0 => Ok(Shape::Linear),
        1 => Shape::moebius(rng.gen_range(0.75..1.35)),
        _ => Shape::power_kink(rng.gen_range(0.2..0.8), rng.gen_range(0.5..0.9), rng.gen_range(-0.4..0.4)),
    }
}

fn simplex_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}

/// A random map on a random genus-one pair of the rotation class.
pub fn random_genus_one_map(d: usize, seed: u64) -> Result<Giem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = genus_one_pairs(d)?;
    let pair = pairs.choose(&mut rng).expect("the rotation class is never empty").clone();
    let lengths = simplex_point(&mut rng, d);
    let images = simplex_point(&mut rng, d);
    let shapes = (0..d).map(|_| random_shape(&mut rng)).collect::<Result<Vec<_>>>()?;
    Giem::new(pair, &lengths, &images, &shapes)
}
