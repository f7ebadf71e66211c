//! Growth of cone vectors under the Rauzy-Veech cocycle.

use rauzy_lab::cocycle::{canonical_unstable_vector, growth_estimate, CocyclePath, GrowthDirection};
use rauzy_lab::combinatorics::{MoveType, Pair};
use rauzy_lab::tuning::parse_pattern;

fn main() -> rauzy_lab::Result<()> {
    let pair = Pair::rotation();
    let u0 = canonical_unstable_vector(&pair);
    for (name, pattern) in [("golden", "01"), ("silver", "0011"), ("constant", "0")] {
        let moves: Vec<MoveType> = parse_pattern(pattern)?.into_iter().cycle().take(20).collect();
        let path = CocyclePath::from_moves(&pair, &moves);
        let fwd = growth_estimate(&path, &u0, GrowthDirection::ForwardUnstable)?;
        let s = path.omega(path.len()).mul_vec_f64(&[1.0, 1.0]);
        let bwd = growth_estimate(&path, &s, GrowthDirection::BackwardStable)?;
        println!("{name:>9}: forward rate {:.6}, backward rate {:.6}", fwd.rate, bwd.rate);
    }
    println!("golden mean {:.6}", (1.0 + 5f64.sqrt()) / 2.0);
    Ok(())
}
