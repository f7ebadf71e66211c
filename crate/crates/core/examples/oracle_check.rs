//! Return maps from the induction against brute-force iteration on seeded
//! random maps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rauzy_lab::experiments::random::random_genus_one_map;
use rauzy_lab::experiments::selftest::oracle_on_state;
use rauzy_lab::induction::renormalize;

fn main() -> rauzy_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..8 {
        let d = 2 + seed as usize % 3;
        let f = random_genus_one_map(d, seed)?;
        let r = renormalize(&f, 8);
        let o = oracle_on_state(&f, r.last(), 100, &mut rng)?;
        println!(
            "seed {seed}: pair {}, level {}, max error {:.2e}, return-time mismatches {}",
            f.pair(),
            o.level,
            o.max_error,
            o.time_mismatches
        );
    }
    Ok(())
}
