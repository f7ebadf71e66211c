//! Return maps from the induction against direct iteration in test code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rauzy_lab::combinatorics::Pair;
use rauzy_lab::experiments::desk::golden_moebius;
use rauzy_lab::experiments::random::random_genus_one_map;
use rauzy_lab::induction::{brute_force_first_return, renormalize};
use rauzy_lab::maps::{Giem, Shape};

/// Direct evaluation of `f`: locate the branch, rescale, apply the shape.
fn apply(f: &Giem, x: f64) -> f64 {
    let b = f
        .branches()
        .iter()
        .find(|b| x >= b.a && x < b.b)
        .or_else(|| f.branches().iter().find(|b| x == b.b && b.b >= 1.0))
        .expect("x lies in [0, 1)");
    let t = (x - b.a) / (b.b - b.a);
    let h = match b.shape {
        Shape::Linear => t,
        Shape::Moebius { m } => t * m / (1.0 + t * (m - 1.0)),
        other => other.value(t),
    };
    b.u + (b.v - b.u) * h
}

/// First return to `[0, len)` by plain iteration.
fn first_return(f: &Giem, len: f64, x: f64) -> (f64, u64) {
    let mut y = apply(f, x);
    let mut k = 1;
    while !(0.0..len).contains(&y) {
        y = apply(f, y);
        k += 1;
        assert!(k < 10_000_000, "no return");
    }
    (y, k)
}

fn compare(f: &Giem, levels: usize, points: usize, tol: f64, seed: u64) {
    let r = renormalize(f, levels);
    assert!(r.stopped.is_none(), "{:?}", r.stopped);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in &r.states[1..] {
        for _ in 0..points {
            let a = rng.gen_range(0..s.d());
            let x = s.start[a] + rng.gen_range(1e-6..1.0 - 1e-6) * s.len[a];
            let y = s.eval_return_map(f, a, x, 0).unwrap();
            let (z, k) = first_return(f, s.domain_len, x);
            assert!((y - z).abs() <= tol, "level {} letter {a}: {y} vs {z}", s.level);
            assert_eq!(s.q[a], k.into(), "return time at level {}", s.level);
            let (w, kk) = brute_force_first_return(f, s.domain_len, x, 1 << 20).unwrap();
            assert_eq!((w, kk), (z, k));
        }
    }
}

#[test]
fn golden_moebius_return_maps() {
    compare(&golden_moebius(1.3).unwrap(), 8, 100, 1e-10, 1);
}

#[test]
fn return_times_to_level_ten() {
    compare(&golden_moebius(1.3).unwrap(), 10, 10, 1e-10, 2);
}

#[test]
fn random_maps_return_maps() {
    for seed in 0..12 {
        let f = random_genus_one_map(2 + (seed as usize) % 3, seed);
        compare(&f.unwrap(), 8, 25, 1e-9, seed);
    }
}

#[test]
fn rotation_return_times_are_fibonacci_like() {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = rauzy_lab::maps::make_standard_iem(&Pair::rotation(), &[1.0 - g, g]).unwrap();
    let r = renormalize(&f, 12);
    let totals: Vec<String> = r.states.iter().map(|s| (&s.q[0] + &s.q[1]).to_string()).collect();
    assert_eq!(totals, ["2", "3", "5", "8", "13", "21", "34", "55", "89", "144", "233", "377", "610"]);
}
