//! Two break-equivalent zero-mean maps with different shapes: their
//! renormalizations approach each other.

use rauzy_lab::analysis::{level_distance, Trend};
use rauzy_lab::experiments::desk::ko_pair;
use rauzy_lab::induction::renormalize;
use rauzy_lab::maps::break_points;

fn main() -> rauzy_lab::Result<()> {
    let (f, g) = ko_pair()?;
    println!("breaks of f: {:?}", break_points(&f).iter().map(|b| b.amplitude).collect::<Vec<_>>());
    println!("breaks of g: {:?}", break_points(&g).iter().map(|b| b.amplitude).collect::<Vec<_>>());
    let sf = renormalize(&f, 15).into_result()?;
    let sg = renormalize(&g, 15).into_result()?;
    let mut values = Vec::new();
    for n in 1..=15 {
        let d = level_distance(&f, &sf[n], &g, &sg[n], 1025)?;
        println!("n = {n:>2}  |R^n f - R^n g|_C1 = {:.3e}", d.c1());
        values.push(d.c1());
    }
    let t = Trend::of(&(1..=15).collect::<Vec<_>>(), &values);
    println!("log-slope {:.4}, squares bounded {}", t.slope, t.l2.bounded());
    Ok(())
}
