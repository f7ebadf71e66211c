//! Build the affine model of a nonlinear map and compare renormalizations.

use rauzy_lab::analysis::{affine_model, level_distance, slope_vector};
use rauzy_lab::experiments::desk::golden_moebius;
use rauzy_lab::induction::renormalize;

fn main() -> rauzy_lab::Result<()> {
    let f = golden_moebius(1.3)?;
    let st = renormalize(&f, 30).into_result()?;
    let path = st[30].history.clone();
    let sv = slope_vector(&f, &st, 25)?;
    let model = affine_model(&path, &sv.omega, 30)?;
    println!("slope vector {:?} ({})", sv.omega, sv.subspace);
    println!("model lengths {:?}, log-slopes {:?}, matched {}/{}", model.lengths, model.log_slopes, model.matched, model.requested);
    let sa = renormalize(&model.map, 15).into_result()?;
    for n in 1..=15 {
        let d = level_distance(&f, &st[n], &model.map, &sa[n], 1025)?;
        println!("n = {n:>2}  c1 {:.3e}  zeta gap {:.3e}  l1'' {:.3e}", d.c1(), d.partition_gap, d.l1_second);
    }
    Ok(())
}
