//! The smoothing sequences x, y, z of a slowly decaying positive sequence.

use rauzy_lab::analysis::l2_smoothing_sequences;

fn main() -> rauzy_lab::Result<()> {
    let r: Vec<f64> = (1..=200).map(|j| 1.0 / j as f64).collect();
    for lambda in [0.3, 0.5, 0.9] {
        let s = l2_smoothing_sequences(&r, lambda, 600)?;
        println!(
            "lambda {lambda}: sum r^2 {:.6}, sum x^2 {:.6}, sum z^2 {:.6}, bound {:.6}, holds {}",
            s.sum_r2, s.sum_x2, s.sum_z2, s.bound, s.holds()
        );
    }
    let s = l2_smoothing_sequences(&r, 0.5, 8)?;
    println!("first terms: x {:.4?}\n             y {:.4?}\n             z {:.4?}", s.x, s.y, s.z);
    Ok(())
}
