//! Renormalize the golden rotation and print lengths, types and return times.

use rauzy_lab::experiments::desk::golden_standard;
use rauzy_lab::induction::renormalize;

fn main() -> rauzy_lab::Result<()> {
    let f = golden_standard()?;
    let r = renormalize(&f, 12);
    println!("{:>3} {:>5} {:>22} {:>22} {:>6} {:>6}", "n", "type", "|I_A|", "|I_B|", "q_A", "q_B");
    for s in &r.states {
        let eps = s.history.steps().last().map_or("-".to_string(), |st| st.eps.index().to_string());
        println!(
            "{:>3} {:>5} {:>22.16e} {:>22.16e} {:>6} {:>6}",
            s.level, eps, s.len[0], s.len[1], s.q[0], s.q[1]
        );
    }
    let last = r.last();
    println!("ratio |I_A|/|I_B| at level {}: {:.12}", last.level, last.len[0] / last.len[1]);
    Ok(())
}
