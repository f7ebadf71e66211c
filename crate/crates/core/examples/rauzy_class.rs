//! Enumerate Rauzy classes and check the exact cocycle identities on every edge.

use rauzy_lab::cocycle::{check_theta_omega, theta_matrix};
use rauzy_lab::combinatorics::{genus, rauzy_class, Pair};

fn main() -> rauzy_lab::Result<()> {
    for mono in [vec![2, 1], vec![3, 2, 1], vec![4, 3, 2, 1], vec![4, 2, 3, 1], vec![5, 4, 3, 2, 1]] {
        let start = Pair::from_monodromy(&mono)?;
        let class = rauzy_class(&start)?;
        let ok = class
            .edges
            .iter()
            .all(|&(v, eps, _)| check_theta_omega(&class.vertices[v], eps) && theta_matrix(&class.vertices[v], eps).matrix.det() == 1.into());
        println!(
            "{mono:?}: {} pairs, {} edges, genus {}, identities {}",
            class.len(),
            class.edges.len(),
            genus(&start),
            if ok { "hold" } else { "FAIL" }
        );
    }
    let class = rauzy_class(&Pair::from_monodromy(&[3, 2, 1])?)?;
    for (from, eps, to) in &class.edges {
        println!("  {} --{}--> {}", class.vertices[*from], eps.index(), class.vertices[*to]);
    }
    Ok(())
}
