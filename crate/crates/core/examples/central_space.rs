//! Central space of a periodic three-interval path, exactly.

use rauzy_lab::analysis::central_ladder;
use rauzy_lab::cocycle::{central_space_limit, periodic_central_space, quasi_isometry_ratio, CocyclePath};
use rauzy_lab::combinatorics::{MoveType, Pair, RauzyPath};

fn main() -> rauzy_lab::Result<()> {
    let pair = Pair::from_monodromy(&[3, 2, 1])?;
    let moves: Vec<MoveType> = (0..6).map(|i| if i % 2 == 0 { MoveType::One } else { MoveType::Zero }).collect();
    let period = CocyclePath::from_moves(&pair, &moves);
    println!("period matrix:");
    for row in period.product(6).to_strings() {
        println!("  {}", row.join(" "));
    }
    let e = periodic_central_space(&period)?;
    let show = |v: &[num_rational::BigRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    for v in &e.exact {
        println!("fixed vector ({})", show(v));
    }
    let long: Vec<MoveType> = moves.iter().copied().cycle().take(30).collect();
    let path = RauzyPath::from_moves(pair.clone(), &long);
    let limit = central_space_limit(&path, &central_ladder(&path))?;
    println!("ladder {:?}, increments {:?}", limit.ladder, limit.increments);
    let cocycle = CocyclePath::new(&path);
    for v in limit.graph_vectors(&pair) {
        println!("k + Psi k = ({}), quasi-isometry ratio {:.4}", show(&v), quasi_isometry_ratio(&cocycle, &v, 30));
    }
    Ok(())
}
