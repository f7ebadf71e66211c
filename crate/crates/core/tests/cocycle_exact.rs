//! Exact cocycle identities over whole Rauzy classes and long paths.

use num_bigint::BigInt;
use num_traits::One;
use rauzy_lab::cocycle::{theta_matrix, CocyclePath};
use rauzy_lab::combinatorics::{omega_matrix, rauzy_class, rauzy_move, MoveType, Pair};
use rauzy_lab::linalg::IntMatrix;

fn transpose(m: &IntMatrix) -> IntMatrix {
    let d = m.rows();
    let mut t = IntMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            t[(i, j)] = m[(j, i)].clone();
        }
    }
    t
}

#[test]
fn theta_omega_on_every_edge() {
    for mono in [vec![2, 1], vec![3, 2, 1], vec![4, 3, 2, 1], vec![4, 2, 3, 1], vec![5, 4, 3, 2, 1]] {
        let class = rauzy_class(&Pair::from_monodromy(&mono).unwrap()).unwrap();
        for p in &class.vertices {
            for eps in [MoveType::Zero, MoveType::One] {
                let t = theta_matrix(p, eps).matrix;
                assert_eq!(t.det(), BigInt::one());
                let lhs = t.mul(&omega_matrix(p)).mul(&transpose(&t));
                assert_eq!(lhs, omega_matrix(&rauzy_move(p, eps)), "{p} eps {eps:?}");
            }
        }
    }
}

#[test]
fn products_and_inverses_along_a_long_path() {
    let pair = Pair::from_monodromy(&[4, 3, 2, 1]).unwrap();
    let moves: Vec<MoveType> = (0..60).map(|i| if (i * 7 + i / 3) % 5 < 2 { MoveType::Zero } else { MoveType::One }).collect();
    let c = CocyclePath::from_moves(&pair, &moves);
    assert!(c.identities_hold());
    let id = IntMatrix::identity(4);
    for n in [0, 1, 17, 60] {
        assert_eq!(c.product(n).mul(c.inverse_product(n)), id);
        let lhs = c.product(n).mul(&omega_matrix(&pair)).mul(&transpose(c.product(n)));
        assert_eq!(lhs, c.omega(n));
    }
    // entries outgrow i64 without overflow
    assert!(c.return_times(60).iter().all(|q| q > &BigInt::one()));
}

#[test]
fn golden_return_times() {
    let moves: Vec<MoveType> = (0..40).map(|i| if i % 2 == 0 { MoveType::Zero } else { MoveType::One }).collect();
    let c = CocyclePath::from_moves(&Pair::rotation(), &moves);
    let mut fib = vec![BigInt::one(), BigInt::one()];
    while fib.len() < 45 {
        let k = fib.len();
        let next = &fib[k - 1] + &fib[k - 2];
        fib.push(next);
    }
    let q = c.return_times(40);
    assert_eq!(q[0], fib[40]);
    assert_eq!(q[1], fib[41]);
}
