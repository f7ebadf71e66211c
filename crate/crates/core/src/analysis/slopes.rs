//! `Lⁿ` vectors, their pseudo-orbit residuals and splitting, and the slope
//! vector.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cocycle::{
    canonical_unstable_vector, central_space_limit, stable_subspace_approx, theta_matrix, CocyclePath, SubspaceBasis,
};
use crate::combinatorics::{Letter, RauzyPath};
use crate::error::{Error, Result};
use crate::induction::{compose_along, InductionState};
use crate::linalg::{big_to_f64, gram_determinant, norm2, normalized, rat_to_f64};
use crate::maps::Giem;
use crate::quadrature::integrate_with_breaks;

/// Quadrature tolerance for `Lⁿ`, relative to `|I⁽ⁿ⁾_α|`.
pub const L_TOL: f64 = 1e-10;

/// `m_n = exp(−½ Σ_i ∫_{f^i(I⁽ⁿ⁾_α)} f″/f′)` along the return orbit.
pub fn m_n_coefficient(f: &Giem, state: &InductionState, a: Letter) -> f64 {
    let total: f64 = state
        .orbit(f, a)
        .iter()
        .map(|&(b, lo, hi)| f.branch(b).nonlinearity(lo, hi))
        .sum();
    (-0.5 * total).exp()
}

/// Per-letter means of `ln D(Rⁿf)` at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LVector {
    pub level: usize,
    pub values: Vec<f64>,
}

fn kink_preimages(f: &Giem, state: &InductionState, a: Letter) -> Vec<f64> {
    if f.kinks().is_empty() {
        return Vec::new();
    }
    let letters = state.words[a].to_vec();
    let (mut lo, mut hi) = (state.start[a], state.end(a));
    let mut out = Vec::new();
    for (i, &b) in letters.iter().enumerate() {
        let br = f.branch(b);
        if let Some(k) = br.kink().filter(|&k| k > lo && k < hi) {
            out.push(letters[..i].iter().rev().fold(k, |x, &c| f.branch(c).inverse(x)));
        }
        lo = br.value(lo);
        hi = br.value(hi);
    }
    out
}

/// `Lⁿ_α = |I⁽ⁿ⁾_α|⁻¹ ∫_{I⁽ⁿ⁾_α} ln D(Rⁿf)`.
pub fn l_vector(f: &Giem, state: &InductionState) -> Result<LVector> {
    let mut values = Vec::with_capacity(state.d());
    for a in 0..state.d() {
        let (x0, len) = (state.start[a], state.len[a]);
        if f.is_affine() {
            // ln D is constant on the branch
            values.push(compose_along(f, &state.words[a], x0 + 0.5 * len)?.d1.ln());
            continue;
        }
        let breaks = kink_preimages(f, state, a);
        let failure = std::cell::RefCell::new(None);
        let integral = integrate_with_breaks(
            |x| match compose_along(f, &state.words[a], x) {
                Ok(j) => j.d1.ln(),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            x0,
            x0 + len,
            &breaks,
            L_TOL * len,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        values.push(integral / len);
    }
    Ok(LVector { level: state.level, values })
}

/// `ε_n = L^{n+1} − Θ_n Lⁿ` and its Euclidean norm.
pub fn pseudo_orbit_residual(l_n: &[f64], l_next: &[f64], theta: &crate::linalg::IntMatrix) -> Result<(Vec<f64>, f64)> {
    if l_n.len() != l_next.len() || theta.rows() != l_n.len() {
        return Err(Error::Dimension(format!("vectors of length {} and {}", l_n.len(), l_next.len())));
    }
    let pushed = theta.mul_vec_f64(l_n);
    let eps: Vec<f64> = l_next.iter().zip(&pushed).map(|(a, b)| a - b).collect();
    let n = norm2(&eps);
    Ok((eps, n))
}

/// `L = Lˢ + Lᶜ + Lᵘ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub stable: Vec<f64>,
    pub central: Vec<f64>,
    pub unstable: Vec<f64>,
    pub residual: f64,
}

/// Splits `l` along the given bases, which together must span `ℝ^d`.
pub fn decompose_l(l: &[f64], es: &SubspaceBasis, ec: &SubspaceBasis, eu: &SubspaceBasis) -> Result<Decomposition> {
    let d = l.len();
    let cols: Vec<Vec<f64>> = es.vectors.iter().chain(&ec.vectors).chain(&eu.vectors).cloned().collect();
    if cols.len() != d || cols.iter().any(|c| c.len() != d) {
        return Err(Error::Dimension(format!("{} basis vectors for dimension {d}", cols.len())));
    }
    let g = gram_determinant(&cols);
    if !(g > 1e-10) {
        return Err(Error::DegenerateBasis(g));
    }
    let b = DMatrix::from_fn(d, d, |i, j| cols[j][i]);
    let rhs = DVector::from_column_slice(l);
    let coef = b.clone().lu().solve(&rhs).ok_or(Error::DegenerateBasis(g))?;
    let part = |range: std::ops::Range<usize>| -> Vec<f64> {
        let mut v = vec![0.0; d];
        for j in range {
            for (x, c) in v.iter_mut().zip(&cols[j]) {
                *x += coef[j] * c;
            }
        }
        v
    };
    let (ns, nc) = (es.dim(), ec.dim());
    let stable = part(0..ns);
    let central = part(ns..ns + nc);
    let unstable = part(ns + nc..d);
    let residual = (0..d).map(|i| (stable[i] + central[i] + unstable[i] - l[i]).abs()).fold(0.0, f64::max);
    if residual > 1e-10 * (1.0 + norm2(l)) {
        return Err(Error::DegenerateBasis(g));
    }
    Ok(Decomposition { stable, central, unstable, residual })
}

/// Stable depth used for the bases of [`level_bases`].
pub const STABLE_DEPTH: usize = 20;

/// Smallest `p` such that the path is periodic with period `p`, if any.
fn path_period(path: &RauzyPath) -> Option<usize> {
    let moves = path.moves();
    (1..=moves.len() / 2).find(|&p| {
        path.prefix(p).end() == *path.start() && moves.iter().enumerate().skip(p).all(|(i, m)| *m == moves[i - p])
    })
}

/// Up to four closure lengths: multiples of the period if the path is
/// periodic, otherwise evenly spaced prefixes.
pub fn central_ladder(path: &RauzyPath) -> Vec<usize> {
    let n = path.len();
    if let Some(p) = path_period(path) {
        return (1..=4).map(|k| k * p).filter(|&m| m <= n).collect();
    }
    let mut out: Vec<usize> = (1..=4).map(|k| k * n / 4).filter(|&m| m > 0).collect();
    out.dedup();
    out
}

/// `(E^s_n, E^c_{n,∞}, E^u_n)` along a path, `E^u_n` pushed forward from
/// the canonical unstable vector at level 0.
#[derive(Debug, Clone)]
pub struct LevelBases {
    pub stable: SubspaceBasis,
    pub central: SubspaceBasis,
    pub unstable: SubspaceBasis,
}

/// Bases at level `n`; the path must extend at least one step past `n`.
pub fn level_bases(path: &RauzyPath, cocycle: &CocyclePath, n: usize) -> Result<LevelBases> {
    if n >= path.len() {
        return Err(Error::InvalidArgument(format!("level {n} needs a path longer than {}", path.len())));
    }
    let tail = RauzyPath::from_moves(cocycle.pair(n), &path.moves()[n..]);
    let tail_cocycle = CocyclePath::new(&tail);
    let stable = stable_subspace_approx(&tail_cocycle, STABLE_DEPTH.min(tail.len()))?.basis;
    let d = path.start().d();
    let central = if d - cocycle.omega(n).rank() == 0 {
        SubspaceBasis::trivial()
    } else {
        let limit = central_space_limit(&tail, &central_ladder(&tail))?;
        let vectors = limit
            .graph_vectors(tail.start())
            .iter()
            .map(|v| v.iter().map(rat_to_f64).collect())
            .collect();
        SubspaceBasis::new(vectors, limit.increments.last().copied().unwrap_or(0.0))?
    };
    let u0 = canonical_unstable_vector(path.start());
    let u = cocycle.product(n).mul_vec_f64(&u0);
    let unstable = SubspaceBasis::new(vec![normalized(&u)], 0.0)?;
    Ok(LevelBases { stable, central, unstable })
}

/// `ω̃_N` with its convergence record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeVector {
    pub omega: Vec<f64>,
    /// Which invariant subspace `omega` was projected to.
    pub subspace: String,
    /// `‖ω̃_{n+1} − ω̃_n‖`.
    pub increments: Vec<f64>,
    /// Whether the last increments fell below [`SLOPE_TOL`]; never set on a guess.
    pub converged: bool,
}

pub const SLOPE_TOL: f64 = 1e-6;

/// `ω̃_n = Θ_{0,n−1}⁻¹ Lᶜ_n` for `n ≤ depth`, from renormalization states
/// `states[0..]` whose path extends past `depth`.
pub fn slope_vector(f: &Giem, states: &[InductionState], depth: usize) -> Result<SlopeVector> {
    let last = states.last().ok_or_else(|| Error::InvalidArgument("no states".into()))?;
    let path = last.history.clone();
    if depth >= path.len() {
        return Err(Error::InvalidArgument(format!("depth {depth} needs more than {} levels", path.len())));
    }
    let d = f.d();
    let cocycle = CocyclePath::new(&path);
    if d - cocycle.omega(0).rank() == 0 {
        // trivial central space: the stable component is fixed to zero
        return Ok(SlopeVector {
            omega: vec![0.0; d],
            subspace: "central (trivial)".into(),
            increments: vec![0.0; depth],
            converged: true,
        });
    }
    let mut tilde = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let l = l_vector(f, &states[n])?;
        let bases = level_bases(&path, &cocycle, n)?;
        let parts = decompose_l(&l.values, &bases.stable, &bases.central, &bases.unstable)?;
        let inv = cocycle.inverse_product(n);
        tilde.push(inv.mul_vec_f64(&parts.central));
    }
    let increments: Vec<f64> = tilde
        .windows(2)
        .map(|w| norm2(&w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect::<Vec<_>>()))
        .collect();
    let tail = &increments[increments.len().saturating_sub(3)..];
    let converged = !tail.is_empty() && tail.iter().all(|&x| x < SLOPE_TOL);
    Ok(SlopeVector { omega: tilde.pop().expect("depth + 1 entries"), subspace: "central".into(), increments, converged })
}

/// `ωⁿ = Θ_{0,n−1} ω` for `n = 0..=len`.
pub fn propagate(path: &RauzyPath, omega: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![omega.to_vec()];
    for s in path.steps() {
        let t = theta_matrix(&s.pair, s.eps);
        let next = t.matrix.mul_vec_f64(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// `Θ_{0,n−1}(1, …, 1)ᵀ` as floats, for diagnostics.
pub fn return_times_f64(cocycle: &CocyclePath, n: usize) -> Vec<f64> {
    cocycle.return_times(n).iter().map(big_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{MoveType, Pair};
    use crate::induction::renormalize;
    use crate::maps::{make_affine_iem, make_standard_iem, Shape};

    #[test]
    fn m_n_examples() {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = make_standard_iem(&Pair::rotation(), &[g, 1.0 - g]).unwrap();
        let r = renormalize(&f, 6).into_result().unwrap();
        for s in &r {
            for a in 0..2 {
                assert_eq!(m_n_coefficient(&f, s, a), 1.0);
            }
        }
        let m = 1.7;
        let h = Giem::new(Pair::rotation(), &[0.4, 0.6], &[0.5, 0.5], &[Shape::moebius(m).unwrap(), Shape::Linear]).unwrap();
        let s = InductionState::initial(&h);
        assert!((m_n_coefficient(&h, &s, 0) - m).abs() < 1e-14);
    }

    #[test]
    fn affine_l_is_propagated_slope() {
        let w0 = 0.25;
        let lam = [0.45, 0.55];
        let w1 = ((1.0 - lam[0] * f64::exp(w0)) / lam[1]).ln();
        let f = make_affine_iem(&Pair::rotation(), &lam, &[w0, w1]).unwrap();
        let r = renormalize(&f, 12).into_result().unwrap();
        let omegas = propagate(&r.last().unwrap().history, &[w0, w1]);
        for (n, s) in r.iter().enumerate() {
            let l = l_vector(&f, s).unwrap();
            for a in 0..2 {
                assert!((l.values[a] - omegas[n][a]).abs() < 1e-9);
            }
            if n + 1 < r.len() {
                let t = theta_matrix(&s.pair, r[n + 1].history.steps()[n].eps).matrix;
                let (_, e) = pseudo_orbit_residual(&l.values, &l_vector(&f, &r[n + 1]).unwrap().values, &t).unwrap();
                assert!(e < 1e-9);
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let es = SubspaceBasis::new(vec![vec![1.0, -0.6]], 0.0).unwrap();
        let eu = SubspaceBasis::new(vec![vec![1.0, 1.0]], 0.0).unwrap();
        let ec = SubspaceBasis::trivial();
        let l = normalized(&[1.0, -0.6]);
        let p = decompose_l(&l, &es, &ec, &eu).unwrap();
        assert!(norm2(&p.unstable) < 1e-15 && (norm2(&p.stable) - 1.0).abs() < 1e-15);
        let bad = SubspaceBasis { vectors: vec![vec![1.0, 1.0]], residual: 0.0 };
        assert!(matches!(decompose_l(&l, &bad, &ec, &eu), Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn ladder_uses_period() {
        use MoveType::{One, Zero};
        let p = Pair::from_monodromy(&[3, 2, 1]).unwrap();
        let moves: Vec<MoveType> = (0..30).map(|i| if i % 2 == 0 { One } else { Zero }).collect();
        let path = RauzyPath::from_moves(p, &moves);
        assert_eq!(central_ladder(&path), vec![6, 12, 18, 24]);
    }
}
